#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hilfer/cli/commands.hpp"
#include "hilfer/cli/config.hpp"
#include "hilfer/equation_model.hpp"
#include "hilfer/expr.hpp"
#include "hilfer/frac_integral.hpp"
#include "hilfer/mnc_darbo.hpp"
#include "hilfer/solvability.hpp"
#include "hilfer/solver.hpp"
#include "hilfer/special_functions.hpp"

using namespace hilfer;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            if (!detail.empty()) detail += "; ";
            detail += "failed: " + what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string num(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

const FracParams kExample{1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 3.0};

nlohmann::json last_record(const std::string& out) {
    return nlohmann::json::parse(out.substr(out.rfind("\n{") + 1));
}

std::vector<EquationSpec> example_equations(std::optional<double> gamma_k) {
    auto cfg = cli::worked_example_config();
    cfg.gamma_k_override = gamma_k;
    return cli::build_equations(cfg);
}

Outcome criterion1() {
    Outcome o;
    std::ostringstream out, err;
    const int code = cli::run_cli({"check", "--paper-example", "--gamma-k-override", "2.4047",
                                   "--kernel-mass-override", "0.5358"},
                                  out, err);
    const auto rec = last_record(out.str());
    const double threshold = rec["threshold"].get<double>();
    o.require(code == 0, "exit code " + std::to_string(code));
    o.require(std::fabs(threshold - 0.831) <= 0.001, "threshold " + num(threshold));
    o.require(rec["r0_status"] == "admissible", "r0 = 0.83 not admissible");
    o.require(out.str().find("r0 = 0.83 admissible") != std::string::npos, "report line missing");
    o.note("threshold " + num(threshold) + ", r0 = 0.83 admissible");

    std::ostringstream gamma_only, e2;
    cli::run_cli({"check", "--paper-example", "--gamma-k-override", "2.4047"}, gamma_only, e2);
    o.note("Gamma_k override alone gives threshold " + num(last_record(gamma_only.str())["threshold"].get<double>()));
    return o;
}

Outcome criterion2() {
    Outcome o;
    std::mt19937_64 rng(20);
    std::uniform_real_distribution<double> kd(0.1, 1.0), zd(0.1, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double k = kd(rng), z = zd(rng);
        worst = std::max(worst, std::fabs(k_gamma(k, z).value - k_gamma_integral(k, z).value));
    }
    o.require(worst <= 1e-6, "max identity/integral gap " + num(worst));
    const double third = k_gamma(1.0 / 3.0, 2.0 / 3.0).value;
    o.require(std::fabs(third - 1.0 / 3.0) <= 1e-10, "Gamma_{1/3}(2/3) = " + num(third, 17));

    std::ostringstream out, err;
    cli::run_cli({"check", "--paper-example"}, out, err);
    const auto rec = last_record(out.str());
    const double used = rec["equations"][0]["gamma_k_used"].get<double>();
    o.require(std::fabs(used - 1.0 / 3.0) <= 1e-10, "default run used Gamma_k = " + num(used));
    o.require(out.str().find("note:") != std::string::npos && out.str().find("2.4047") != std::string::npos,
              "2.4047 discrepancy not reported");
    o.note("max gap " + num(worst, 3) + ", default Gamma_k = " + num(used, 12) + ", discrepancy reported");
    return o;
}

Outcome criterion3() {
    Outcome o;
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u(0.05, 0.95), t(1.2, 5.0);
    double worst_one = 0.0;
    for (int s = 0; s < 10; ++s) {
        const FracParams p{u(rng), u(rng), u(rng), t(rng)};
        const auto phi = GridFunction::constant(uniform_nodes(1.0, p.T, 9), 1.0);
        for (int i = 1; i <= 50; ++i) {
            const double x = i == 50 ? p.T : 1.0 + (p.T - 1.0) * i / 50.0;
            const double exact = hilfer_integral_of_one(p, x);
            worst_one = std::max(worst_one, std::fabs(hilfer_integral(p, phi, x) / exact - 1.0));
        }
    }
    o.require(worst_one <= 1e-10, "phi = 1 relative error " + num(worst_one));

    IntegralOptions fine;
    fine.panels = 16384;
    const double a = kExample.exponent();
    const double scale = std::pow(kExample.rho, -a) / (kExample.k * k_gamma(kExample.k, kExample.gamma_ord).value);
    double worst_beta = 0.0;
    for (int m = 1; m <= 2; ++m) {
        for (int i = 1; i <= 50; ++i) {
            const double x = 1.0 + 2.0 * i / 50.0;
            const double X = std::pow(x, kExample.rho);
            const double exact = scale * beta(m + 1.0, a) * std::pow(X - 1.0, m + a);
            const auto phi = [&](double tt) { return std::pow(std::pow(tt, kExample.rho) - 1.0, m); };
            worst_beta = std::max(worst_beta, std::fabs(product_quadrature(kExample, phi, x, fine) / exact - 1.0));
        }
    }
    o.require(worst_beta <= 1e-8, "Beta moment relative error " + num(worst_beta));
    o.note("phi = 1 max rel err " + num(worst_one, 3) + ", Beta moments max rel err " + num(worst_beta, 3));
    return o;
}

Outcome criterion4() {
    Outcome o;
    const std::vector<std::size_t> meshes{128, 256, 512, 1024, 2048};
    const auto order = measure_convergence_order(kExample, [](double t) { return std::sin(t); }, 3.0, meshes);
    o.require(!order.exact && order.order >= 1.9, "order " + num(order.order));
    o.note("order " + num(order.order, 4));
    return o;
}

Outcome criterion5() {
    Outcome o;
    const auto nodes = uniform_nodes(1.0, 3.0, 201);
    SolveOptions opts;
    opts.tol = 1e-10;
    for (std::optional<double> gk : {std::optional<double>{}, std::optional<double>{2.4047}}) {
        const std::string label = gk ? "override" : "standard";
        const auto eq = example_equations(gk).front();
        const double factor = contraction_factor(eq, 0.5, ArithmeticOverrides{gk, std::nullopt});
        const auto report = solve(eq, GridFunction::constant(nodes, 0.5), opts);
        o.require(report.converged, label + " did not converge");
        o.require(report.solution.sup_norm() <= 1e-8, label + " sup-norm " + num(report.solution.sup_norm()));
        o.require(report.measured_rate <= factor + 0.05,
                  label + " rate " + num(report.measured_rate) + " vs factor " + num(factor));
        o.note(label + ": " + std::to_string(report.iterations) + " steps, rate " + num(report.measured_rate, 4) +
               " <= " + num(factor, 4) + " + 0.05");
    }
    return o;
}

Outcome criterion6() {
    Outcome o;
    const auto nodes = uniform_nodes(1.0, 3.0, 201);
    struct Case {
        std::string label;
        std::optional<double> gamma_k;
        std::optional<double> mass;
        double r0;
    };
    const Case cases[] = {{"standard", std::nullopt, std::nullopt, 0.3}, {"override", 2.4047, 0.5358, 0.83}};
    std::mt19937_64 rng(6);
    for (const auto& c : cases) {
        for (const auto& eq : example_equations(c.gamma_k)) {
            CertifyOptions copts;
            copts.overrides = {c.gamma_k, c.mass};
            const auto cert = certify(eq, copts);
            o.require(cert.passes() && classify_radius(cert, c.r0) == Admissibility::admissible,
                      c.label + " r0 not certified");
            const double bound = cert.selfmap_bound(c.r0) + 1e-6;
            const HilferOperator op(eq, nodes);
            std::uniform_real_distribution<double> u(-c.r0, c.r0);
            double worst = 0.0;
            for (int trial = 0; trial < 200; ++trial) {
                std::vector<double> v(nodes.size());
                for (auto& y : v) y = u(rng);
                worst = std::max(worst, op.apply(GridFunction(nodes, v)).sup_norm());
            }
            o.require(worst <= bound, c.label + " " + eq.name + " image norm " + num(worst) + " > " + num(bound));
            o.note(c.label + " " + eq.name + ": max |D a| " + num(worst, 4) + " <= " + num(bound, 4));
        }
    }
    return o;
}

Outcome criterion7() {
    Outcome o;
    const auto nodes = uniform_nodes(1.0, 3.0, 201);
    const double radius = 0.1;
    const std::vector<double> deltas{0.08, 0.04, 0.02, 0.01};
    struct Case {
        std::string label;
        std::optional<double> gamma_k;
        std::optional<double> mass;
    };
    const Case cases[] = {{"standard", std::nullopt, std::nullopt}, {"override", 2.4047, 0.5358}};
    for (const auto& c : cases) {
        const auto eq = example_equations(c.gamma_k).front();
        CertifyOptions copts;
        copts.overrides = {c.gamma_k, c.mass};
        const auto cert = certify(eq, copts);
        o.require(classify_radius(cert, radius) == Admissibility::admissible, c.label + " radius not certified");
        const double factor = cert.factor(radius);
        const auto builtin = ContractionCertificate::builtin(0.5 * (1.0 - factor));
        const HilferOperator op(eq, nodes);
        const SetOperator apply = [&op](const GridFunction& f) { return op.apply(f); };
        int decay_failures = 0, inequality_failures = 0;
        double worst_ratio = 0.0;
        for (int rep = 0; rep < 100; ++rep) {
            DarboOptions opts;
            opts.p_max = 8;
            opts.convex_samples = 30;
            opts.deltas = deltas;
            opts.rng_seed = 1000 + rep;
            opts.ball_radius = radius;
            const auto trace = darbo_iterate(apply, random_ensemble(nodes, 30, radius, 42 + rep), opts);
            if (!check_mnc_decay(trace, factor, 0.05).passed) ++decay_failures;
            if (!certificate_inequality_check(builtin, trace, factor, 0.05).passed) ++inequality_failures;
            for (double r : trace.ratios) worst_ratio = std::max(worst_ratio, r);
        }
        o.require(decay_failures == 0, c.label + " decay failed in " + std::to_string(decay_failures) + " runs");
        o.require(inequality_failures == 0,
                  c.label + " certificate inequality failed in " + std::to_string(inequality_failures) + " runs");
        o.note(c.label + ": worst ratio " + num(worst_ratio, 4) + " vs factor " + num(factor, 4) + " + 0.05");
    }
    return o;
}

GridFunction random_pl(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(2, 40);
    std::uniform_real_distribution<double> u(0.0, 1.0), v(-1.0, 1.0);
    std::vector<double> nodes{1.0, 3.0};
    const int n = count(rng);
    for (int i = 0; i < n - 2; ++i) nodes.push_back(1.0 + 2.0 * u(rng));
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    std::vector<double> values(nodes.size());
    for (auto& y : values) y = v(rng);
    return GridFunction(nodes, values);
}

Outcome criterion8() {
    Outcome o;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> d(0.001, 1.0);
    int mono = 0, sub = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto f = random_pl(rng);
        const double d1 = d(rng), d2 = d(rng);
        if (modulus_of_continuity(f, std::min(d1, d2)) > modulus_of_continuity(f, std::max(d1, d2))) ++mono;
        // Equality holds on linear stretches; moduli are differences of values of
        // size ‖f‖, so allow a few ulps at that scale.
        const double ulps = 4.0 * std::numeric_limits<double>::epsilon() * f.sup_norm();
        const double sum = modulus_of_continuity(f, d1) + modulus_of_continuity(f, d2);
        if (modulus_of_continuity(f, d1 + d2) > sum + ulps) ++sub;
    }
    o.require(mono == 0, std::to_string(mono) + " monotonicity violations");
    o.require(sub == 0, std::to_string(sub) + " subadditivity violations");

    const auto nodes = uniform_nodes(1.0, 3.0, 101);
    const std::vector<double> deltas{0.08, 0.04, 0.02, 0.01};
    std::uniform_real_distribution<double> lam(0.0, 1.0);
    int axiom_failures = 0, hausdorff_failures = 0;
    double worst_slack = -1.0;
    for (int i = 0; i < 100; ++i) {
        const auto e1 = random_ensemble(nodes, 10, 1.0, 2 * i + 1);
        const auto e2 = random_ensemble(nodes, 10, 1.0, 2 * i + 2);
        const auto report = mnc_axiom_checks(e1, e2, lam(rng), deltas, 1e-12);
        if (!report.monotonicity.passed || !report.convexity.passed) ++axiom_failures;
        worst_slack = std::max({worst_slack, report.monotonicity.slack, report.convexity.slack});
        const auto est = mnc_estimate(e1, deltas);
        if (est.hausdorff != est.mu0 / 2.0) ++hausdorff_failures;
    }
    o.require(axiom_failures == 0, std::to_string(axiom_failures) + " axiom check failures");
    o.require(hausdorff_failures == 0, "hausdorff != mu0/2");
    o.note("1000 functions exact, axiom worst slack " + num(worst_slack, 3));
    return o;
}

Expr random_expr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
    const auto sub = [&] { return random_expr(rng, depth - 1); };
    switch (pick(rng)) {
        case 0: return Expr::literal(std::uniform_int_distribution<int>(0, 40)(rng) / 8.0);
        case 1: return Expr::var_x();
        case 2: return Expr::var_a();
        case 3: return Expr::negate(sub());
        case 4: return Expr::binary(Expr::Kind::add, sub(), sub());
        case 5: return Expr::binary(Expr::Kind::sub, sub(), sub());
        case 6: return Expr::binary(Expr::Kind::mul, sub(), sub());
        case 7: return Expr::binary(Expr::Kind::div, sub(), sub());
        case 8: return Expr::binary(Expr::Kind::pow, sub(), sub());
        default: {
            const auto fn = static_cast<Expr::Func>(std::uniform_int_distribution<int>(0, 7)(rng));
            std::vector<Expr> args{sub()};
            if (fn == Expr::Func::min || fn == Expr::Func::max) args.push_back(sub());
            return Expr::call(fn, std::move(args));
        }
    }
}

Outcome criterion9() {
    Outcome o;
    std::mt19937_64 rng(9);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const Expr e = random_expr(rng, 6);
        const Expr back = Expr::parse(e.to_string());
        if (!(back == e) || !(Expr::parse(back.to_string()) == back)) ++mismatches;
    }
    o.require(mismatches == 0, std::to_string(mismatches) + " round-trip mismatches");

    const auto f = Expr::parse("abs(a)/6");
    const auto psi = Expr::parse("abs(a)");
    const auto g = Expr::parse("a/(3 + log(x))");
    std::uniform_real_distribution<double> xd(1.0, 3.0), ad(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double x = xd(rng), a = ad(rng);
        worst = std::max({worst, std::fabs(f.eval(x, a) - std::fabs(a) / 6.0), std::fabs(psi.eval(x, a) - std::fabs(a)),
                          std::fabs(g.eval(x, a) - a / (3.0 + std::log(x)))});
    }
    o.require(worst <= 1e-15, "probe deviation " + num(worst));
    o.note("1000 round trips, probe deviation " + num(worst, 3));
    return o;
}

Outcome criterion10() {
    Outcome o;
    const double declared[] = {1.0 / 6.0, 1.0, 1.0 / 3.0};
    for (const auto& eq : example_equations(std::nullopt)) {
        const Nonlinearity* parts[] = {&eq.f, &eq.psi, &eq.g};
        for (int i = 0; i < 3; ++i) {
            const double est = estimate_lipschitz(*parts[i], 1.0, 3.0, 1.0, 100000);
            const std::string label = eq.name + " " + parts[i]->expr.to_string();
            o.require(est <= declared[i], label + " estimate " + num(est, 12) + " exceeds " + num(declared[i]));
            o.require(est >= declared[i] - 1e-3, label + " estimate " + num(est, 12) + " too far below");
        }
    }
    o.note("six estimates within [L - 1e-3, L]");
    return o;
}

}  // namespace

int main() {
    using Clock = std::chrono::steady_clock;
    Outcome (*const criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                     criterion6, criterion7, criterion8, criterion9, criterion10};
    const char* names[] = {"worked arithmetic reproduction",
                           "k-gamma consistency",
                           "quadrature oracles",
                           "convergence order",
                           "Picard convergence",
                           "ball invariance",
                           "MNC contraction",
                           "MNC estimator suite",
                           "expression parser",
                           "Lipschitz validation"};
    int failures = 0;
    for (int i = 0; i < 10; ++i) {
        const auto start = Clock::now();
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        std::cout << "criterion " << i + 1 << " [" << names[i] << "]: " << (o.passed ? "PASS" : "FAIL") << " ("
                  << num(secs, 3) << " s) " << o.detail << std::endl;
        if (!o.passed) ++failures;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
    return failures == 0 ? 0 : 1;
}
