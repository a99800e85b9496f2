#include "hilfer/mnc_darbo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "hilfer/errors.hpp"
#include "hilfer/parallel.hpp"

namespace hilfer {
namespace {

void require_ladder(std::span<const double> deltas) {
    if (deltas.size() < 3) throw DomainError("mnc_estimate: need at least three deltas");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0)) throw DomainError("mnc_estimate: deltas must be positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1])) {
            throw DomainError("mnc_estimate: deltas must be strictly decreasing");
        }
    }
}

std::vector<double> ladder_moduli(const FunctionEnsemble& e, std::span<const double> deltas) {
    std::vector<double> out(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) out[i] = ensemble_modulus(e, deltas[i]);
    return out;
}

double extrapolate_mu0(std::span<const double> deltas, std::span<const double> moduli) {
    const std::size_t n = deltas.size();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = n - 3; i < n; ++i) {
        mx += deltas[i];
        my += moduli[i];
    }
    mx /= 3.0;
    my /= 3.0;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = n - 3; i < n; ++i) {
        sxy += (deltas[i] - mx) * (moduli[i] - my);
        sxx += (deltas[i] - mx) * (deltas[i] - mx);
    }
    const double intercept = my - (sxy / sxx) * mx;
    return std::clamp(intercept, 0.0, moduli[n - 1]);
}

}  // namespace

FunctionEnsemble::FunctionEnsemble(std::vector<GridFunction> members) : members_(std::move(members)) {
    if (members_.empty()) throw DomainError("FunctionEnsemble: at least one member is required");
    for (std::size_t i = 1; i < members_.size(); ++i) {
        if (!members_[i].same_nodes(members_[0])) {
            throw DomainError("FunctionEnsemble: member " + std::to_string(i) +
                              " is not on the common node set");
        }
    }
}

double FunctionEnsemble::sup_norm() const noexcept {
    double m = 0.0;
    for (const auto& f : members_) m = std::max(m, f.sup_norm());
    return m;
}

FunctionEnsemble random_ensemble(std::vector<double> nodes, std::size_t count, double radius,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-radius, radius);
    std::vector<GridFunction> members;
    members.reserve(count);
    for (std::size_t m = 0; m < count; ++m) {
        std::vector<double> values(nodes.size());
        for (double& v : values) v = dist(rng);
        members.emplace_back(nodes, std::move(values));
    }
    return FunctionEnsemble(std::move(members));
}

double modulus_of_continuity(const GridFunction& f, double delta) {
    if (!(delta > 0.0)) throw DomainError("modulus_of_continuity: delta must be positive");
    const auto z = f.nodes();
    const auto v = f.values();
    const std::size_t n = z.size();
    const double lo = z.front();
    const double hi = z.back();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n && z[j] - z[i] <= delta; ++j) {
            best = std::max(best, std::fabs(v[j] - v[i]));
        }
        if (z[i] + delta < hi) best = std::max(best, std::fabs(f(z[i] + delta) - v[i]));
        if (z[i] - delta > lo) best = std::max(best, std::fabs(v[i] - f(z[i] - delta)));
    }
    return best;
}

double ensemble_modulus(const FunctionEnsemble& e, double delta) {
    double best = 0.0;
    for (const auto& f : e.members()) best = std::max(best, modulus_of_continuity(f, delta));
    return best;
}

MncEstimate mnc_estimate(const FunctionEnsemble& e, std::span<const double> deltas) {
    require_ladder(deltas);
    MncEstimate out;
    out.deltas.assign(deltas.begin(), deltas.end());
    out.moduli = ladder_moduli(e, deltas);
    out.mu0 = extrapolate_mu0(out.deltas, out.moduli);
    out.hausdorff = 0.5 * out.mu0;
    return out;
}

AxiomReport mnc_axiom_checks(const FunctionEnsemble& e1, const FunctionEnsemble& e2, double L,
                             std::span<const double> deltas, double tolerance) {
    require_ladder(deltas);
    if (!(L >= 0.0 && L <= 1.0)) throw DomainError("mnc_axiom_checks: L must lie in [0, 1]");
    if (!e1.members()[0].same_nodes(e2.members()[0])) {
        throw DomainError("mnc_axiom_checks: ensembles use different node sets");
    }

    std::vector<GridFunction> joined(e1.members().begin(), e1.members().end());
    joined.insert(joined.end(), e2.members().begin(), e2.members().end());
    const FunctionEnsemble united(std::move(joined));

    std::vector<GridFunction> combos;
    combos.reserve(e1.size() * e2.size());
    for (const auto& f : e1.members()) {
        for (const auto& g : e2.members()) combos.push_back(linear_combination(L, f, 1.0 - L, g));
    }
    const FunctionEnsemble combined(std::move(combos));

    const auto m1 = ladder_moduli(e1, deltas);
    const auto m2 = ladder_moduli(e2, deltas);
    const auto mu = ladder_moduli(united, deltas);
    const auto mc = ladder_moduli(combined, deltas);

    AxiomReport report;
    report.monotonicity.slack = -std::numeric_limits<double>::infinity();
    report.convexity.slack = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        report.monotonicity.slack = std::max(report.monotonicity.slack, m1[i] - mu[i]);
        report.convexity.slack =
            std::max(report.convexity.slack, mc[i] - (L * m1[i] + (1.0 - L) * m2[i]));
    }
    report.monotonicity.passed = report.monotonicity.slack <= tolerance;
    report.convexity.passed = report.convexity.slack <= tolerance;
    report.mu0_e1 = extrapolate_mu0(deltas, m1);
    report.mu0_e2 = extrapolate_mu0(deltas, m2);
    report.mu0_combination = extrapolate_mu0(deltas, mc);
    return report;
}

ContractionCertificate ContractionCertificate::builtin(double G, std::function<double(double)> phi) {
    if (!(G > 0.0 && G < 1.0)) throw DomainError("ContractionCertificate: G must lie in (0, 1)");
    ContractionCertificate cert;
    cert.h = [](double z1, double z2) { return z1 + z2; };
    cert.upsilon = [](double x) { return 0.5 * x; };
    cert.gamma_cmp = [G](double x) { return G * x; };
    cert.phi = phi ? std::move(phi) : std::function<double(double)>([](double x) { return x; });
    return cert;
}

CertificateValidation validate_certificate(const ContractionCertificate& cert, std::uint64_t seed) {
    CertificateValidation out;
    constexpr double eps = 1e-12;

    out.h_dominates_max = true;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double z1 = 0.5 * i;
            const double z2 = 0.5 * j;
            if (cert.h(z1, z2) < std::max(z1, z2) - eps) out.h_dominates_max = false;
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 5.0);
    out.h_subadditive = true;
    for (int i = 0; i < 100; ++i) {
        const double z1 = unit(rng), z2 = unit(rng), x1 = unit(rng), x2 = unit(rng);
        if (cert.h(z1 + z2, x1 + x2) > cert.h(z1, x1) + cert.h(z2, x2) + eps) out.h_subadditive = false;
    }

    std::vector<double> samples(200);
    for (double& s : samples) s = unit(rng);
    samples.push_back(0.0);
    std::sort(samples.begin(), samples.end());

    out.upsilon_valid = cert.upsilon(0.0) == 0.0;
    out.gamma_valid = cert.gamma_cmp(0.0) == 0.0;
    out.phi_nondecreasing = true;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double s = samples[i];
        if (s > 0.0 && !(cert.upsilon(s) > 0.0)) out.upsilon_valid = false;
        if (cert.upsilon(s) < cert.upsilon(samples[i - 1]) - eps) out.upsilon_valid = false;
        if (s > 0.0 && !(cert.gamma_cmp(s) > 0.0)) out.gamma_valid = false;
        if (cert.phi(s) < cert.phi(samples[i - 1]) - eps) out.phi_nondecreasing = false;
    }
    return out;
}

DarboTrace darbo_iterate(const SetOperator& op, const FunctionEnsemble& seed, const DarboOptions& options) {
    if (options.p_max < 1) throw DomainError("darbo_iterate: p_max must be at least 1");
    require_ladder(options.deltas);
    if (options.ball_radius) {
        const double norm = seed.sup_norm();
        if (norm > *options.ball_radius + 1e-12) {
            throw DomainError("darbo_iterate: seed ensemble leaves the ball of radius " +
                              std::to_string(*options.ball_radius));
        }
    }

    std::mt19937_64 rng(options.rng_seed);
    DarboTrace trace;
    FunctionEnsemble current = seed;
    trace.estimates.push_back(mnc_estimate(current, options.deltas));
    trace.sizes.push_back(current.size());

    for (int p = 0; p < options.p_max; ++p) {
        const auto members = current.members();
        std::vector<std::optional<GridFunction>> slots(members.size());
        parallel_for(members.size(), [&](std::size_t i) { slots[i].emplace(op(members[i])); });

        std::vector<GridFunction> next;
        next.reserve(members.size() + options.convex_samples);
        for (auto& s : slots) next.push_back(std::move(*s));

        const std::size_t images = next.size();
        std::uniform_int_distribution<std::size_t> pick(0, images - 1);
        std::uniform_int_distribution<int> arity(2, 4);
        std::exponential_distribution<double> mass(1.0);
        for (std::size_t s = 0; s < options.convex_samples; ++s) {
            const int terms = arity(rng);
            std::vector<std::size_t> idx(static_cast<std::size_t>(terms));
            std::vector<double> w(static_cast<std::size_t>(terms));
            double total = 0.0;
            for (int t = 0; t < terms; ++t) {
                idx[t] = pick(rng);
                w[t] = mass(rng);
                total += w[t];
            }
            std::vector<double> values(next[0].size(), 0.0);
            for (int t = 0; t < terms; ++t) {
                const auto src = next[idx[t]].values();
                for (std::size_t i = 0; i < values.size(); ++i) values[i] += (w[t] / total) * src[i];
            }
            next.push_back(next[0].with_values(std::move(values)));
        }

        current = FunctionEnsemble(std::move(next));
        trace.estimates.push_back(mnc_estimate(current, options.deltas));
        trace.sizes.push_back(current.size());

        const double before = trace.estimates[trace.estimates.size() - 2].mu0;
        const double after = trace.estimates.back().mu0;
        if (before > 0.0) {
            trace.ratios.push_back(after / before);
        } else {
            trace.ratios.push_back(after > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        }
    }
    return trace;
}

DecayReport check_mnc_decay(const DarboTrace& trace, double factor, double slack) {
    DecayReport report;
    report.passed = true;
    for (std::size_t p = 0; p + 1 < trace.estimates.size(); ++p) {
        StepCheck step;
        step.p = static_cast<int>(p);
        step.lhs = trace.estimates[p + 1].mu0;
        step.rhs = (factor + slack) * trace.estimates[p].mu0;
        step.passed = step.lhs <= step.rhs;
        report.passed = report.passed && step.passed;
        report.steps.push_back(step);
    }
    return report;
}

CertificateInequalityReport certificate_inequality_check(const ContractionCertificate& cert,
                                                         const DarboTrace& trace, double factor,
                                                         double slack) {
    if (!(factor > 0.0 && factor < 1.0)) {
        throw DomainError("certificate_inequality_check: factor must lie in (0, 1)");
    }
    CertificateInequalityReport report;
    report.G = 0.5 * (1.0 - factor);
    report.m = 1.0 - 2.0 * report.G;
    report.passed = true;

    auto H = [&](double q) { return cert.h(q, cert.phi(q)); };
    for (std::size_t p = 0; p + 1 < trace.estimates.size(); ++p) {
        const double q0 = trace.estimates[p].hausdorff;
        const double q1 = trace.estimates[p + 1].hausdorff;
        const double h0 = H(q0);
        const double h1 = H(q1);
        const int step = static_cast<int>(p);

        StepCheck general{step, cert.upsilon(h1), cert.upsilon(h0) - cert.gamma_cmp(h0) + slack * cert.upsilon(h0), false};
        general.passed = general.lhs <= general.rhs;
        StepCheck linear{step, h1, (report.m + slack) * h0, false};
        linear.passed = linear.lhs <= linear.rhs;
        StepCheck measure_form{step, q1, (report.m + slack) * q0, false};
        measure_form.passed = measure_form.lhs <= measure_form.rhs;

        report.passed = report.passed && general.passed && linear.passed && measure_form.passed;
        report.general.push_back(general);
        report.linear.push_back(linear);
        report.measure_form.push_back(measure_form);
    }
    return report;
}

}  // namespace hilfer
