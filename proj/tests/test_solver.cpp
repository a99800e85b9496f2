#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hilfer/equation_model.hpp"
#include "hilfer/solvability.hpp"
#include "hilfer/solver.hpp"

using namespace hilfer;

namespace {

const FracParams kParams{1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 3.0};

EquationSpec example(const char* g_src) {
    EquationSpec eq;
    eq.params = kParams;
    eq.f = make_nonlinearity("abs(a)/6", 1.0 / 6.0, true);
    eq.psi = make_nonlinearity("abs(a)", 1.0, true);
    eq.g = make_nonlinearity(g_src, 1.0 / 3.0, true);
    return eq;
}

}  // namespace

TEST_CASE("zero seed is a fixed point") {
    const auto nodes = uniform_nodes(1.0, 3.0, 51);
    SolveOptions opts;
    opts.r0 = 0.3;
    const auto report = solve(example("a/(3 + log(x))"), GridFunction::constant(nodes, 0.0), opts);
    CHECK(report.converged);
    CHECK(report.iterations == 1);
    CHECK(report.solution.sup_norm() == 0.0);
    CHECK(report.warnings.empty());
}

TEST_CASE("worked example converges to zero") {
    const auto nodes = uniform_nodes(1.0, 3.0, 201);
    const auto eq = example("a/(3 + log(x))");
    SolveOptions opts;
    opts.tol = 1e-10;
    const auto report = solve(eq, GridFunction::constant(nodes, 0.5), opts);
    CHECK(report.converged);
    CHECK(report.residual <= 1e-10);
    CHECK(report.solution.sup_norm() <= 1e-8);
    CHECK(report.measured_rate <= contraction_factor(eq, 0.5) + 0.05);
    CHECK(report.trace.size() == static_cast<std::size_t>(report.iterations));
    CHECK(report.sup_distances.size() == static_cast<std::size_t>(report.iterations));
    CHECK_FALSE(report.warnings.empty());

    auto overridden = eq;
    overridden.quadrature.gamma_k_override = 2.4047;
    const auto over = solve(overridden, GridFunction::constant(nodes, 0.5), opts);
    CHECK(over.converged);
    CHECK(over.solution.sup_norm() <= 1e-8);
    CHECK(over.measured_rate <= contraction_factor(overridden, 0.5, {2.4047, std::nullopt}) + 0.05);
}

TEST_CASE("geometric decay after the transient") {
    const auto nodes = uniform_nodes(1.0, 3.0, 101);
    const auto eq = example("a/(2 + x)");
    const double factor = contraction_factor(eq, 0.3);
    const auto report = solve(eq, GridFunction::constant(nodes, 0.3));
    REQUIRE(report.converged);
    for (std::size_t p = 1; p + 1 < report.sup_distances.size(); ++p) {
        CHECK(report.sup_distances[p + 1] <= (factor + 0.05) * report.sup_distances[p]);
    }
}

TEST_CASE("inhomogeneous linear equation") {
    EquationSpec eq;
    eq.params = kParams;
    eq.f = make_nonlinearity("a/2 + x", 0.5, false);
    eq.psi = make_nonlinearity("0", 0.0, true);
    eq.g = make_nonlinearity("a", 1.0, true);
    const auto nodes = uniform_nodes(1.0, 3.0, 41);
    SolveOptions opts;
    opts.tol = 1e-12;
    const auto report = solve(eq, GridFunction::constant(nodes, 0.0), opts);
    CHECK(report.converged);
    const auto exact = GridFunction::sample(nodes, [](double x) { return 2.0 * x; });
    CHECK(sup_distance(report.solution, exact) <= 1e-11);
    CHECK(report.measured_rate == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("iterates stay in the certified ball") {
    const auto eq = example("a/(3 + log(x))");
    const auto cert = certify(eq);
    const double r0 = 0.3;
    REQUIRE(classify_radius(cert, r0) == Admissibility::admissible);
    REQUIRE(cert.selfmap_bound(r0) <= r0);
    const auto nodes = uniform_nodes(1.0, 3.0, 101);
    const HilferOperator op(eq, nodes);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-r0, r0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> v(nodes.size());
        for (auto& y : v) y = u(rng);
        SolveOptions opts;
        opts.r0 = r0;
        const auto report = solve(op, GridFunction(nodes, v), opts);
        for (const auto& rec : report.trace) CHECK(rec.sup_norm <= r0 + 1e-9);
        CHECK(report.warnings.empty());
    }
}

TEST_CASE("seed outside the ball warns") {
    const auto nodes = uniform_nodes(1.0, 3.0, 21);
    SolveOptions opts;
    opts.r0 = 0.1;
    const auto report = solve(example("a/(3 + log(x))"), GridFunction::constant(nodes, 0.2), opts);
    CHECK_FALSE(report.warnings.empty());
}

TEST_CASE("nonconvergence is reported") {
    EquationSpec eq;
    eq.params = kParams;
    eq.f = make_nonlinearity("a + 1", 1.0, false);
    eq.psi = make_nonlinearity("0", 0.0, true);
    eq.g = make_nonlinearity("a", 1.0, true);
    SolveOptions opts;
    opts.max_iter = 20;
    const auto report = solve(eq, GridFunction::constant(uniform_nodes(1.0, 3.0, 11), 0.0), opts);
    CHECK_FALSE(report.converged);
    CHECK(report.iterations == 20);
    CHECK(report.residual > opts.tol);
}

TEST_CASE("grid refinement stability") {
    EquationSpec eq;
    eq.params = kParams;
    eq.f = make_nonlinearity("a/4 + sin(x)", 0.25, false);
    eq.psi = make_nonlinearity("1/10", 0.0, false);
    eq.g = make_nonlinearity("a", 1.0, true);
    const auto coarse = solve(eq, GridFunction::constant(uniform_nodes(1.0, 3.0, 101), 0.0));
    const auto fine = solve(eq, GridFunction::constant(uniform_nodes(1.0, 3.0, 201), 0.0));
    REQUIRE(coarse.converged);
    REQUIRE(fine.converged);
    double diff = 0.0;
    for (double x : coarse.solution.nodes()) diff = std::max(diff, std::fabs(coarse.solution(x) - fine.solution(x)));
    CHECK(diff < 1e-4);
}

TEST_CASE("system solve") {
    const auto nodes = uniform_nodes(1.0, 3.0, 101);
    const SystemSpec sys{example("a/(3 + log(x))"), example("a/(2 + x)")};
    const auto [a, b] = solve_system(sys, GridFunction::constant(nodes, 0.5), GridFunction::constant(nodes, 0.5));
    CHECK(a.converged);
    CHECK(b.converged);
    CHECK(a.solution.sup_norm() <= 1e-8);
    CHECK(b.solution.sup_norm() <= 1e-8);

    auto slow = example("a/(2 + x)");
    slow.f = make_nonlinearity("a + 1/100", 1.0, false);
    SolveOptions opts;
    opts.max_iter = 30;
    const auto [c, d] = solve_system(SystemSpec{example("a/(2 + x)"), slow}, GridFunction::constant(nodes, 0.2),
                                     GridFunction::constant(nodes, 0.2), opts);
    CHECK(c.converged);
    CHECK_FALSE(d.converged);
}
