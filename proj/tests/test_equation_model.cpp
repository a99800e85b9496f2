#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hilfer/equation_model.hpp"
#include "hilfer/errors.hpp"

using namespace hilfer;

namespace {

EquationSpec example_alpha() {
    EquationSpec eq;
    eq.name = "alpha";
    eq.params = FracParams{1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 3.0};
    eq.f = make_nonlinearity("abs(a)/6", 1.0 / 6.0, true);
    eq.psi = make_nonlinearity("abs(a)", 1.0, true);
    eq.g = make_nonlinearity("a/(3 + log(x))", 1.0 / 3.0, true);
    return eq;
}

}  // namespace

TEST_CASE("operator at a constant matches the reference table") {
    const auto nodes = uniform_nodes(1.0, 3.0, 401);
    const HilferOperator op(example_alpha(), nodes);
    const auto image = op.apply(GridFunction::constant(nodes, 0.5));
    const std::pair<double, double> table[] = {{1.0, 0.0833333333333333},
                                               {1.5, 0.150930422368569},
                                               {2.0, 0.294703931924383},
                                               {2.5, 0.473085398937611},
                                               {3.0, 0.669220813966103}};
    for (const auto& [x, value] : table) CHECK(std::fabs(image(x) - value) < 1e-6);
}

TEST_CASE("zero function is fixed") {
    const auto nodes = uniform_nodes(1.0, 3.0, 21);
    const auto image = apply_operator(example_alpha(), GridFunction::constant(nodes, 0.0));
    CHECK(image.sup_norm() == 0.0);
}

TEST_CASE("operator requires nodes ending at T") {
    CHECK_THROWS_AS(HilferOperator(example_alpha(), uniform_nodes(1.0, 2.5, 11)), DomainError);
}

TEST_CASE("expression failures name the node") {
    auto eq = example_alpha();
    eq.g = make_nonlinearity("log(a)", 1.0, false);
    const auto nodes = uniform_nodes(1.0, 3.0, 11);
    try {
        apply_operator(eq, GridFunction::constant(nodes, -1.0));
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("alpha") != std::string::npos);
    }
}

TEST_CASE("Lipschitz estimates") {
    const auto eq = example_alpha();
    const double lf = estimate_lipschitz(eq.f, 1.0, 3.0, 1.0, 100000);
    const double lp = estimate_lipschitz(eq.psi, 1.0, 3.0, 1.0, 100000);
    const double lg = estimate_lipschitz(eq.g, 1.0, 3.0, 1.0, 100000);
    CHECK(lf <= 1.0 / 6.0 + 1e-12);
    CHECK(lp <= 1.0 + 1e-12);
    CHECK(lg <= 1.0 / 3.0 + 1e-12);
    CHECK(lf >= 1.0 / 6.0 - 1e-3);
    CHECK(lp >= 1.0 - 1e-3);
    CHECK(lg >= 1.0 / 3.0 - 1e-3);

    const auto sq = make_nonlinearity("a^2", 0.0, true);
    CHECK(estimate_lipschitz(sq, 1.0, 3.0, 2.0, 10000) == doctest::Approx(4.0).epsilon(1e-2));
}

TEST_CASE("declaration validation") {
    auto eq = example_alpha();
    CHECK(check_zero_conditions(eq, 100));
    CHECK_NOTHROW(validate_declarations(eq, 1.0, 4000));

    eq.g.lipschitz = 0.2;
    CHECK_THROWS_AS(validate_declarations(eq, 1.0, 4000), ValidationError);

    eq = example_alpha();
    eq.f = make_nonlinearity("a/2 + x", 0.5, true);
    CHECK_FALSE(check_zero_conditions(eq, 100));
    CHECK_THROWS_AS(validate_declarations(eq, 1.0, 4000), ValidationError);
    eq.f.zero_at_zero = false;
    CHECK_NOTHROW(validate_declarations(eq, 1.0, 4000));
}

TEST_CASE("system parameters must agree") {
    SystemSpec sys{example_alpha(), example_alpha()};
    CHECK_NOTHROW(sys.validate());
    sys.eq_beta.params.T = 4.0;
    CHECK_THROWS_AS(sys.validate(), ValidationError);
}
