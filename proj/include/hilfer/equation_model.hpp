#pragma once

#include <string>

#include "hilfer/expr.hpp"
#include "hilfer/frac_integral.hpp"
#include "hilfer/grid_function.hpp"

namespace hilfer {

/// One of F, Ψ, G: an expression in (x, a) with its declared Lipschitz constant in a.
struct Nonlinearity {
    Expr expr;
    double lipschitz = 0.0;
    bool zero_at_zero = false;

    double operator()(double x, double a) const { return expr.eval(x, a); }
};

Nonlinearity make_nonlinearity(std::string_view src, double lipschitz, bool zero_at_zero);

/// α(x) = F(x, α(x)) + Ψ(x, α(x)) · J[G(·, α(·))](x) on [1, T].
struct EquationSpec {
    std::string name = "alpha";
    FracParams params;
    Nonlinearity f;
    Nonlinearity psi;
    Nonlinearity g;
    IntegralOptions quadrature;
};

/// Two uncoupled equations sharing one parameter set.
struct SystemSpec {
    EquationSpec eq_alpha;
    EquationSpec eq_beta;

    /// Throws ValidationError if the two parameter sets differ.
    void validate() const;
};

/// The operator 𝒟 with its quadrature weights precomputed for a fixed node set.
/// Reuse one instance across Picard steps or ensemble members.
class HilferOperator {
public:
    HilferOperator(EquationSpec eq, std::vector<double> nodes);

    /// 𝒟α sampled on the node set. alpha must live on the same nodes.
    /// Expression errors are rethrown as DomainError naming the node x.
    GridFunction apply(const GridFunction& alpha) const;

    const EquationSpec& equation() const noexcept { return eq_; }
    std::span<const double> nodes() const noexcept { return weights_.nodes(); }

private:
    EquationSpec eq_;
    HilferWeights weights_;
};

/// One-shot 𝒟α on alpha's own node set.
GridFunction apply_operator(const EquationSpec& eq, const GridFunction& alpha);

/// Lower bound on the Lipschitz constant in a over [lo, hi] × [-r0, r0]:
/// the largest difference quotient over a probe grid of about `probes` points.
/// The x grid always includes both endpoints. Each quotient is reduced by a bound
/// on its floating-point rounding error, so the value remains a lower bound.
double estimate_lipschitz(const Nonlinearity& n, double lo, double hi, double r0, long probes);

/// True iff |F(x,0)|, |Ψ(x,0)|, |G(x,0)| <= 1e-12 at `probes` equally spaced x in [1, T].
bool check_zero_conditions(const EquationSpec& eq, long probes);

/// Throws ValidationError when an empirical estimate exceeds a declared constant
/// by more than 1e-9, or a zero_at_zero flag is contradicted.
void validate_declarations(const EquationSpec& eq, double r0, long probes);

}  // namespace hilfer
