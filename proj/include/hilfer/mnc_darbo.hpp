#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hilfer/grid_function.hpp"

namespace hilfer {

/// A finite family of grid functions on one node set, standing in for a bounded set.
class FunctionEnsemble {
public:
    explicit FunctionEnsemble(std::vector<GridFunction> members);

    std::span<const GridFunction> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    double sup_norm() const noexcept;

private:
    std::vector<GridFunction> members_;
};

/// `count` members with nodal values drawn uniformly from [-radius, radius].
FunctionEnsemble random_ensemble(std::vector<double> nodes, std::size_t count, double radius,
                                 std::uint64_t seed);

struct MncEstimate {
    std::vector<double> deltas;
    std::vector<double> moduli;
    double mu0 = 0.0;
    double hausdorff = 0.0;
};

/// sup{|f(z1) - f(z2)| : |z1 - z2| <= δ}, exact for piecewise-linear f: one of
/// the optimal points is always a node and the other a node or node ± δ.
double modulus_of_continuity(const GridFunction& f, double delta);

double ensemble_modulus(const FunctionEnsemble& e, double delta);

/// Moduli on a decreasing δ ladder (at least three rungs). μ₀ is the intercept
/// of the least-squares line through the three smallest δ, clamped to
/// [0, modulus at the smallest δ]; hausdorff = μ₀ / 2.
MncEstimate mnc_estimate(const FunctionEnsemble& e, std::span<const double> deltas);

struct AxiomCheck {
    bool passed = false;
    /// max over δ of lhs - rhs; <= tolerance on pass.
    double slack = 0.0;
};

struct AxiomReport {
    AxiomCheck monotonicity;  ///< e1 ⊆ e1 ∪ e2 ⇒ μ(e1, δ) <= μ(e1 ∪ e2, δ)
    AxiomCheck convexity;     ///< μ(L e1 + (1-L) e2, δ) <= L μ(e1, δ) + (1-L) μ(e2, δ)
    double mu0_e1 = 0.0;
    double mu0_e2 = 0.0;
    double mu0_combination = 0.0;
};

/// Checks the monotonicity and convexity properties on every rung of the δ ladder.
/// The combination ensemble is formed memberwise over all pairs.
AxiomReport mnc_axiom_checks(const FunctionEnsemble& e1, const FunctionEnsemble& e2, double L,
                             std::span<const double> deltas, double tolerance = 1e-12);

/// Comparison functions for the generalized Darbo condition
///   υ(h(Q(FT), φ(Q(FT)))) <= υ(h(Q(T), φ(Q(T)))) - γ(h(Q(T), φ(Q(T)))).
struct ContractionCertificate {
    std::function<double(double, double)> h;
    std::function<double(double)> upsilon;
    std::function<double(double)> gamma_cmp;
    std::function<double(double)> phi;

    /// h = sum, υ(x) = x/2, γ(x) = G x with G in (0, 1); φ defaults to identity.
    static ContractionCertificate builtin(double G, std::function<double(double)> phi = {});
};

struct CertificateValidation {
    bool h_dominates_max = false;
    bool h_subadditive = false;
    bool upsilon_valid = false;  ///< υ(0) = 0, υ > 0 elsewhere, nondecreasing on samples
    bool gamma_valid = false;    ///< γ(0) = 0, γ > 0 elsewhere
    bool phi_nondecreasing = false;
    bool all() const noexcept {
        return h_dominates_max && h_subadditive && upsilon_valid && gamma_valid && phi_nondecreasing;
    }
};

/// Sampled checks of the class properties: 100-point grid for h >= max, random
/// quadruples for subadditivity, sorted samples for monotonicity.
CertificateValidation validate_certificate(const ContractionCertificate& cert, std::uint64_t seed = 7);

struct DarboOptions {
    int p_max = 8;
    std::size_t convex_samples = 30;
    std::vector<double> deltas;
    std::uint64_t rng_seed = 42;
    /// When set, every seed member must satisfy ‖f‖ <= ball_radius.
    std::optional<double> ball_radius;
};

struct DarboTrace {
    std::vector<MncEstimate> estimates;  ///< A_0 .. A_{p_max}
    std::vector<std::size_t> sizes;
    /// mu0(A_{p+1}) / mu0(A_p); 0 when both vanish, +inf when only the denominator does.
    std::vector<double> ratios;
};

using SetOperator = std::function<GridFunction(const GridFunction&)>;

/// A_0 = seed; A_{p+1} = {op f : f ∈ A_p} plus convex_samples random convex
/// combinations of those images. The sampled hull lower-bounds the true hull's μ₀.
/// Identical seeds give identical traces whatever the thread count.
DarboTrace darbo_iterate(const SetOperator& op, const FunctionEnsemble& seed, const DarboOptions& options);

struct StepCheck {
    int p = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool passed = false;
};

struct DecayReport {
    std::vector<StepCheck> steps;
    bool passed = false;
};

/// μ₀(A_{p+1}) <= (factor + slack) μ₀(A_p) for every step.
DecayReport check_mnc_decay(const DarboTrace& trace, double factor, double slack = 0.05);

struct CertificateInequalityReport {
    double G = 0.0;
    double m = 0.0;
    std::vector<StepCheck> general;    ///< υ(H_{p+1}) <= υ(H_p) - γ(H_p) + s υ(H_p)
    std::vector<StepCheck> linear;     ///< H_{p+1} <= (1 - 2G) H_p + s H_p
    std::vector<StepCheck> measure_form;  ///< Q_{p+1} <= m Q_p + s Q_p
    bool passed = false;
};

/// Evaluates the certificate inequalities along a trace with Q = hausdorff,
/// H = h(Q, φ(Q)), G = (1 - factor)/2 and m = 1 - 2G. `factor` must lie in (0, 1).
CertificateInequalityReport certificate_inequality_check(const ContractionCertificate& cert,
                                                         const DarboTrace& trace, double factor,
                                                         double slack = 0.05);

}  // namespace hilfer
