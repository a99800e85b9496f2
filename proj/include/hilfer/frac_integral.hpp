#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hilfer/grid_function.hpp"

namespace hilfer {

/// Parameters of the (k,ρ)-fractional Hilfer left integral on [1, T].
struct FracParams {
    double k = 0.5;
    double rho = 0.5;
    double gamma_ord = 0.5;
    double T = 2.0;

    /// Throws DomainError unless 0 < k, ρ, γ < 1 and T > 1.
    void validate() const;

    /// The kernel exponent a = γ/k; the weight is (x^ρ - t^ρ)^(a-1).
    double exponent() const noexcept { return gamma_ord / k; }
};

enum class MeshKind { uniform, graded };

struct IntegralOptions {
    std::size_t panels = 1024;
    MeshKind mesh = MeshKind::uniform;
    /// Exponent q of the graded mesh s_j = 1 + (X-1)(j/n)^q, clustering toward t = 1.
    double grading = 2.0;
    /// Replaces Γ_k(γ) in the normalization. Only for reproducing hand arithmetic.
    std::optional<double> gamma_k_override;
};

/// Γ_k(γ) as used by the normalization: the override if present, else the identity value.
double normalizing_gamma_k(const FracParams& params, const IntegralOptions& options);

/// ρ^(-γ/k)(x^ρ - 1)^(γ/k) / (γ Γ_k(γ)): the integral of φ ≡ 1.
double hilfer_integral_of_one(const FracParams& params, double x, const IntegralOptions& options = {});

/// Nodes t_j and weights w_j with ∫ ≈ Σ w_j φ(t_j), normalization included.
struct ProductRule {
    std::vector<double> points;
    std::vector<double> weights;
};

/// Product-integration rule for the integral at x. The mesh lives in s = t^ρ;
/// each panel's linear interpolant is integrated against (X - s)^(a-1) exactly
/// through its first two moments, so the kernel singularity at s = X is never sampled.
ProductRule product_rule(const FracParams& params, double x, const IntegralOptions& options = {});

double product_quadrature(const FracParams& params, const std::function<double(double)>& phi,
                          double x, const IntegralOptions& options = {});
double product_quadrature(const FracParams& params, const GridFunction& phi, double x,
                          const IntegralOptions& options = {});

/// (ρ^(1-γ/k) / (kΓ_k(γ))) ∫₁^x t^(ρ-1) (x^ρ - t^ρ)^(γ/k-1) φ(t) dt. Exactly 0 at x = 1.
double hilfer_integral(const FracParams& params, const GridFunction& phi, double x,
                       const IntegralOptions& options = {});

/// hilfer_integral at many points; parallel over x, each value computed in a fixed order.
std::vector<double> hilfer_integral_batch(const FracParams& params, const GridFunction& phi,
                                          std::span<const double> xs,
                                          const IntegralOptions& options = {});

/// The product rule collapsed onto a fixed node set: row i maps nodal values of
/// φ to the integral at nodes[i], including the interpolation of φ between its nodes.
class HilferWeights {
public:
    HilferWeights(const FracParams& params, std::vector<double> nodes,
                  const IntegralOptions& options = {});

    std::vector<double> apply(std::span<const double> phi_values) const;

    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> row(std::size_t i) const noexcept { return rows_[i]; }

private:
    std::vector<double> nodes_;
    std::vector<std::vector<double>> rows_;
};

struct ConvergenceOrder {
    /// Empirical order p in error ≈ C n^(-p); +inf when `exact`.
    double order = 0.0;
    /// Every mesh reproduced the reference to within 1e-12 relative.
    bool exact = false;
    std::vector<double> errors;
};

/// Fits log|I(n) - I(4·max n)| against log(1/n). Needs at least three strictly
/// increasing mesh sizes. Errors below 1e-12·max(1, |reference|) count as zero.
/// Throws DegenerateFitError if fewer than two errors are usable but not all vanish.
ConvergenceOrder measure_convergence_order(const FracParams& params,
                                           const std::function<double(double)>& phi, double x,
                                           std::span<const std::size_t> mesh_sizes,
                                           const IntegralOptions& options = {});
ConvergenceOrder measure_convergence_order(const FracParams& params, const GridFunction& phi,
                                           double x, std::span<const std::size_t> mesh_sizes,
                                           const IntegralOptions& options = {});

}  // namespace hilfer
