#pragma once

namespace hilfer {

enum class KGammaMethod { identity, integral };

struct KGammaResult {
    double value = 0.0;
    KGammaMethod method = KGammaMethod::identity;
    double estimated_abs_error = 0.0;
};

/// Classical gamma function for x > 0. Throws DomainError otherwise.
double gamma(double x);

/// k-gamma function through Γ_k(z) = k^(z/k - 1) Γ(z/k).
/// Requires 0 < k <= 1 and z > 0. Falls back to log-gamma arithmetic when
/// Γ(z/k) alone would overflow; throws std::overflow_error if the result does.
KGammaResult k_gamma(double k, double z);

struct KGammaIntegralOptions {
    double tol = 1e-10;
    /// Upper bound on integrand evaluations before NonConvergenceError.
    long max_evaluations = 5'000'000;
};

/// Independent route: quadrature of ∫₀^∞ t^(z-1) exp(-t^k / k) dt.
///
/// The range is split at t = 1. On [0, 1] the substitution v = t^z removes the
/// endpoint singularity of t^(z-1); on [1, ∞) the substitution u = t^k / k turns
/// the tail into k^(z/k-1) ∫_{1/k}^∞ u^(z/k-1) e^(-u) du, which is integrated
/// chunk by chunk until the integrand has passed its peak and dropped below
/// tol·1e-3. Each piece uses adaptive Simpson with a Richardson error estimate.
KGammaResult k_gamma_integral(double k, double z, const KGammaIntegralOptions& options = {});

/// Euler Beta function B(a, b) = Γ(a)Γ(b)/Γ(a+b) for a, b > 0.
double beta(double a, double b);

}  // namespace hilfer
