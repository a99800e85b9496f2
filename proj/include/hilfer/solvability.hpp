#pragma once

#include <algorithm>
#include <limits>
#include <optional>

#include "hilfer/equation_model.hpp"

namespace hilfer {

/// Stand-ins for the two constants that enter κ, used to replay hand arithmetic.
/// Left empty, κ is computed from the parameters.
struct ArithmeticOverrides {
    std::optional<double> gamma_k;      ///< replaces Γ_k(γ)
    std::optional<double> kernel_mass;  ///< replaces (T^ρ - 1)^(γ/k)
};

struct CertifyOptions {
    ArithmeticOverrides overrides;
    /// Band around 1 in which a factor is reported as a boundary case.
    double slack = 1e-9;
    /// Box [-r, r] on which declared Lipschitz constants are checked empirically.
    double validation_radius = 1.0;
    long validation_probes = 4000;
    bool validate = true;
};

struct RadiusInterval {
    double lower = 0.0;  ///< open end
    double upper = 0.0;  ///< closed end; +inf when κ = 0
    bool empty() const noexcept { return !(upper > lower); }
};

struct RadiusCertificate {
    double c1 = 0.0;
    double kappa = 0.0;
    /// sup{r0 : c1 + κ r0 < 1}; 0 when c1 >= 1.
    double r0_max_contraction = 0.0;
    /// {r0 > 0 : c1 r0 + κ r0² <= r0}.
    RadiusInterval r0_selfmap_interval;
    double gamma_k_used = 0.0;
    bool gamma_k_overridden = false;
    double kernel_mass_used = 0.0;
    bool kernel_mass_overridden = false;
    /// Value the parameters give for (T^ρ - 1)^(γ/k), whether or not it was overridden.
    double kernel_mass_computed = 0.0;
    double slack = 1e-9;

    bool passes() const noexcept { return r0_max_contraction > 0.0 && !r0_selfmap_interval.empty(); }
    double factor(double r0) const noexcept { return c1 + kappa * r0; }
    /// Step-1 bound c1 r0 + κ r0².
    double selfmap_bound(double r0) const noexcept { return c1 * r0 + kappa * r0 * r0; }
};

enum class Admissibility { admissible, boundary, rejected };

/// factor < 1 - slack: admissible; within slack of 1: boundary; otherwise rejected.
Admissibility classify_radius(const RadiusCertificate& cert, double r0);
const char* to_string(Admissibility a) noexcept;

/// c2 c3 ρ^(-γ/k) (T^ρ - 1)^(γ/k) / (γ Γ_k(γ)).
double contraction_kappa(const EquationSpec& eq, const ArithmeticOverrides& overrides = {});

/// c1 + κ r0.
double contraction_factor(const EquationSpec& eq, double r0, const ArithmeticOverrides& overrides = {});

/// Fills every certificate field. With options.validate set, the declared Lipschitz
/// constants are checked first (ValidationError on contradiction).
RadiusCertificate certify(const EquationSpec& eq, const CertifyOptions& options = {});

struct SystemCertificate {
    RadiusCertificate alpha;
    RadiusCertificate beta;
    double r0 = 0.0;
    /// max of the two factors at r0.
    double epsilon = 0.0;
    bool passes() const noexcept { return alpha.passes() && beta.passes() && epsilon < 1.0; }
    /// Largest r0 admissible for both equations.
    double r0_max() const noexcept { return std::min(alpha.r0_max_contraction, beta.r0_max_contraction); }
};

SystemCertificate certify_system(const SystemSpec& sys, double r0, const CertifyOptions& options = {});

}  // namespace hilfer
