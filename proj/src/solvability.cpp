#include "hilfer/solvability.hpp"

#include <cmath>

#include "hilfer/errors.hpp"
#include "hilfer/special_functions.hpp"

namespace hilfer {
namespace {

double computed_kernel_mass(const FracParams& p) {
    return std::pow(std::expm1(p.rho * std::log(p.T)), p.exponent());
}

double gamma_k_for(const EquationSpec& eq, const ArithmeticOverrides& overrides) {
    if (overrides.gamma_k) {
        if (!(*overrides.gamma_k > 0.0)) throw DomainError("gamma_k override must be positive");
        return *overrides.gamma_k;
    }
    return k_gamma(eq.params.k, eq.params.gamma_ord).value;
}

}  // namespace

const char* to_string(Admissibility a) noexcept {
    switch (a) {
        case Admissibility::admissible: return "admissible";
        case Admissibility::boundary: return "boundary";
        case Admissibility::rejected: return "rejected";
    }
    return "?";
}

Admissibility classify_radius(const RadiusCertificate& cert, double r0) {
    const double f = cert.factor(r0);
    if (f < 1.0 - cert.slack) return Admissibility::admissible;
    if (f <= 1.0 + cert.slack) return Admissibility::boundary;
    return Admissibility::rejected;
}

double contraction_kappa(const EquationSpec& eq, const ArithmeticOverrides& overrides) {
    const FracParams& p = eq.params;
    p.validate();
    const double mass = overrides.kernel_mass ? *overrides.kernel_mass : computed_kernel_mass(p);
    if (!(mass >= 0.0)) throw DomainError("kernel_mass override must be non-negative");
    return eq.psi.lipschitz * eq.g.lipschitz * std::pow(p.rho, -p.exponent()) * mass /
           (p.gamma_ord * gamma_k_for(eq, overrides));
}

double contraction_factor(const EquationSpec& eq, double r0, const ArithmeticOverrides& overrides) {
    if (!(r0 >= 0.0)) throw DomainError("contraction_factor: r0 must be non-negative");
    return eq.f.lipschitz + contraction_kappa(eq, overrides) * r0;
}

RadiusCertificate certify(const EquationSpec& eq, const CertifyOptions& options) {
    if (options.validate) {
        validate_declarations(eq, options.validation_radius, options.validation_probes);
    }
    RadiusCertificate cert;
    cert.slack = options.slack;
    cert.c1 = eq.f.lipschitz;
    cert.kappa = contraction_kappa(eq, options.overrides);
    cert.gamma_k_used = gamma_k_for(eq, options.overrides);
    cert.gamma_k_overridden = options.overrides.gamma_k.has_value();
    cert.kernel_mass_computed = computed_kernel_mass(eq.params);
    cert.kernel_mass_used = options.overrides.kernel_mass.value_or(cert.kernel_mass_computed);
    cert.kernel_mass_overridden = options.overrides.kernel_mass.has_value();

    const double inf = std::numeric_limits<double>::infinity();
    if (cert.c1 >= 1.0) {
        cert.r0_max_contraction = 0.0;
        cert.r0_selfmap_interval = {0.0, 0.0};
    } else if (cert.kappa == 0.0) {
        cert.r0_max_contraction = inf;
        cert.r0_selfmap_interval = {0.0, inf};
    } else {
        const double edge = (1.0 - cert.c1) / cert.kappa;
        cert.r0_max_contraction = edge;
        cert.r0_selfmap_interval = {0.0, edge};
    }
    return cert;
}

SystemCertificate certify_system(const SystemSpec& sys, double r0, const CertifyOptions& options) {
    sys.validate();
    if (!(r0 >= 0.0)) throw DomainError("certify_system: r0 must be non-negative");
    SystemCertificate out;
    out.alpha = certify(sys.eq_alpha, options);
    out.beta = certify(sys.eq_beta, options);
    out.r0 = r0;
    out.epsilon = std::max(out.alpha.factor(r0), out.beta.factor(r0));
    return out;
}

}  // namespace hilfer
