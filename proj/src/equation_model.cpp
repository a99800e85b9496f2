#include "hilfer/equation_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hilfer/errors.hpp"
#include "hilfer/parallel.hpp"

namespace hilfer {

Nonlinearity make_nonlinearity(std::string_view src, double lipschitz, bool zero_at_zero) {
    if (!(lipschitz >= 0.0)) throw DomainError("Lipschitz constant must be non-negative");
    return Nonlinearity{Expr::parse(src), lipschitz, zero_at_zero};
}

void SystemSpec::validate() const {
    const auto& p = eq_alpha.params;
    const auto& q = eq_beta.params;
    if (p.k != q.k || p.rho != q.rho || p.gamma_ord != q.gamma_ord || p.T != q.T) {
        throw ValidationError("SystemSpec: both equations must share the same parameters");
    }
}

HilferOperator::HilferOperator(EquationSpec eq, std::vector<double> nodes)
    : eq_(std::move(eq)), weights_(eq_.params, std::move(nodes), eq_.quadrature) {
    if (std::fabs(weights_.nodes().back() - eq_.params.T) > 1e-12 * eq_.params.T) {
        throw DomainError("HilferOperator: node set must end at T");
    }
}

GridFunction HilferOperator::apply(const GridFunction& alpha) const {
    const auto nodes = weights_.nodes();
    if (alpha.size() != nodes.size() || !std::equal(nodes.begin(), nodes.end(), alpha.nodes().begin())) {
        throw DomainError("HilferOperator::apply: alpha is not sampled on the operator's nodes");
    }
    const auto values = alpha.values();
    const std::size_t n = nodes.size();

    auto at_node = [&](const char* which, const Nonlinearity& fn, std::size_t i) {
        try {
            return fn(nodes[i], values[i]);
        } catch (const DomainError& e) {
            std::ostringstream os;
            os << eq_.name << ": " << which << " failed at x = " << nodes[i] << ": " << e.what();
            throw DomainError(os.str());
        }
    };

    std::vector<double> g_values(n);
    for (std::size_t i = 0; i < n; ++i) g_values[i] = at_node("G", eq_.g, i);
    const std::vector<double> integral = weights_.apply(g_values);

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double psi = at_node("Psi", eq_.psi, i);
        out[i] = at_node("F", eq_.f, i) + psi * integral[i];
    }
    return alpha.with_values(std::move(out));
}

GridFunction apply_operator(const EquationSpec& eq, const GridFunction& alpha) {
    std::vector<double> nodes(alpha.nodes().begin(), alpha.nodes().end());
    return HilferOperator(eq, std::move(nodes)).apply(alpha);
}

namespace {

// |f1 - f0| / (u1 - u0) minus a bound on its rounding error, so the estimate
// stays below the true constant when each f carries a few ulps of error.
double rounded_down_quotient(double f1, double f0, double u1, double u0) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double q = std::fabs(f1 - f0) / (u1 - u0);
    const double err = 4.0 * eps * (std::fabs(f1) + std::fabs(f0)) / (u1 - u0) + 2.0 * eps * q;
    return std::max(0.0, q - err);
}

}  // namespace

double estimate_lipschitz(const Nonlinearity& n, double lo, double hi, double r0, long probes) {
    if (!(r0 > 0.0)) throw DomainError("estimate_lipschitz: r0 must be positive");
    if (probes < 2) throw DomainError("estimate_lipschitz: need at least two probes");
    if (!(lo <= hi)) throw DomainError("estimate_lipschitz: empty x range");

    // Split the budget between x positions and u levels; both at least 2.
    const long nx = std::max<long>(2, static_cast<long>(std::sqrt(static_cast<double>(probes))));
    const long nu = std::max<long>(2, probes / nx);

    std::vector<double> best(static_cast<std::size_t>(nx), 0.0);
    parallel_for(static_cast<std::size_t>(nx), [&](std::size_t ix) {
        const double x = nx == 1 ? lo : lo + (hi - lo) * static_cast<double>(ix) / static_cast<double>(nx - 1);
        double prev_u = -r0;
        double prev_f = n(x, prev_u);
        const double first_f = prev_f;
        double local = 0.0;
        for (long iu = 1; iu < nu; ++iu) {
            const double u = -r0 + 2.0 * r0 * static_cast<double>(iu) / static_cast<double>(nu - 1);
            const double fu = n(x, u);
            local = std::max(local, rounded_down_quotient(fu, prev_f, u, prev_u));
            prev_u = u;
            prev_f = fu;
        }
        // The widest pair catches slopes that only show up across the whole box.
        local = std::max(local, rounded_down_quotient(prev_f, first_f, r0, -r0));
        best[ix] = local;
    });
    return *std::max_element(best.begin(), best.end());
}

bool check_zero_conditions(const EquationSpec& eq, long probes) {
    if (probes < 2) throw DomainError("check_zero_conditions: need at least two probes");
    constexpr double tol = 1e-12;
    for (long i = 0; i < probes; ++i) {
        const double x = 1.0 + (eq.params.T - 1.0) * static_cast<double>(i) / static_cast<double>(probes - 1);
        try {
            if (std::fabs(eq.f(x, 0.0)) > tol) return false;
            if (std::fabs(eq.psi(x, 0.0)) > tol) return false;
            if (std::fabs(eq.g(x, 0.0)) > tol) return false;
        } catch (const DomainError&) {
            return false;
        }
    }
    return true;
}

void validate_declarations(const EquationSpec& eq, double r0, long probes) {
    struct Named {
        const char* label;
        const Nonlinearity* fn;
    };
    const Named all[] = {{"F", &eq.f}, {"Psi", &eq.psi}, {"G", &eq.g}};
    for (const auto& [label, fn] : all) {
        const double measured = estimate_lipschitz(*fn, 1.0, eq.params.T, r0, probes);
        if (measured > fn->lipschitz + 1e-9) {
            std::ostringstream os;
            os << eq.name << ": " << label << " = '" << fn->expr.to_string()
               << "' has empirical Lipschitz constant " << measured << " above the declared "
               << fn->lipschitz;
            throw ValidationError(os.str());
        }
        if (fn->zero_at_zero) {
            for (long i = 0; i < std::max<long>(probes / 100, 2); ++i) {
                const double x = 1.0 + (eq.params.T - 1.0) * static_cast<double>(i) /
                                           static_cast<double>(std::max<long>(probes / 100, 2) - 1);
                if (std::fabs((*fn)(x, 0.0)) > 1e-12) {
                    std::ostringstream os;
                    os << eq.name << ": " << label << " is flagged zero_at_zero but " << label
                       << "(" << x << ", 0) = " << (*fn)(x, 0.0);
                    throw ValidationError(os.str());
                }
            }
        }
    }
}

}  // namespace hilfer
