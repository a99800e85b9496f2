#include "hilfer/frac_integral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hilfer/errors.hpp"
#include "hilfer/parallel.hpp"
#include "hilfer/special_functions.hpp"

namespace hilfer {
namespace {

bool open_unit(double v) { return v > 0.0 && v < 1.0; }

void require_point(const FracParams& params, double x) {
    if (!(x >= 1.0) || !(x <= params.T)) {
        throw DomainError("hilfer_integral: x = " + std::to_string(x) + " outside [1, " +
                          std::to_string(params.T) + "]");
    }
}

void require_covers(const GridFunction& phi, double x) {
    if (phi.lower() > 1.0 || phi.upper() < x) {
        throw DomainError("hilfer_integral: phi does not cover [1, " + std::to_string(x) + "]");
    }
}

// Mesh fraction u_j ∈ [0, 1] with u_0 = 0, u_n = 1.
double mesh_fraction(const IntegralOptions& options, std::size_t j) {
    const double r = static_cast<double>(j) / static_cast<double>(options.panels);
    return options.mesh == MeshKind::graded ? std::pow(r, options.grading) : r;
}

}  // namespace

void FracParams::validate() const {
    if (!open_unit(k)) throw DomainError("FracParams: k must lie in (0, 1)");
    if (!open_unit(rho)) throw DomainError("FracParams: rho must lie in (0, 1)");
    if (!open_unit(gamma_ord)) throw DomainError("FracParams: gamma must lie in (0, 1)");
    if (!(T > 1.0) || !std::isfinite(T)) throw DomainError("FracParams: T must exceed 1");
}

double normalizing_gamma_k(const FracParams& params, const IntegralOptions& options) {
    if (options.gamma_k_override) {
        if (!(*options.gamma_k_override > 0.0)) {
            throw DomainError("gamma_k_override must be positive");
        }
        return *options.gamma_k_override;
    }
    return k_gamma(params.k, params.gamma_ord).value;
}

double hilfer_integral_of_one(const FracParams& params, double x, const IntegralOptions& options) {
    params.validate();
    require_point(params, x);
    const double a = params.exponent();
    const double span = std::expm1(params.rho * std::log(x));
    return std::pow(params.rho, -a) * std::pow(span, a) /
           (params.gamma_ord * normalizing_gamma_k(params, options));
}

ProductRule product_rule(const FracParams& params, double x, const IntegralOptions& options) {
    params.validate();
    require_point(params, x);
    if (options.panels < 1) throw DomainError("product_rule: panels must be positive");
    if (options.mesh == MeshKind::graded && !(options.grading >= 1.0)) {
        throw DomainError("product_rule: grading exponent must be >= 1");
    }

    ProductRule rule;
    if (x == 1.0) return rule;

    const std::size_t n = options.panels;
    const double a = params.exponent();
    const double scale = std::pow(params.rho, -a) / (params.k * normalizing_gamma_k(params, options));
    const double span = std::expm1(params.rho * std::log(x));  // X - 1 with X = x^ρ

    rule.points.resize(n + 1);
    rule.weights.assign(n + 1, 0.0);
    std::vector<double> dist(n + 1);  // X - s_j
    for (std::size_t j = 0; j <= n; ++j) {
        const double u = mesh_fraction(options, j);
        dist[j] = span * (1.0 - u);
        rule.points[j] = std::pow(1.0 + span * u, 1.0 / params.rho);
    }
    rule.points.front() = 1.0;
    rule.points.back() = x;
    dist.back() = 0.0;

    for (std::size_t j = 0; j < n; ++j) {
        const double upper = dist[j];
        const double lower = dist[j + 1];
        const double h = upper - lower;
        if (!(h > 0.0)) continue;
        const double m0 = (std::pow(upper, a) - std::pow(lower, a)) / a;
        const double m1 = (std::pow(upper, a + 1.0) - std::pow(lower, a + 1.0)) / (a + 1.0);
        const double left = std::clamp((m1 - lower * m0) / h, 0.0, m0);
        rule.weights[j] += scale * left;
        rule.weights[j + 1] += scale * (m0 - left);
    }
    return rule;
}

double product_quadrature(const FracParams& params, const std::function<double(double)>& phi,
                          double x, const IntegralOptions& options) {
    const ProductRule rule = product_rule(params, x, options);
    double sum = 0.0;
    for (std::size_t j = 0; j < rule.points.size(); ++j) {
        sum += rule.weights[j] * phi(rule.points[j]);
    }
    return sum;
}

double product_quadrature(const FracParams& params, const GridFunction& phi, double x,
                          const IntegralOptions& options) {
    require_covers(phi, x);
    return product_quadrature(params, [&phi](double t) { return phi(t); }, x, options);
}

double hilfer_integral(const FracParams& params, const GridFunction& phi, double x,
                       const IntegralOptions& options) {
    params.validate();
    require_point(params, x);
    if (x == 1.0) return 0.0;
    return product_quadrature(params, phi, x, options);
}

std::vector<double> hilfer_integral_batch(const FracParams& params, const GridFunction& phi,
                                          std::span<const double> xs,
                                          const IntegralOptions& options) {
    std::vector<double> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { out[i] = hilfer_integral(params, phi, xs[i], options); });
    return out;
}

HilferWeights::HilferWeights(const FracParams& params, std::vector<double> nodes,
                             const IntegralOptions& options)
    : nodes_(std::move(nodes)), rows_(nodes_.size()) {
    params.validate();
    if (nodes_.size() < 2 || nodes_.front() != 1.0) {
        throw DomainError("HilferWeights: node set must start at 1 and have two or more nodes");
    }
    parallel_for(nodes_.size(), [&](std::size_t i) {
        const double x = nodes_[i];
        std::vector<double>& row = rows_[i];
        if (x == 1.0) return;
        const ProductRule rule = product_rule(params, x, options);
        const auto last = static_cast<std::size_t>(
            std::upper_bound(nodes_.begin(), nodes_.end(), x) - nodes_.begin());
        row.assign(std::min(last + 1, nodes_.size()), 0.0);
        std::size_t seg = 0;
        for (std::size_t j = 0; j < rule.points.size(); ++j) {
            const double t = rule.points[j];
            while (seg + 2 < nodes_.size() && nodes_[seg + 1] <= t) ++seg;
            const double theta =
                std::clamp((t - nodes_[seg]) / (nodes_[seg + 1] - nodes_[seg]), 0.0, 1.0);
            row[seg] += rule.weights[j] * (1.0 - theta);
            if (seg + 1 < row.size()) {
                row[seg + 1] += rule.weights[j] * theta;
            } else {
                row[seg] += rule.weights[j] * theta;
            }
        }
    });
}

std::vector<double> HilferWeights::apply(std::span<const double> phi_values) const {
    if (phi_values.size() != nodes_.size()) {
        throw DomainError("HilferWeights::apply: value count does not match node count");
    }
    std::vector<double> out(nodes_.size(), 0.0);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const auto& row = rows_[i];
        double sum = 0.0;
        for (std::size_t m = 0; m < row.size(); ++m) sum += row[m] * phi_values[m];
        out[i] = sum;
    }
    return out;
}

ConvergenceOrder measure_convergence_order(const FracParams& params,
                                           const std::function<double(double)>& phi, double x,
                                           std::span<const std::size_t> mesh_sizes,
                                           const IntegralOptions& options) {
    if (mesh_sizes.size() < 3) {
        throw DomainError("measure_convergence_order: need at least three mesh sizes");
    }
    for (std::size_t i = 0; i + 1 < mesh_sizes.size(); ++i) {
        if (!(mesh_sizes[i] < mesh_sizes[i + 1]) || mesh_sizes[i] == 0) {
            throw DomainError("measure_convergence_order: mesh sizes must be strictly increasing");
        }
    }

    IntegralOptions opts = options;
    opts.panels = 4 * mesh_sizes.back();
    const double reference = product_quadrature(params, phi, x, opts);

    // Rounding in a sum of ~10^4 weighted terms sits near 1e-14 relative.
    const double floor = 1e-12 * std::max(1.0, std::fabs(reference));
    ConvergenceOrder out;
    std::vector<double> log_h;
    std::vector<double> log_e;
    for (std::size_t n : mesh_sizes) {
        opts.panels = n;
        const double err = std::fabs(product_quadrature(params, phi, x, opts) - reference);
        out.errors.push_back(err);
        if (err > floor) {
            log_h.push_back(std::log(1.0 / static_cast<double>(n)));
            log_e.push_back(std::log(err));
        }
    }
    if (log_h.empty()) {
        out.exact = true;
        out.order = std::numeric_limits<double>::infinity();
        return out;
    }
    if (log_h.size() < 2) {
        throw DegenerateFitError("measure_convergence_order: fewer than two usable errors");
    }
    const double mx = std::accumulate(log_h.begin(), log_h.end(), 0.0) / log_h.size();
    const double my = std::accumulate(log_e.begin(), log_e.end(), 0.0) / log_e.size();
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < log_h.size(); ++i) {
        sxy += (log_h[i] - mx) * (log_e[i] - my);
        sxx += (log_h[i] - mx) * (log_h[i] - mx);
    }
    out.order = sxy / sxx;
    return out;
}

ConvergenceOrder measure_convergence_order(const FracParams& params, const GridFunction& phi,
                                           double x, std::span<const std::size_t> mesh_sizes,
                                           const IntegralOptions& options) {
    require_covers(phi, x);
    return measure_convergence_order(params, [&phi](double t) { return phi(t); }, x, mesh_sizes,
                                     options);
}

}  // namespace hilfer
