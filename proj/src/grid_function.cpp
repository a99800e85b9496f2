#include "hilfer/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hilfer/errors.hpp"

namespace hilfer {

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() < 2) {
        throw DomainError("GridFunction: at least two nodes are required");
    }
    if (nodes_.size() != values_.size()) {
        throw DomainError("GridFunction: node and value counts differ");
    }
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        if (!(nodes_[i] < nodes_[i + 1])) {
            throw DomainError("GridFunction: nodes must be strictly increasing (index " +
                              std::to_string(i + 1) + ")");
        }
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw DomainError("GridFunction: non-finite value");
    }
}

GridFunction GridFunction::sample(std::vector<double> nodes,
                                  const std::function<double(double)>& f) {
    std::vector<double> values(nodes.size());
    std::transform(nodes.begin(), nodes.end(), values.begin(), f);
    return GridFunction(std::move(nodes), std::move(values));
}

GridFunction GridFunction::constant(std::vector<double> nodes, double value) {
    std::vector<double> values(nodes.size(), value);
    return GridFunction(std::move(nodes), std::move(values));
}

double GridFunction::operator()(double x) const {
    const double lo = nodes_.front();
    const double hi = nodes_.back();
    // Round-off from t = s^(1/ρ) may land a few ulps outside the domain.
    const double slack = 1e-12 * std::max({1.0, std::fabs(lo), std::fabs(hi)});
    if (x < lo) {
        if (x < lo - slack) throw DomainError("GridFunction: x = " + std::to_string(x) + " below domain");
        return values_.front();
    }
    if (x > hi) {
        if (x > hi + slack) throw DomainError("GridFunction: x = " + std::to_string(x) + " above domain");
        return values_.back();
    }
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    if (it == nodes_.end()) return values_.back();
    const std::size_t j = static_cast<std::size_t>(it - nodes_.begin());
    const std::size_t i = j - 1;
    const double theta = (x - nodes_[i]) / (nodes_[j] - nodes_[i]);
    return values_[i] + theta * (values_[j] - values_[i]);
}

double GridFunction::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
    return GridFunction(nodes_, std::move(values));
}

bool GridFunction::same_nodes(const GridFunction& other) const noexcept {
    return nodes_ == other.nodes_;
}

std::vector<double> uniform_nodes(double lo, double hi, std::size_t n) {
    if (n < 2 || !(lo < hi)) throw DomainError("uniform_nodes: need n >= 2 and lo < hi");
    std::vector<double> nodes(n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = lo + h * static_cast<double>(i);
    nodes.back() = hi;
    return nodes;
}

GridFunction linear_combination(double a, const GridFunction& f, double b, const GridFunction& g) {
    if (!f.same_nodes(g)) throw DomainError("linear_combination: node sets differ");
    std::vector<double> values(f.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = a * f.values()[i] + b * g.values()[i];
    }
    return f.with_values(std::move(values));
}

double sup_distance(const GridFunction& f, const GridFunction& g) {
    if (f.size() != g.size()) throw DomainError("sup_distance: node sets differ");
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        m = std::max(m, std::fabs(f.values()[i] - g.values()[i]));
    }
    return m;
}

}  // namespace hilfer
