#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hilfer {

/// A continuous function on [nodes.front(), nodes.back()] stored as nodal
/// values; evaluation between nodes is linear interpolation.
class GridFunction {
public:
    GridFunction(std::vector<double> nodes, std::vector<double> values);

    /// Samples f at the given nodes.
    static GridFunction sample(std::vector<double> nodes, const std::function<double(double)>& f);
    static GridFunction constant(std::vector<double> nodes, double value);

    double operator()(double x) const;

    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double lower() const noexcept { return nodes_.front(); }
    double upper() const noexcept { return nodes_.back(); }

    double sup_norm() const noexcept;

    /// Same node set, new values.
    GridFunction with_values(std::vector<double> values) const;

    bool same_nodes(const GridFunction& other) const noexcept;

private:
    std::vector<double> nodes_;
    std::vector<double> values_;
};

/// n equally spaced nodes on [lo, hi], endpoints exact.
std::vector<double> uniform_nodes(double lo, double hi, std::size_t n);

/// a·f + b·g on the common node set. Throws DomainError if the node sets differ.
GridFunction linear_combination(double a, const GridFunction& f, double b, const GridFunction& g);

/// max_i |f_i - g_i| on a common node set.
double sup_distance(const GridFunction& f, const GridFunction& g);

}  // namespace hilfer
