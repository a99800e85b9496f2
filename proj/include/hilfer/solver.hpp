#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hilfer/equation_model.hpp"

namespace hilfer {

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 200;
    /// Certified radius, if one was computed; only used for the ball warning.
    std::optional<double> r0;
};

struct IterationRecord {
    int p = 0;
    double step_sup = 0.0;  ///< ‖α_{p+1} - α_p‖
    double residual = 0.0;  ///< ‖α_{p+1} - 𝒟α_{p+1}‖
    double sup_norm = 0.0;  ///< ‖α_{p+1}‖
};

struct SolveReport {
    int iterations = 0;
    std::vector<double> sup_distances;
    double residual = 0.0;
    /// max of sup_distances[p] / sup_distances[p-1] for p >= 2; the first step is a transient.
    double measured_rate = 0.0;
    GridFunction solution;
    bool converged = false;
    std::vector<IterationRecord> trace;
    /// Set when ‖α₀‖ exceeds options.r0, when no r0 was given, or on divergence.
    std::vector<std::string> warnings;
};

/// Picard iteration α_{p+1} = 𝒟α_p on alpha0's nodes. Stops once the residual of
/// the newest iterate is <= tol (which also bounds the step) or after max_iter
/// applications. Nonconvergence is reported, not thrown; so is divergence past
/// sup norm 1e100, which ends the run early with a warning.
SolveReport solve(const HilferOperator& op, const GridFunction& alpha0, const SolveOptions& options = {});
SolveReport solve(const EquationSpec& eq, const GridFunction& alpha0, const SolveOptions& options = {});

std::pair<SolveReport, SolveReport> solve_system(const SystemSpec& sys, const GridFunction& alpha0,
                                                 const GridFunction& beta0,
                                                 const SolveOptions& options = {});

}  // namespace hilfer
