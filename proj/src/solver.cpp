#include "hilfer/solver.hpp"

#include <algorithm>
#include <sstream>

#include "hilfer/errors.hpp"

namespace hilfer {
namespace {

// Past this sup norm one more application may overflow; the run is reported as diverged.
constexpr double kDivergenceBound = 1e100;

}  // namespace

SolveReport solve(const HilferOperator& op, const GridFunction& alpha0, const SolveOptions& options) {
    if (!(options.tol > 0.0)) throw DomainError("solve: tol must be positive");
    if (options.max_iter < 1) throw DomainError("solve: max_iter must be at least 1");

    SolveReport report{0, {}, 0.0, 0.0, alpha0, false, {}, {}};
    if (!options.r0) {
        report.warnings.emplace_back("no certified radius supplied; ball condition not checked");
    } else if (alpha0.sup_norm() > *options.r0) {
        std::ostringstream os;
        os << "initial guess has sup norm " << alpha0.sup_norm() << " above r0 = " << *options.r0;
        report.warnings.push_back(os.str());
    }

    GridFunction current = alpha0;
    GridFunction next = op.apply(current);
    for (int p = 0; p < options.max_iter; ++p) {
        if (next.sup_norm() > kDivergenceBound) {
            report.warnings.emplace_back("iterates diverged; stopped before overflow");
            break;
        }
        GridFunction after = op.apply(next);
        IterationRecord rec;
        rec.p = p;
        rec.step_sup = sup_distance(next, current);
        rec.residual = sup_distance(after, next);
        rec.sup_norm = next.sup_norm();
        report.trace.push_back(rec);
        report.sup_distances.push_back(rec.step_sup);
        report.iterations = p + 1;
        report.residual = rec.residual;

        current = std::move(next);
        next = std::move(after);
        if (rec.residual <= options.tol) {
            report.converged = true;
            break;
        }
    }
    report.solution = current;

    const auto& d = report.sup_distances;
    for (std::size_t p = 2; p < d.size(); ++p) {
        if (d[p - 1] > 0.0) report.measured_rate = std::max(report.measured_rate, d[p] / d[p - 1]);
    }
    return report;
}

SolveReport solve(const EquationSpec& eq, const GridFunction& alpha0, const SolveOptions& options) {
    std::vector<double> nodes(alpha0.nodes().begin(), alpha0.nodes().end());
    return solve(HilferOperator(eq, std::move(nodes)), alpha0, options);
}

std::pair<SolveReport, SolveReport> solve_system(const SystemSpec& sys, const GridFunction& alpha0,
                                                 const GridFunction& beta0,
                                                 const SolveOptions& options) {
    sys.validate();
    return {solve(sys.eq_alpha, alpha0, options), solve(sys.eq_beta, beta0, options)};
}

}  // namespace hilfer
