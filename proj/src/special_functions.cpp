#include "hilfer/special_functions.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "hilfer/errors.hpp"

namespace hilfer {
namespace {

constexpr double kMaxDirectGammaArg = 170.0;

struct SimpsonState {
    const std::function<double(double)>& f;
    long evaluations = 0;
    long budget = 0;
};

double eval_counted(SimpsonState& state, double x) {
    if (++state.evaluations > state.budget) {
        throw NonConvergenceError("k_gamma_integral: evaluation budget exhausted");
    }
    return state.f(x);
}

// Adaptive Simpson on [a, b]; `whole` is the Simpson estimate over the interval.
// Accumulates the Richardson-corrected value and the magnitude of the correction.
void adaptive_simpson(SimpsonState& state, double a, double b, double fa, double fm, double fb,
                      double whole, double tol, int depth, double& value, double& error) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval_counted(state, lm);
    const double frm = eval_counted(state, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
        value += left + right + delta / 15.0;
        error += std::fabs(delta) / 15.0;
        return;
    }
    adaptive_simpson(state, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, value, error);
    adaptive_simpson(state, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, value, error);
}

struct Piece {
    double value = 0.0;
    double error = 0.0;
};

Piece integrate(SimpsonState& state, double a, double b, double tol) {
    // Seed with a few panels so that narrow features are not missed by the
    // first three samples.
    constexpr int seed_panels = 8;
    Piece out;
    const double h = (b - a) / seed_panels;
    for (int i = 0; i < seed_panels; ++i) {
        const double lo = a + i * h;
        const double hi = (i + 1 == seed_panels) ? b : lo + h;
        const double flo = eval_counted(state, lo);
        const double fhi = eval_counted(state, hi);
        const double fmid = eval_counted(state, 0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        adaptive_simpson(state, lo, hi, flo, fmid, fhi, whole, tol / seed_panels, 50, out.value,
                         out.error);
    }
    return out;
}

void require_k_z(double k, double z, const char* who) {
    if (!(k > 0.0) || !(k <= 1.0)) {
        throw DomainError(std::string(who) + ": k must lie in (0, 1], got " + std::to_string(k));
    }
    if (!(z > 0.0)) {
        throw DomainError(std::string(who) + ": z must be positive, got " + std::to_string(z));
    }
}

}  // namespace

double gamma(double x) {
    if (!(x > 0.0)) {
        throw DomainError("gamma: argument must be positive, got " + std::to_string(x));
    }
    return std::tgamma(x);
}

KGammaResult k_gamma(double k, double z) {
    require_k_z(k, z, "k_gamma");
    const double ratio = z / k;
    double value = 0.0;
    if (ratio < kMaxDirectGammaArg) {
        value = std::pow(k, ratio - 1.0) * std::tgamma(ratio);
    } else {
        value = std::exp((ratio - 1.0) * std::log(k) + std::lgamma(ratio));
    }
    if (!std::isfinite(value)) {
        throw std::overflow_error("k_gamma: result overflows double precision");
    }
    return {value, KGammaMethod::identity, 0.0};
}

KGammaResult k_gamma_integral(double k, double z, const KGammaIntegralOptions& options) {
    require_k_z(k, z, "k_gamma_integral");
    if (!(options.tol > 0.0)) {
        throw DomainError("k_gamma_integral: tol must be positive");
    }

    const double tol = options.tol;
    long evaluations = 0;

    // [0, 1]: t = v^(1/z), t^(z-1) dt = dv / z.
    const std::function<double(double)> head = [k, z](double v) {
        const double t = std::pow(v, 1.0 / z);
        return std::exp(-std::pow(t, k) / k) / z;
    };
    SimpsonState head_state{head, 0, options.max_evaluations};
    const Piece head_piece = integrate(head_state, 0.0, 1.0, 0.5 * tol);
    evaluations += head_state.evaluations;

    // [1, ∞): u = t^k / k, integrand (k u)^(z/k - 1) e^(-u) du.
    const double shape = z / k - 1.0;
    const std::function<double(double)> tail = [k, shape](double u) {
        return std::exp(shape * std::log(k * u) - u);
    };
    SimpsonState tail_state{tail, 0, options.max_evaluations - evaluations};
    const double start = 1.0 / k;
    const double peak = std::max(start, shape);
    const double chunk = std::max(1.0, std::sqrt(std::max(shape, 1.0)));
    const double cutoff = tol * 1e-3;
    // Locate the end first so the tolerance can be split evenly over the chunks.
    long n_chunks = 1;
    while (!(start + n_chunks * chunk >= peak && tail(start + n_chunks * chunk) < cutoff)) {
        if (++n_chunks > 100000) {
            throw NonConvergenceError("k_gamma_integral: tail did not decay");
        }
    }
    Piece tail_piece;
    double lo = start;
    for (long c = 0; c < n_chunks; ++c) {
        const double hi = start + (c + 1) * chunk;
        const Piece p = integrate(tail_state, lo, hi, 0.25 * tol / static_cast<double>(n_chunks));
        tail_piece.value += p.value;
        tail_piece.error += p.error;
        lo = hi;
    }
    // Remaining tail beyond the cutoff is bounded by the integrand value times
    // the decay length (the integrand is log-concave past its peak).
    const double remainder = tail(lo) / std::max(1.0 - shape / lo, 1e-3);

    KGammaResult out;
    out.method = KGammaMethod::integral;
    out.value = head_piece.value + tail_piece.value;
    out.estimated_abs_error = head_piece.error + tail_piece.error + remainder;
    if (out.estimated_abs_error > tol) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "k_gamma_integral: error estimate %.3g exceeds tolerance %.3g",
                      out.estimated_abs_error, tol);
        throw NonConvergenceError(buf);
    }
    return out;
}

double beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw DomainError("beta: arguments must be positive");
    }
    if (a + b < kMaxDirectGammaArg) {
        return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
    }
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

}  // namespace hilfer
