#include "nbt/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "nbt/specfun.hpp"
#include "nbt/threads.hpp"

namespace nbt::fixedpoint {

namespace {

constexpr double kScanLo = 1e-9;
constexpr double kScanHi = 1.0 - 1e-9;
constexpr int kMaxBisectionSteps = 200;
constexpr int kUniformScanPoints = 10000;
constexpr int kIterationCap = 100000;

double g_value(long long n, double p) {
    return dynamics::pn_map(n, Probability::from_value(p)).value - p;
}

// P_n'(p) = n p (psi(1 + n(1-p)) - psi(1 + n p) - ln((1-p)/p)); equals the
// derivative at the fixed point when P_n(p) = p.
double derivative_formula(long long n, double p) {
    const double nd = static_cast<double>(n);
    const double np = nd * p;
    return np * (specfun::digamma(1.0 + (nd - np)) - specfun::digamma(1.0 + np) -
                 std::log((1.0 - p) / p));
}

struct Bracket {
    double lo, hi;
    double g_lo, g_hi;
};

// g > 0 near 0 (P_n -> 1) and the interior root is unique, so a geometric
// sweep from the left edge finds the sign change; a uniform sweep backs it up.
Bracket scan_for_bracket(long long n) {
    double prev = kScanLo;
    double g_prev = g_value(n, prev);
    for (double x = 2.0 * kScanLo; prev < kScanHi; x *= 2.0) {
        const double cur = std::min(x, kScanHi);
        const double g_cur = g_value(n, cur);
        if ((g_prev > 0.0) != (g_cur > 0.0)) return {prev, cur, g_prev, g_cur};
        prev = cur;
        g_prev = g_cur;
    }
    const double step = (kScanHi - kScanLo) / kUniformScanPoints;
    prev = kScanLo;
    g_prev = g_value(n, prev);
    for (int i = 1; i <= kUniformScanPoints; ++i) {
        const double cur = kScanLo + i * step;
        const double g_cur = g_value(n, cur);
        if ((g_prev > 0.0) != (g_cur > 0.0)) return {prev, cur, g_prev, g_cur};
        prev = cur;
        g_prev = g_cur;
    }
    throw BracketingError("fixedpoint::solve: no sign change of P_n(p) - p on [" +
                          std::to_string(kScanLo) + ", " + std::to_string(kScanHi) +
                          "] for n = " + std::to_string(n));
}

// Smallest symmetric interval around x on which g changes sign; g is locally
// strictly decreasing at the interior root (|P_n'| < 1), so expansion ends.
std::pair<double, double> straddling_bracket(long long n, double x, double residual) {
    double delta = std::max({residual, std::abs(x) * 1e-15, 1e-15});
    for (int j = 0; j < 60; ++j) {
        const double lo = std::max(x - delta, kScanLo);
        const double hi = std::min(x + delta, kScanHi);
        if ((g_value(n, lo) > 0.0) != (g_value(n, hi) > 0.0)) return {lo, hi};
        delta *= 4.0;
    }
    throw BracketingError("fixedpoint: could not straddle the fixed point at p = " +
                          std::to_string(x) + " for n = " + std::to_string(n));
}

void require_solver_inputs(long long n, double tol) {
    if (n < 1) throw std::domain_error("fixedpoint: n must be a positive integer");
    if (!(tol > 0.0 && tol <= 1e-6)) {
        throw std::domain_error("fixedpoint: tol must lie in (0, 1e-6]");
    }
}

}  // namespace

FixedPointResult solve(long long n, double tol) {
    require_solver_inputs(n, tol);
    Bracket br = scan_for_bracket(n);
    for (int step = 1; step <= kMaxBisectionSteps; ++step) {
        const double mid = 0.5 * (br.lo + br.hi);
        const double g_mid = g_value(n, mid);
        if (std::abs(g_mid) < tol) {
            return {n,
                    Probability::from_value(mid),
                    std::abs(g_mid),
                    {br.lo, br.hi},
                    step,
                    derivative_formula(n, mid)};
        }
        if ((g_mid > 0.0) == (br.g_lo > 0.0)) {
            br.lo = mid;
            br.g_lo = g_mid;
        } else {
            br.hi = mid;
            br.g_hi = g_mid;
        }
    }
    throw BracketingError("fixedpoint::solve: bisection did not reach tol = " +
                          std::to_string(tol) + " for n = " + std::to_string(n));
}

FixedPointResult iterate_to_fixed_point(long long n, Probability p0, double tol, int max_iter) {
    if (n < 1) throw std::domain_error("fixedpoint: n must be a positive integer");
    if (!(p0.value > 0.0 && p0.value < 1.0)) {
        throw std::domain_error("iterate_to_fixed_point: p0 must lie strictly inside (0,1)");
    }
    if (!(tol > 0.0)) throw std::domain_error("iterate_to_fixed_point: tol must be positive");
    if (max_iter < 1 || max_iter > kIterationCap) {
        throw std::invalid_argument("iterate_to_fixed_point: max_iter must lie in [1, 1e5]");
    }

    dynamics::IterationTrace trace{n, p0, {{0, p0}}};
    Probability p = p0;
    for (int k = 1; k <= max_iter; ++k) {
        const Probability next = dynamics::pn_map(n, p);
        trace.entries.push_back({k, next});
        if (std::abs(next.value - p.value) < tol) {
            const double residual = std::abs(dynamics::pn_map(n, next).value - next.value);
            return {n,
                    next,
                    residual,
                    straddling_bracket(n, next.value, residual),
                    k,
                    derivative_formula(n, next.value)};
        }
        p = next;
    }
    throw NonConvergenceError("iterate_to_fixed_point: |p_{k+1} - p_k| < " + std::to_string(tol) +
                                  " not reached within " + std::to_string(max_iter) +
                                  " iterations for n = " + std::to_string(n) +
                                  " (tol too tight, not divergence)",
                              std::move(trace));
}

double derivative_at_fixed_point(long long n, Probability p_n) {
    if (n < 1) throw std::domain_error("fixedpoint: n must be a positive integer");
    if (!(p_n.value > 0.0 && p_n.value < 1.0)) {
        throw std::domain_error("derivative_at_fixed_point: p_n must lie strictly inside (0,1)");
    }
    const double residual = std::abs(dynamics::pn_map(n, p_n).value - p_n.value);
    if (!(residual < 1e-10)) {
        throw std::invalid_argument(
            "derivative_at_fixed_point: point is not a fixed point (residual " +
            std::to_string(residual) + ")");
    }
    return derivative_formula(n, p_n.value);
}

double rn_lower_bound(long long n, Probability p) {
    if (n < 1) throw std::domain_error("fixedpoint: n must be a positive integer");
    if (!(p.value > 0.0 && p.value < 1.0)) {
        throw std::domain_error("rn_lower_bound: p must lie strictly inside (0,1)");
    }
    const double nd = static_cast<double>(n);
    const double np = nd * p.value;
    const double one_plus_np = 1.0 + np;
    return 0.5 * (1.0 + nd) / (1.0 + nd * (1.0 - p.value)) +
           (1.0 / 6.0) / (one_plus_np * one_plus_np) - (2.0 / 3.0) / one_plus_np;
}

std::vector<FixedPointResult> solve_grid(const std::vector<long long>& ns, double tol) {
    std::vector<FixedPointResult> results(ns.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(nbt::max_threads())
    for (long long i = 0; i < static_cast<long long>(ns.size()); ++i) {
        try {
            results[i] = solve(ns[i], tol);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

std::vector<FixedPointResult> solve_grid_serial(const std::vector<long long>& ns, double tol) {
    std::vector<FixedPointResult> results;
    results.reserve(ns.size());
    for (const long long n : ns) results.push_back(solve(n, tol));
    return results;
}

}  // namespace nbt::fixedpoint
