#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "nbt/dynamics.hpp"
#include "nbt/probability.hpp"

namespace nbt::fixedpoint {

struct FixedPointResult {
    long long n;
    Probability p_n;
    double residual;                     // |P_n(p_n) - p_n|
    std::pair<double, double> bracket;   // endpoints with opposite signs of P_n(p) - p
    int iterations;
    double derivative_at_fp;             // P_n'(p_n)
};

/// Thrown when no sign change of P_n(p) - p is found on the scan domain.
/// The interior root exists for every n, so this signals a precision bug.
struct BracketingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when fixed-point iteration fails to meet tol within max_iter.
struct NonConvergenceError : std::runtime_error {
    NonConvergenceError(const std::string& what, dynamics::IterationTrace trace)
        : std::runtime_error(what), trace(std::move(trace)) {}
    dynamics::IterationTrace trace;
};

/// Locates the unique interior fixed point of P_n by bracketed bisection of
/// g(p) = P_n(p) - p on [1e-9, 1 - 1e-9].  tol must lie in (0, 1e-6].
FixedPointResult solve(long long n, double tol = 1e-12);

/// Demonstrates the k -> infinity convergence: applies P_n from p0 until
/// successive iterates differ by less than tol.  max_iter is capped at 1e5.
FixedPointResult iterate_to_fixed_point(long long n, Probability p0, double tol = 1e-12,
                                        int max_iter = 100000);

/// P_n'(p) via the digamma formula
///   n p (psi(1 + n(1-p)) - psi(1 + n p) - ln((1-p)/p)),
/// evaluated at a point with fixed-point residual below 1e-10.
double derivative_at_fixed_point(long long n, Probability p_n);

/// r_n(p) = (1/2)(1+n)/(1+n(1-p)) + (1/6)/(1+np)^2 - (2/3)/(1+np),
/// the explicit term bounding P_n'(p_n) away from -1.
double rn_lower_bound(long long n, Probability p);

/// Solves every n in the grid; OpenMP-parallel with results in input order.
std::vector<FixedPointResult> solve_grid(const std::vector<long long>& ns, double tol = 1e-12);

/// Serial reference for solve_grid; must produce identical results.
std::vector<FixedPointResult> solve_grid_serial(const std::vector<long long>& ns,
                                                double tol = 1e-12);

}  // namespace nbt::fixedpoint
