#pragma once

namespace nbt::specfun {

/// Two-sided bound in log-space, lower <= upper.
struct BoundPair {
    double lower;
    double upper;
};

/// ln Gamma(x) for x > 0. Stirling series with recurrence lift for small
/// arguments; absolute error below 1e-13 on moderate arguments.
double log_gamma(double x);

/// psi(x) = d/dx ln Gamma(x), x > 0.
double digamma(double x);

/// psi^(order)(x) for 1 <= order <= 15, x > 0.
double polygamma(int order, double x);

/// ln binom(n, alpha) = ln n! - ln Gamma(alpha+1) - ln Gamma(n-alpha+1)
/// for real 0 <= alpha <= n.
double log_binomial(long long n, double alpha);

/// ln Gamma(z+1) - z ln z + z for z >= 0, with value 0 at z = 0.
/// Free of cancellation at large z, where it equals ln(2 pi z)/2 + O(1/z);
/// log-pmf values built from it keep full precision even for huge z.
double log_gamma_excess(double z);

/// Robbins' sandwich for ln n!:
///   ln(sqrt(2 pi) n^{n+1/2} e^{-n}) <= ln n! <= ln(e n^{n+1/2} e^{-n}).
BoundPair robbins_bounds(long long n);

/// Upper bound on psi^(2i+1)(n/2+1):
///   (2i)!/(n/2+1)^{2i+1} [1 + (2i+1)/(n+2) + (2i+1)(2i+2)/(3(n+2)^2)].
double chen_polygamma_upper(int i, long long n);

} // namespace nbt::specfun
