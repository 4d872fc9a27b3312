#pragma once

#include <cstdint>
#include <vector>

#include "nbt/probability.hpp"
#include "nbt/simulate.hpp"

namespace nbt::verify {

/// One point of a decay-rate regression: a trial length and the probability
/// observed (or solved) at that length.
struct RateSample {
    long long n;
    Probability p;
};

/// Least-squares fit of ln p against ln(2 pi n).  The slope estimates the
/// negated decay exponent, the intercept the log prefactor.
struct RateEstimate {
    int k;  // stage tag; 0 denotes the fixed-point sequence p_n
    double slope;
    double intercept;
    double r_squared;
    long long n_min;
    long long n_max;
    int sample_count;
};

/// Per-n certification record for the convexity and fixed-point lemmas.
struct LemmaReport {
    long long n;
    double convexity_grid_min;   // min over the p-grid of the log-convexity form
    double c_n;                  // P_n(1/2)
    double pn_of_cn;             // P_n(c_n)
    double abs_derivative_at_fp; // |P_n'(p_n)|
    double rn_grid_min;          // min over the p-grid of r_n(p)
    bool all_pass;
};

/// Ordinary least squares of ln p on ln(2 pi n).  Requires at least three
/// samples, positive probabilities, and distinct n values.
RateEstimate fit_rate(const std::vector<RateSample>& samples, int k_tag = 0);

/// (n, p_{k,n}) for each n in the grid, iterating k steps from p0.
std::vector<RateSample> stage_samples(int k, Probability p0, const std::vector<long long>& ns);

/// (1/n) d^2/dp^2 ln P_n(p) = 1/(p(1-p)) - n [psi'(1+np) + psi'(1+n(1-p))].
double log_convexity_second_derivative(long long n, Probability p);

/// Evaluates every hypothesis of the fixed-point lemma for P_n on a 999-point
/// grid: log-convexity positivity, |P_n'(p_n)| < 1, P_n(c_n) < 1/2 for n >= 3,
/// and positivity of r_n.  c_n is cross-checked against the exact central
/// binomial coefficient for even n.
LemmaReport certify_lemmas(long long n);

/// certify_lemmas over n = n_lo .. n_hi; OpenMP-parallel, results in n order.
std::vector<LemmaReport> certify_lemmas_range(long long n_lo, long long n_hi);

/// Serial reference for certify_lemmas_range; must produce identical results.
std::vector<LemmaReport> certify_lemmas_range_serial(long long n_lo, long long n_hi);

/// 2^n / sqrt(pi (n+1)/2) <= binom(n, n/2) <= 2^n / sqrt(pi n/2), checked in
/// log-space against the exact integer coefficient.  n must be even.
bool central_binomial_bounds_check(long long n);

/// n^{2i+1}/(2i)! psi^{(2i+1)}(n/2+1) < 2^{2i+1} for all i = 0..i_max,
/// compared in log-space.  i_max is capped at 5 by the polygamma order limit.
bool series_inequality_check(long long n, int i_max);

}  // namespace nbt::verify
