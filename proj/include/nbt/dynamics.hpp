#pragma once

#include <cstdint>
#include <vector>

#include "nbt/probability.hpp"

namespace nbt::dynamics {

/// Exact rational with 64-bit numerator/denominator, kept normalized
/// (den > 0, gcd(num, den) = 1). Throws std::overflow_error when an
/// operation would leave the representable range.
struct Rational64 {
    long long num = 0;
    long long den = 1;

    static Rational64 make(long long num, long long den);
    friend bool operator==(const Rational64&, const Rational64&) = default;
};

/// One step of the recursion: an entry (k, p_{k}).
struct TraceEntry {
    int k;
    Probability p;
};

struct IterationTrace {
    long long n;
    Probability p0;
    std::vector<TraceEntry> entries;
};

/// Closed-form decay rates for stage k: p_{k,n} ~ alpha_k (2 pi n)^{-beta_k}.
struct RateTheory {
    int k;
    double alpha_k;
    Rational64 beta_k;
    long long jacobsthal_k;
};

/// P_n(p) = binom(n, np) p^{np} (1-p)^{n(1-p)}, evaluated in log-space.
/// The endpoints p in {0,1} map to exactly 1.
Probability pn_map(long long n, Probability p);

/// Iterates P_n from p0, producing the k_max+1 entries p_0 .. p_{k_max}.
/// k_max is capped at 100000 steps per call.
IterationTrace iterate(long long n, Probability p0, int k_max);

/// alpha_k = [p(1-p)]^{(-1/2)^k}, beta_k = (1 - (-1/2)^k)/3 (exact),
/// and the Jacobsthal number J_k = 2^k beta_k.
RateTheory theory_rates(Probability p, int k);

/// Checks that the closed forms satisfy the recursions
/// alpha_k = alpha_{k-1}^{-1/2} (relative 1e-12) and
/// beta_k = (1 - beta_{k-1})/2 (exact), for 2 <= k <= k_max.
bool rate_recursion_check(int k_max, Probability p);

}  // namespace nbt::dynamics
