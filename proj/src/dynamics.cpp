#include "nbt/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "nbt/specfun.hpp"

namespace nbt::dynamics {

namespace {

constexpr int kMaxIterationSteps = 100000;
constexpr int kMaxExactK = 62;  // 2^k must stay within long long

long long checked_double(long long v) {
    if (v > std::numeric_limits<long long>::max() / 2) {
        throw std::overflow_error("Rational64: denominator out of range");
    }
    return 2 * v;
}

// (1 - r) / 2, exactly.
Rational64 halved_complement(const Rational64& r) {
    return Rational64::make(r.den - r.num, checked_double(r.den));
}

void require_interior(const Probability& p, const char* fn) {
    if (!(p.value > 0.0 && p.value < 1.0)) {
        throw std::domain_error(std::string(fn) + ": p must lie strictly inside (0,1)");
    }
}

}  // namespace

Rational64 Rational64::make(long long num, long long den) {
    if (den == 0) throw std::domain_error("Rational64: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return {num, den};
}

Probability pn_map(long long n, Probability p) {
    if (n < 1) throw std::domain_error("pn_map: n must be a positive integer");
    if (p.value == 0.0 || p.value == 1.0) return {1.0, 0.0};

    // ln P_n(p) = ln binom(n, np) + np ln p + n(1-p) ln(1-p).  Grouping each
    // ln-Gamma with its entropy term cancels the large contributions
    // analytically, leaving three O(ln n) terms:
    //   ln P_n(p) = E(n) - E(np) - E(n(1-p)),  E(z) = ln Gamma(z+1) - z ln z + z.
    const double nd = static_cast<double>(n);
    const double a = nd * p.value;
    const double b = nd - a;
    const double log_p = specfun::log_gamma_excess(nd) - specfun::log_gamma_excess(a) -
                         specfun::log_gamma_excess(b);
    return Probability::from_log(std::min(log_p, 0.0));
}

IterationTrace iterate(long long n, Probability p0, int k_max) {
    if (k_max < 0) throw std::domain_error("iterate: k_max must be non-negative");
    if (k_max > kMaxIterationSteps) {
        throw std::invalid_argument("iterate: k_max exceeds the per-call cap of 100000");
    }
    IterationTrace trace{n, p0, {}};
    trace.entries.reserve(static_cast<size_t>(k_max) + 1);
    trace.entries.push_back({0, p0});
    Probability p = p0;
    for (int k = 1; k <= k_max; ++k) {
        p = pn_map(n, p);
        trace.entries.push_back({k, p});
    }
    return trace;
}

RateTheory theory_rates(Probability p, int k) {
    require_interior(p, "theory_rates");
    if (k < 1) throw std::domain_error("theory_rates: k must be a positive integer");
    if (k > kMaxExactK) throw std::overflow_error("theory_rates: k too large for exact rationals");

    const double exponent = (k % 2 == 0 ? 1.0 : -1.0) * std::ldexp(1.0, -k);  // (-1/2)^k
    const double alpha = std::pow(p.value * (1.0 - p.value), exponent);

    const long long two_k = 1LL << k;
    const long long sign = (k % 2 == 0) ? 1 : -1;       // (-1)^k
    const long long jacobsthal = (two_k - sign) / 3;    // exact: 2^k ≡ (-1)^k (mod 3)
    return {k, alpha, Rational64::make(jacobsthal, two_k), jacobsthal};
}

bool rate_recursion_check(int k_max, Probability p) {
    if (k_max < 2) throw std::domain_error("rate_recursion_check: k_max must be at least 2");
    RateTheory prev = theory_rates(p, 1);
    for (int k = 2; k <= k_max; ++k) {
        const RateTheory cur = theory_rates(p, k);
        const double alpha_from_recursion = 1.0 / std::sqrt(prev.alpha_k);
        if (std::abs(cur.alpha_k - alpha_from_recursion) > 1e-12 * std::abs(cur.alpha_k)) {
            return false;
        }
        if (!(cur.beta_k == halved_complement(prev.beta_k))) return false;
        prev = cur;
    }
    return true;
}

}  // namespace nbt::dynamics
