#include "nbt/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace nbt::exact {

namespace {

double log_mpz(const mpz_class& z) {
    if (z <= 0) throw std::domain_error("exact::log_mpz: argument must be positive");
    long exp2 = 0;
    const double mantissa = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(mantissa) + static_cast<double>(exp2) * M_LN2;
}

}  // namespace

mpq_class pmf(long long n, long long m, long long p_num, long long p_den) {
    if (n < 1) throw std::domain_error("exact::pmf: n must be a positive integer");
    if (m < 0 || m > n) throw std::domain_error("exact::pmf: m must lie in [0, n]");
    if (p_den <= 0 || p_num < 0 || p_num > p_den) {
        throw std::domain_error("exact::pmf: p must be a rational in [0, 1]");
    }
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(m));

    mpz_class num_pow, cnum_pow, den_pow;
    mpz_ui_pow_ui(num_pow.get_mpz_t(), static_cast<unsigned long>(p_num),
                  static_cast<unsigned long>(m));
    mpz_ui_pow_ui(cnum_pow.get_mpz_t(), static_cast<unsigned long>(p_den - p_num),
                  static_cast<unsigned long>(n - m));
    mpz_ui_pow_ui(den_pow.get_mpz_t(), static_cast<unsigned long>(p_den),
                  static_cast<unsigned long>(n));

    mpq_class result(binom * num_pow * cnum_pow, den_pow);
    result.canonicalize();
    return result;
}

double log_factorial(long long n) {
    if (n < 0) throw std::domain_error("exact::log_factorial: n must be non-negative");
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(n));
    return log_mpz(fact);
}

double log_binomial(long long n, long long m) {
    if (n < 0 || m < 0 || m > n) throw std::domain_error("exact::log_binomial: need 0 <= m <= n");
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(m));
    return log_mpz(binom);
}

double log_rational(const mpq_class& q) {
    if (q <= 0) throw std::domain_error("exact::log_rational: argument must be positive");
    return log_mpz(mpq_class(q).get_num()) - log_mpz(mpq_class(q).get_den());
}

}  // namespace nbt::exact
