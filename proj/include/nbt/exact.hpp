#pragma once

#include <gmpxx.h>

namespace nbt::exact {

/// binom(n, m) p^m (1-p)^{n-m} with p = p_num/p_den, as an exact rational.
mpq_class pmf(long long n, long long m, long long p_num, long long p_den);

/// ln n! from the exact integer factorial.
double log_factorial(long long n);

/// ln binom(n, m) from the exact integer coefficient.
double log_binomial(long long n, long long m);

/// ln of an exact positive rational.
double log_rational(const mpq_class& q);

}  // namespace nbt::exact
