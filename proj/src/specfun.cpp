#include "nbt/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nbt::specfun {

namespace {

// B_2 .. B_20
constexpr double kBernoulli[10] = {
    1.0 / 6.0,     -1.0 / 30.0,     1.0 / 42.0,      -1.0 / 30.0,     5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0,     -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0};

constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // ln(2 pi)/2

void require_positive(double x, const char* fn) {
    if (!(x > 0.0)) {
        throw std::domain_error(std::string(fn) + ": argument must be positive, got " +
                                std::to_string(x));
    }
}

// Stirling tail sum_k B_2k / (2k(2k-1) x^{2k-1}), valid for x >= 10.
double stirling_tail(double x) {
    const double x2 = x * x;
    double power = x;  // x^{2k-1}
    double sum = 0.0;
    for (int k = 1; k <= 10; ++k) {
        sum += kBernoulli[k - 1] / (2 * k * (2 * k - 1) * power);
        power *= x2;
    }
    return sum;
}

}  // namespace

double log_gamma(double x) {
    require_positive(x, "log_gamma");
    double shift = 0.0;
    while (x < 10.0) {
        shift -= std::log(x);
        x += 1.0;
    }
    return (x - 0.5) * std::log(x) - x + kLogSqrt2Pi + stirling_tail(x) + shift;
}

double digamma(double x) {
    require_positive(x, "digamma");
    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double x2 = x * x;
    double power = x2;  // x^{2k}
    double sum = 0.0;
    for (int k = 1; k <= 10; ++k) {
        sum += kBernoulli[k - 1] / (2 * k * power);
        power *= x2;
    }
    return std::log(x) - 0.5 / x - sum + shift;
}

double polygamma(int order, double x) {
    if (order < 1 || order > 15) {
        throw std::domain_error("polygamma: order must be in [1, 15], got " +
                                std::to_string(order));
    }
    require_positive(x, "polygamma");

    double fact = 1.0;  // order!
    for (int j = 2; j <= order; ++j) fact *= j;

    // Lift until the asymptotic series converges fast; threshold grows with
    // the order to keep the first omitted term negligible.
    const double threshold = 10.0 + order;
    double lifted = 0.0;  // order! * sum over lifted points of (x+j)^{-order-1}
    while (x < threshold) {
        lifted += fact * std::pow(x, -(order + 1));
        x += 1.0;
    }

    double series = (fact / order) * std::pow(x, -order) + 0.5 * fact * std::pow(x, -(order + 1));
    const double x2 = x * x;
    double ratio = fact * (order + 1) / 2.0;  // (2k+order-1)!/(2k)! at k=1
    double power = std::pow(x, -(order + 2));
    for (int k = 1; k <= 10; ++k) {
        series += kBernoulli[k - 1] * ratio * power;
        ratio *= static_cast<double>(2 * k + order + 1) * (2 * k + order) /
                 ((2 * k + 2) * (2 * k + 1));
        power /= x2;
    }

    const double sign = (order % 2 == 1) ? 1.0 : -1.0;  // (-1)^{order-1}
    return sign * (lifted + series);
}

double log_gamma_excess(double z) {
    if (z < 0.0) throw std::domain_error("log_gamma_excess: argument must be non-negative");
    if (z == 0.0) return 0.0;
    if (z >= 10.0) return 0.5 * std::log(2.0 * M_PI * z) + stirling_tail(z);
    return log_gamma(z + 1.0) - z * std::log(z) + z;
}

double log_binomial(long long n, double alpha) {
    if (n < 1) throw std::domain_error("log_binomial: n must be a positive integer");
    if (alpha < 0.0 || alpha > static_cast<double>(n)) {
        throw std::domain_error("log_binomial: alpha must lie in [0, n], got " +
                                std::to_string(alpha));
    }
    const double nd = static_cast<double>(n);
    if (alpha == 0.0 || alpha == nd) return 0.0;
    return log_gamma(nd + 1.0) - log_gamma(alpha + 1.0) - log_gamma(nd - alpha + 1.0);
}

BoundPair robbins_bounds(long long n) {
    if (n < 1) throw std::domain_error("robbins_bounds: n must be a positive integer");
    const double nd = static_cast<double>(n);
    const double core = (nd + 0.5) * std::log(nd) - nd;
    return {kLogSqrt2Pi + core, 1.0 + core};
}

double chen_polygamma_upper(int i, long long n) {
    if (i < 0) throw std::domain_error("chen_polygamma_upper: i must be non-negative");
    if (n < 1) throw std::domain_error("chen_polygamma_upper: n must be a positive integer");
    const double nd = static_cast<double>(n);
    const double bracket = 1.0 + (2.0 * i + 1.0) / (nd + 2.0) +
                           (2.0 * i + 1.0) * (2.0 * i + 2.0) / (3.0 * (nd + 2.0) * (nd + 2.0));
    const double log_bound =
        log_gamma(2.0 * i + 1.0) - (2.0 * i + 1.0) * std::log(nd / 2.0 + 1.0) + std::log(bracket);
    return std::exp(log_bound);
}

}  // namespace nbt::specfun
