#include "nbt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <set>
#include <stdexcept>
#include <string>

#include "nbt/dynamics.hpp"
#include "nbt/exact.hpp"
#include "nbt/fixedpoint.hpp"
#include "nbt/specfun.hpp"
#include "nbt/threads.hpp"

namespace nbt::verify {

namespace {

constexpr int kGridPoints = 999;  // interior points i/1000, i = 1..999

double pn_value(long long n, double p) {
    return dynamics::pn_map(n, Probability::from_value(p)).value;
}

}  // namespace

RateEstimate fit_rate(const std::vector<RateSample>& samples, int k_tag) {
    if (samples.size() < 3) throw std::domain_error("fit_rate: need at least 3 samples");
    std::set<long long> distinct;
    for (const RateSample& s : samples) {
        if (!(s.p.value > 0.0)) throw std::domain_error("fit_rate: probabilities must be positive");
        if (!distinct.insert(s.n).second) {
            throw std::domain_error("fit_rate: n values must be distinct (degenerate design)");
        }
    }

    const double count = static_cast<double>(samples.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (const RateSample& s : samples) {
        mean_x += std::log(2.0 * M_PI * static_cast<double>(s.n));
        mean_y += s.p.log_value;
    }
    mean_x /= count;
    mean_y /= count;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const RateSample& s : samples) {
        const double dx = std::log(2.0 * M_PI * static_cast<double>(s.n)) - mean_x;
        const double dy = s.p.log_value - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;
    const double intercept = mean_y - slope * mean_x;
    const double ss_res = syy - slope * sxy;
    const double r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;

    return {k_tag,     slope,
            intercept, r_squared,
            *distinct.begin(), *distinct.rbegin(),
            static_cast<int>(samples.size())};
}

std::vector<RateSample> stage_samples(int k, Probability p0, const std::vector<long long>& ns) {
    if (k < 0) throw std::domain_error("stage_samples: k must be non-negative");
    std::vector<RateSample> samples;
    samples.reserve(ns.size());
    for (const long long n : ns) {
        Probability p = p0;
        for (int j = 0; j < k; ++j) p = dynamics::pn_map(n, p);
        samples.push_back({n, p});
    }
    return samples;
}

double log_convexity_second_derivative(long long n, Probability p) {
    if (n < 1) throw std::domain_error("log_convexity_second_derivative: n must be positive");
    if (!(p.value > 0.0 && p.value < 1.0)) {
        throw std::domain_error("log_convexity_second_derivative: p must lie inside (0,1)");
    }
    const double nd = static_cast<double>(n);
    const double np = nd * p.value;
    return 1.0 / (p.value * (1.0 - p.value)) -
           nd * (specfun::polygamma(1, 1.0 + np) + specfun::polygamma(1, 1.0 + (nd - np)));
}

LemmaReport certify_lemmas(long long n) {
    if (n < 1) throw std::domain_error("certify_lemmas: n must be a positive integer");

    double convexity_min = std::numeric_limits<double>::infinity();
    double rn_min = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= kGridPoints; ++i) {
        const Probability p = Probability::from_value(i / 1000.0);
        convexity_min = std::min(convexity_min, log_convexity_second_derivative(n, p));
        rn_min = std::min(rn_min, fixedpoint::rn_lower_bound(n, p));
    }

    const double c_n = pn_value(n, 0.5);
    if (n % 2 == 0) {
        const double c_exact =
            std::exp(exact::log_binomial(n, n / 2) - static_cast<double>(n) * M_LN2);
        if (std::abs(c_n - c_exact) > 1e-10 * c_exact) {
            throw std::runtime_error("certify_lemmas: P_n(1/2) disagrees with the exact "
                                     "central binomial route at n = " +
                                     std::to_string(n));
        }
    }
    const double pn_of_cn = pn_value(n, c_n);
    const double abs_derivative = std::abs(fixedpoint::solve(n, 1e-12).derivative_at_fp);

    const bool all_pass = convexity_min > 0.0 && abs_derivative < 1.0 &&
                          (n <= 2 || pn_of_cn < 0.5) && rn_min > 0.0;
    return {n, convexity_min, c_n, pn_of_cn, abs_derivative, rn_min, all_pass};
}

std::vector<LemmaReport> certify_lemmas_range(long long n_lo, long long n_hi) {
    if (n_lo < 1 || n_hi < n_lo) throw std::domain_error("certify_lemmas_range: bad range");
    std::vector<LemmaReport> reports(static_cast<size_t>(n_hi - n_lo + 1));
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(nbt::max_threads())
    for (long long n = n_lo; n <= n_hi; ++n) {
        try {
            reports[static_cast<size_t>(n - n_lo)] = certify_lemmas(n);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return reports;
}

std::vector<LemmaReport> certify_lemmas_range_serial(long long n_lo, long long n_hi) {
    if (n_lo < 1 || n_hi < n_lo) throw std::domain_error("certify_lemmas_range: bad range");
    std::vector<LemmaReport> reports;
    reports.reserve(static_cast<size_t>(n_hi - n_lo + 1));
    for (long long n = n_lo; n <= n_hi; ++n) reports.push_back(certify_lemmas(n));
    return reports;
}

bool central_binomial_bounds_check(long long n) {
    if (n < 2 || n % 2 != 0) {
        throw std::domain_error("central_binomial_bounds_check: n must be even and >= 2");
    }
    const double nd = static_cast<double>(n);
    const double log_binom = exact::log_binomial(n, n / 2);
    const double log_lower = nd * M_LN2 - 0.5 * std::log(M_PI * (nd + 1.0) / 2.0);
    const double log_upper = nd * M_LN2 - 0.5 * std::log(M_PI * nd / 2.0);
    return log_lower <= log_binom && log_binom <= log_upper;
}

bool series_inequality_check(long long n, int i_max) {
    if (n < 1) throw std::domain_error("series_inequality_check: n must be positive");
    if (i_max < 0 || i_max > 5) {
        throw std::domain_error("series_inequality_check: i_max must lie in [0, 5]");
    }
    const double nd = static_cast<double>(n);
    for (int i = 0; i <= i_max; ++i) {
        const int order = 2 * i + 1;
        const double lhs_log = order * std::log(nd) - specfun::log_gamma(2.0 * i + 1.0) +
                               std::log(specfun::polygamma(order, nd / 2.0 + 1.0));
        if (!(lhs_log < order * M_LN2)) return false;
    }
    return true;
}

}  // namespace nbt::verify
