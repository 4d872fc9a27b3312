#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nbt/dynamics.hpp"
#include "nbt/gridspec.hpp"
#include "nbt/verify.hpp"
#include "oracle_helpers.hpp"

using namespace nbt;

namespace {
Probability prob(double v) { return Probability::from_value(v); }
}

TEST_CASE("fit_rate recovers noiseless power laws exactly") {
    std::vector<verify::RateSample> samples;
    for (const long long n : {10LL, 100LL, 1000LL, 10000LL, 100000LL}) {
        samples.push_back({n, prob(3.0 * std::pow(2.0 * M_PI * n, -0.5))});
    }
    const auto est = verify::fit_rate(samples, 1);
    CHECK(std::abs(est.slope + 0.5) < 1e-10);
    CHECK(std::abs(est.intercept - std::log(3.0)) < 1e-10);
    CHECK(std::abs(est.r_squared - 1.0) < 1e-10);
    CHECK(est.k == 1);
    CHECK(est.n_min == 10);
    CHECK(est.n_max == 100000);
    CHECK(est.sample_count == 5);

    std::vector<verify::RateSample> third;
    for (const long long n : {100LL, 317LL, 1000LL, 3170LL}) {
        third.push_back({n, prob(1.7 * std::pow(2.0 * M_PI * n, -1.0 / 3.0))});
    }
    const auto est3 = verify::fit_rate(third);
    CHECK(std::abs(est3.slope + 1.0 / 3.0) < 1e-10);
    CHECK(std::abs(est3.intercept - std::log(1.7)) < 1e-10);
}

TEST_CASE("fit_rate rejects degenerate designs") {
    std::vector<verify::RateSample> two = {{10, prob(0.5)}, {20, prob(0.4)}};
    CHECK_THROWS_AS(verify::fit_rate(two), std::domain_error);

    std::vector<verify::RateSample> dup = {{10, prob(0.5)}, {10, prob(0.4)}, {20, prob(0.3)}};
    CHECK_THROWS_AS(verify::fit_rate(dup), std::domain_error);

    std::vector<verify::RateSample> zero = {{10, prob(0.5)}, {20, prob(0.0)}, {30, prob(0.3)}};
    CHECK_THROWS_AS(verify::fit_rate(zero), std::domain_error);
}

TEST_CASE("stage-1 samples reproduce the square-root decay") {
    const auto ns = cli::parse_n_grid("1e4:1e7:geo20");
    const auto samples = verify::stage_samples(1, prob(0.3), ns);
    REQUIRE(samples.size() == 61);
    const auto est = verify::fit_rate(samples, 1);
    CHECK(std::abs(est.slope + 0.5) < 0.01);
    // intercept estimates ln alpha_1 = -ln(p(1-p))/2 at p = 0.3
    CHECK(std::abs(est.intercept - (-0.5 * std::log(0.3 * 0.7))) < 0.05);
    CHECK(est.r_squared > 0.9999);
}

TEST_CASE("log-convexity form: symmetry, positivity, finite differences") {
    const double at = verify::log_convexity_second_derivative(10, prob(0.2));
    const double mirrored = verify::log_convexity_second_derivative(10, prob(0.8));
    CHECK(std::abs(at - mirrored) < 1e-12 * std::abs(at));

    for (const long long n : {1LL, 2LL, 10LL, 50LL}) {
        for (int i = 1; i <= 999; ++i) {
            CHECK(verify::log_convexity_second_derivative(n, prob(i / 1000.0)) > 0.0);
        }
    }

    // d^2/dp^2 ln P_n = n * (returned form)
    const double fd = oracle::second_derivative(
        [](double p) { return dynamics::pn_map(10, prob(p)).log_value; }, 0.3, 1e-4);
    const double formula = 10.0 * verify::log_convexity_second_derivative(10, prob(0.3));
    CHECK(std::abs(fd - formula) < 1e-4 * std::abs(formula));

    CHECK_THROWS_AS(verify::log_convexity_second_derivative(10, prob(0.0)), std::domain_error);
}

TEST_CASE("lemma certification at the quoted points") {
    const auto one = verify::certify_lemmas(1);
    CHECK(std::abs(one.c_n - 0.63661977236758134) < 1e-12);  // c_1 = 2/pi
    CHECK(one.c_n > 0.5);                                    // the c >= 1/2 branch applies
    CHECK(one.all_pass);

    const auto two = verify::certify_lemmas(2);
    CHECK(std::abs(two.c_n - 0.5) < 1e-12);
    CHECK(two.all_pass);

    const auto three = verify::certify_lemmas(3);
    CHECK(std::abs(three.c_n - 0.42441318157838756) < 1e-10);
    CHECK(std::abs(three.pn_of_cn - 0.42831356142171987) < 1e-10);
    CHECK(three.pn_of_cn < 0.5);
    CHECK(three.all_pass);

    CHECK_THROWS_AS(verify::certify_lemmas(0), std::domain_error);
}

TEST_CASE("lemma certification passes for n = 1..50") {
    const auto reports = verify::certify_lemmas_range(1, 50);
    REQUIRE(reports.size() == 50);
    for (const auto& report : reports) {
        CAPTURE(report.n);
        CHECK(report.all_pass);
        CHECK(report.convexity_grid_min > 0.0);
        CHECK(report.abs_derivative_at_fp < 1.0);
        CHECK(report.rn_grid_min > 0.0);
        if (report.n >= 3) CHECK(report.pn_of_cn < 0.5);
        // all_pass is exactly the conjunction of its four clauses
        const bool expected = report.convexity_grid_min > 0.0 &&
                              report.abs_derivative_at_fp < 1.0 &&
                              (report.n <= 2 || report.pn_of_cn < 0.5) &&
                              report.rn_grid_min > 0.0;
        CHECK(report.all_pass == expected);
    }
}

TEST_CASE("lemma range certification matches the serial reference") {
    const auto parallel = verify::certify_lemmas_range(1, 24);
    const auto serial = verify::certify_lemmas_range_serial(1, 24);
    REQUIRE(parallel.size() == serial.size());
    for (size_t i = 0; i < parallel.size(); ++i) {
        CHECK(parallel[i].n == serial[i].n);
        CHECK(parallel[i].convexity_grid_min == serial[i].convexity_grid_min);
        CHECK(parallel[i].c_n == serial[i].c_n);
        CHECK(parallel[i].pn_of_cn == serial[i].pn_of_cn);
        CHECK(parallel[i].abs_derivative_at_fp == serial[i].abs_derivative_at_fp);
        CHECK(parallel[i].rn_grid_min == serial[i].rn_grid_min);
    }
}

TEST_CASE("P_n(c_n) stays below 1/2 through n = 1000") {
    for (long long n = 3; n <= 1000; ++n) {
        const double c_n = dynamics::pn_map(n, prob(0.5)).value;
        CHECK(dynamics::pn_map(n, prob(c_n)).value < 0.5);
    }
}

TEST_CASE("central binomial sandwich") {
    CHECK(verify::central_binomial_bounds_check(2));
    CHECK(verify::central_binomial_bounds_check(10));
    CHECK(verify::central_binomial_bounds_check(100));
    for (long long n = 2; n <= 1000; n += 2) {
        CHECK(verify::central_binomial_bounds_check(n));
    }
    CHECK_THROWS_AS(verify::central_binomial_bounds_check(7), std::domain_error);
    CHECK_THROWS_AS(verify::central_binomial_bounds_check(0), std::domain_error);
}

TEST_CASE("series inequality from the convexity proof") {
    CHECK(verify::series_inequality_check(1, 0));  // psi'(3/2) = pi^2/2 - 4 < 2
    CHECK(verify::series_inequality_check(100, 5));
    for (long long n = 1; n <= 100; ++n) {
        CHECK(verify::series_inequality_check(n, 5));
    }
    CHECK_THROWS_AS(verify::series_inequality_check(10, 6), std::domain_error);
    CHECK_THROWS_AS(verify::series_inequality_check(0, 3), std::domain_error);
}
