// Acceptance suite: one line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "nbt/dynamics.hpp"
#include "nbt/exact.hpp"
#include "nbt/fixedpoint.hpp"
#include "nbt/gridspec.hpp"
#include "nbt/rng.hpp"
#include "nbt/simulate.hpp"
#include "nbt/specfun.hpp"
#include "nbt/verify.hpp"
#include "subprocess.hpp"

using namespace nbt;

namespace {

Probability prob(double v) { return Probability::from_value(v); }

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int index, const std::string& name, double time_budget_s,
               const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome{false, "exception"};
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = elapsed < time_budget_s;
    const bool pass = outcome.pass && in_budget;
    failures += !pass;
    std::printf("[%d] %s  %s: %s (%.2f s, budget %.0f s)\n", index, pass ? "PASS" : "FAIL",
                name.c_str(), outcome.detail.c_str(), elapsed, time_budget_s);
    std::fflush(stdout);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

// --- criterion bodies -------------------------------------------------------

Outcome oracle_equivalence() {
    rng::Splitmix64 seeds(20260811);
    double max_rel = 0.0;
    for (int i = 0; i < 200; ++i) {
        const long long n = 1 + static_cast<long long>(seeds.next() % 60);
        const long long m = static_cast<long long>(seeds.next() % (n + 1));
        const double ours =
            dynamics::pn_map(n, prob(static_cast<double>(m) / static_cast<double>(n))).value;
        const double reference = exact::pmf(n, m, m, n).get_d();
        max_rel = std::max(max_rel, std::abs(ours / reference - 1.0));
    }
    return {max_rel < 1e-11,
            "max |pn_map/exact_pmf - 1| = " + fmt(max_rel) + " over 200 pairs, n <= 60"};
}

Outcome theorem1_rates() {
    const auto ns = cli::parse_n_grid("1e4:1e7:geo20");
    const Probability p0 = prob(0.3);
    double worst_slope = 0.0, worst_intercept = 0.0;
    for (int k = 1; k <= 5; ++k) {
        const auto est = verify::fit_rate(verify::stage_samples(k, p0, ns), k);
        const auto theory = dynamics::theory_rates(p0, k);
        const double beta =
            static_cast<double>(theory.beta_k.num) / static_cast<double>(theory.beta_k.den);
        worst_slope = std::max(worst_slope, std::abs(est.slope + beta));
        if (k <= 2) {
            worst_intercept =
                std::max(worst_intercept, std::abs(est.intercept - std::log(theory.alpha_k)));
        }
    }
    return {worst_slope < 0.01 && worst_intercept < 0.05,
            "max slope dev " + fmt(worst_slope) + " (tol 0.01), max intercept dev " +
                fmt(worst_intercept) + " (tol 0.05), k = 1..5, p = 0.3"};
}

Outcome jacobsthal_identity() {
    long long j_prev2 = 1, j_prev1 = 1;
    for (int k = 1; k <= 30; ++k) {
        const long long j_k = k <= 2 ? 1 : j_prev1 + 2 * j_prev2;
        if (k > 2) {
            j_prev2 = j_prev1;
            j_prev1 = j_k;
        }
        const auto rt = dynamics::theory_rates(prob(0.42), k);
        // 2^k beta_k = J_k, exactly
        if (!(rt.beta_k == dynamics::Rational64::make(j_k, 1LL << k)) || rt.jacobsthal_k != j_k) {
            return {false, "mismatch at k = " + std::to_string(k)};
        }
    }
    return {true, "2^k beta_k = J_k exact for k = 1..30"};
}

Outcome theorem2_fixed_point() {
    double max_residual = 0.0, p2_dev = 0.0, max_basin = 0.0;
    for (const long long n : {1LL, 2LL, 3LL, 10LL, 100LL, 1000LL, 10000LL, 100000LL}) {
        const auto r = fixedpoint::solve(n, 1e-12);
        max_residual = std::max(max_residual, r.residual);
        if (n == 2) p2_dev = std::abs(r.p_n.value - 0.5);
        for (const double start : {0.01, 0.15, 0.5, 0.85, 0.99}) {
            const auto it = fixedpoint::iterate_to_fixed_point(n, prob(start), 1e-12, 100000);
            max_basin = std::max(max_basin, std::abs(it.p_n.value - r.p_n.value));
        }
    }

    const auto ns = cli::parse_n_grid("1e4:1e7:geo20");
    const auto solved = fixedpoint::solve_grid(ns, 1e-12);
    std::vector<verify::RateSample> samples;
    for (const auto& r : solved) samples.push_back({r.n, r.p_n});
    const double slope_dev = std::abs(verify::fit_rate(samples, 0).slope + 1.0 / 3.0);

    const bool pass =
        max_residual < 1e-12 && p2_dev < 1e-12 && max_basin < 1e-9 && slope_dev < 0.01;
    return {pass, "max residual " + fmt(max_residual) + ", |p_2 - 1/2| = " + fmt(p2_dev) +
                      ", basin dev " + fmt(max_basin) + ", slope dev " + fmt(slope_dev)};
}

Outcome lemma_certification() {
    const auto reports = verify::certify_lemmas_range(1, 50);
    int passed = 0;
    for (const auto& report : reports) passed += report.all_pass;
    const double c1_dev = std::abs(reports[0].c_n - 2.0 / M_PI);
    const double c2_dev = std::abs(reports[1].c_n - 0.5);
    const bool pass = passed == 50 && c1_dev < 1e-12 && c2_dev < 1e-12;
    return {pass, std::to_string(passed) + "/50 all_pass, |c_1 - 2/pi| = " + fmt(c1_dev) +
                      ", |c_2 - 1/2| = " + fmt(c2_dev)};
}

Outcome bound_suites() {
    for (long long n = 1; n <= 170; ++n) {
        const auto bounds = specfun::robbins_bounds(n);
        const double exact_value = exact::log_factorial(n);
        if (!(bounds.lower <= exact_value && exact_value <= bounds.upper)) {
            return {false, "Robbins sandwich fails at n = " + std::to_string(n)};
        }
    }
    for (long long n = 2; n <= 1000; n += 2) {
        if (!verify::central_binomial_bounds_check(n)) {
            return {false, "central binomial sandwich fails at n = " + std::to_string(n)};
        }
    }
    for (int i = 0; i <= 5; ++i) {
        for (long long n = 1; n <= 100; ++n) {
            if (!(specfun::polygamma(2 * i + 1, n / 2.0 + 1.0) <
                  specfun::chen_polygamma_upper(i, n))) {
                return {false, "Chen bound fails at i = " + std::to_string(i) +
                                   ", n = " + std::to_string(n)};
            }
        }
    }
    for (long long n = 1; n <= 100; ++n) {
        if (!verify::series_inequality_check(n, 5)) {
            return {false, "series inequality fails at n = " + std::to_string(n)};
        }
    }
    return {true, "Robbins n <= 170, central binomial n <= 1000, Chen and series i <= 5, n <= 100"};
}

Outcome monte_carlo() {
    const auto est = verify::simulate_stage1(10, 3, 10, 1000000, 42);
    const double reference = exact::pmf(10, 3, 3, 10).get_d();
    const double dev = std::abs(est.frequency - reference);
    if (!(dev < 4.0 * est.std_error)) {
        return {false, "frequency off by " + fmt(dev) + " > 4 se = " + fmt(4.0 * est.std_error)};
    }
    const auto serial = verify::simulate_stage1_serial(10, 3, 10, 1000000, 42);
    if (serial.frequency != est.frequency) {
        return {false, "serial and parallel kernels disagree"};
    }

    const std::string args = "simulate --n 10 --p 3/10 --trials 1000000 --seed 42";
    const auto base = subprocess::run_cli(args);
    const auto rerun = subprocess::run_cli(args);
    const auto one_thread = subprocess::run_cli(args, "NBT_THREADS=1 ");
    const auto four_threads = subprocess::run_cli(args, "NBT_THREADS=4 ");
    const bool identical = base.exit_code == 0 && base.output == rerun.output &&
                           base.output == one_thread.output && base.output == four_threads.output;
    if (!identical) return {false, "CLI output not byte-identical across reruns/thread counts"};
    return {true, "|freq - pmf| = " + fmt(dev) + " < 4 se = " + fmt(4.0 * est.std_error) +
                      ", byte-identical for NBT_THREADS in {default,1,4}"};
}

Outcome figure_cobweb() {
    const auto result = subprocess::run_cli("figure --n 10 --p0 0.15 --steps 20");
    if (result.exit_code != 0) return {false, "figure exited with " + std::to_string(result.exit_code)};
    std::vector<double> iterates;
    int cobweb_index = 0;
    for (const auto& line : subprocess::lines(result.output)) {
        const auto fields = subprocess::split_csv(line);
        if (fields.size() != 3 || fields[0] != "cobweb") continue;
        // even-indexed vertices touch the diagonal and carry p_0, p_1, ...
        if (cobweb_index % 2 == 0) {
            if (fields[1] != fields[2]) return {false, "cobweb vertex parity broken"};
            iterates.push_back(std::strtod(fields[1].c_str(), nullptr));
        }
        ++cobweb_index;
    }
    if (iterates.size() != 21) {
        return {false, "expected 21 iterates in the cobweb, got " +
                           std::to_string(iterates.size())};
    }
    const double p10 = fixedpoint::solve(10, 1e-12).p_n.value;
    std::vector<double> distances;
    for (const double p : iterates) distances.push_back(std::abs(p - p10));

    size_t tail_start = distances.size() - 1;
    while (tail_start > 0 && distances[tail_start - 1] > distances[tail_start]) --tail_start;
    const bool eventually_decreasing = tail_start <= 10;
    const bool small_final = distances.back() < 1e-6;
    return {eventually_decreasing && small_final,
            "distances strictly decreasing from iterate " + std::to_string(tail_start) +
                ", final |p_20 - p_10| = " + fmt(distances.back())};
}

}  // namespace

int main() {
    criterion(1, "oracle equivalence", 5.0, oracle_equivalence);
    criterion(2, "theorem 1 decay rates", 60.0, theorem1_rates);
    criterion(3, "Jacobsthal identity", 1.0, jacobsthal_identity);
    criterion(4, "theorem 2 fixed point", 120.0, theorem2_fixed_point);
    criterion(5, "lemma certification", 60.0, lemma_certification);
    criterion(6, "bound suites", 30.0, bound_suites);
    criterion(7, "Monte Carlo reproducibility", 30.0, monte_carlo);
    criterion(8, "figure cobweb convergence", 30.0, figure_cobweb);

    if (failures == 0) {
        std::printf("acceptance: all 8 criteria pass\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", failures);
    return 1;
}
