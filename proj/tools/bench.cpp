// Compares the OpenMP kernels against their serial reference
// implementations and confirms the results agree bit for bit.

#include <chrono>
#include <cstdio>
#include <vector>

#include "nbt/fixedpoint.hpp"
#include "nbt/gridspec.hpp"
#include "nbt/simulate.hpp"
#include "nbt/threads.hpp"
#include "nbt/verify.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <typename F>
double timed(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return seconds_since(start);
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-24s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   %s\n", name, serial,
                parallel, serial / parallel, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("thread cap: %d\n", nbt::max_threads());
    int mismatches = 0;

    {
        nbt::verify::EmpiricalEstimate serial_est{}, parallel_est{};
        const double t_serial =
            timed([&] { serial_est = nbt::verify::simulate_stage1_serial(20, 1, 2, 4000000, 42); });
        const double t_parallel =
            timed([&] { parallel_est = nbt::verify::simulate_stage1(20, 1, 2, 4000000, 42); });
        const bool identical = serial_est.frequency == parallel_est.frequency;
        mismatches += !identical;
        report("simulate_stage1", t_serial, t_parallel, identical);
    }

    {
        std::vector<nbt::verify::LemmaReport> serial_reports, parallel_reports;
        const double t_serial =
            timed([&] { serial_reports = nbt::verify::certify_lemmas_range_serial(1, 60); });
        const double t_parallel =
            timed([&] { parallel_reports = nbt::verify::certify_lemmas_range(1, 60); });
        bool identical = serial_reports.size() == parallel_reports.size();
        for (size_t i = 0; identical && i < serial_reports.size(); ++i) {
            identical = serial_reports[i].convexity_grid_min ==
                            parallel_reports[i].convexity_grid_min &&
                        serial_reports[i].c_n == parallel_reports[i].c_n &&
                        serial_reports[i].abs_derivative_at_fp ==
                            parallel_reports[i].abs_derivative_at_fp &&
                        serial_reports[i].rn_grid_min == parallel_reports[i].rn_grid_min;
        }
        mismatches += !identical;
        report("certify_lemmas_range", t_serial, t_parallel, identical);
    }

    {
        const auto ns = nbt::cli::parse_n_grid("1e3:1e7:geo40");
        std::vector<nbt::fixedpoint::FixedPointResult> serial_results, parallel_results;
        const double t_serial =
            timed([&] { serial_results = nbt::fixedpoint::solve_grid_serial(ns, 1e-12); });
        const double t_parallel =
            timed([&] { parallel_results = nbt::fixedpoint::solve_grid(ns, 1e-12); });
        bool identical = serial_results.size() == parallel_results.size();
        for (size_t i = 0; identical && i < serial_results.size(); ++i) {
            identical = serial_results[i].p_n.value == parallel_results[i].p_n.value &&
                        serial_results[i].residual == parallel_results[i].residual;
        }
        mismatches += !identical;
        report("solve_grid", t_serial, t_parallel, identical);
    }

    return mismatches == 0 ? 0 : 1;
}
