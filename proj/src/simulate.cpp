#include "nbt/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nbt/rng.hpp"
#include "nbt/threads.hpp"

namespace nbt::verify {

namespace {

constexpr std::uint64_t kTrialsPerChunk = 4096;

struct SimulationPlan {
    long long n;
    long long m;  // n p, an integer by precondition
    double p;
    std::uint64_t trials;
    std::uint64_t seed;
    std::uint64_t chunks;
};

SimulationPlan make_plan(long long n, long long p_num, long long p_den, std::uint64_t trials,
                         std::uint64_t seed) {
    if (n < 1) throw std::domain_error("simulate_stage1: n must be a positive integer");
    if (p_den <= 0 || p_num < 0 || p_num > p_den) {
        throw std::domain_error("simulate_stage1: p must be a rational in [0, 1]");
    }
    if (trials < 1) throw std::domain_error("simulate_stage1: trials must be positive");
    if ((n * p_num) % p_den != 0) {
        throw std::domain_error("simulate_stage1: n p = " + std::to_string(n) + "*" +
                                std::to_string(p_num) + "/" + std::to_string(p_den) +
                                " is not an integer; the stage-1 check is only defined "
                                "on the integer slice");
    }
    const std::uint64_t chunks = (trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
    return {n,
            (n * p_num) / p_den,
            static_cast<double>(p_num) / static_cast<double>(p_den),
            trials,
            seed,
            chunks};
}

std::uint64_t run_chunk(const SimulationPlan& plan, std::uint64_t chunk) {
    rng::Splitmix64 stream = rng::Splitmix64::substream(plan.seed, chunk);
    const std::uint64_t begin = chunk * kTrialsPerChunk;
    const std::uint64_t end = std::min(begin + kTrialsPerChunk, plan.trials);
    std::uint64_t hits = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
        long long successes = 0;
        for (long long i = 0; i < plan.n; ++i) {
            successes += stream.next_uniform() < plan.p;
        }
        hits += successes == plan.m;
    }
    return hits;
}

EmpiricalEstimate finish(const SimulationPlan& plan, std::uint64_t hits) {
    const double freq = static_cast<double>(hits) / static_cast<double>(plan.trials);
    return {freq, plan.trials, std::sqrt(freq * (1.0 - freq) / static_cast<double>(plan.trials)),
            plan.seed};
}

}  // namespace

EmpiricalEstimate simulate_stage1(long long n, long long p_num, long long p_den,
                                  std::uint64_t trials, std::uint64_t seed) {
    const SimulationPlan plan = make_plan(n, p_num, p_den, trials, seed);
    std::uint64_t hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits) num_threads(nbt::max_threads())
    for (long long chunk = 0; chunk < static_cast<long long>(plan.chunks); ++chunk) {
        hits += run_chunk(plan, static_cast<std::uint64_t>(chunk));
    }
    return finish(plan, hits);
}

EmpiricalEstimate simulate_stage1_serial(long long n, long long p_num, long long p_den,
                                         std::uint64_t trials, std::uint64_t seed) {
    const SimulationPlan plan = make_plan(n, p_num, p_den, trials, seed);
    std::uint64_t hits = 0;
    for (std::uint64_t chunk = 0; chunk < plan.chunks; ++chunk) {
        hits += run_chunk(plan, chunk);
    }
    return finish(plan, hits);
}

}  // namespace nbt::verify
