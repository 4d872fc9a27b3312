#pragma once

#include <cstdint>

namespace nbt::verify {

/// Monte-Carlo frequency of hitting exactly the expected success count.
struct EmpiricalEstimate {
    double frequency;
    std::uint64_t trials;
    double std_error;  // sqrt(frequency (1-frequency) / trials)
    std::uint64_t seed;
};

/// Runs `trials` independent length-n Bernoulli(p_num/p_den) experiments and
/// counts how often exactly n p successes occur.  Requires n p_num divisible
/// by p_den.  Bit-reproducible for a fixed seed regardless of thread count:
/// trials are consumed in fixed-size chunks, each on its own RNG substream.
EmpiricalEstimate simulate_stage1(long long n, long long p_num, long long p_den,
                                  std::uint64_t trials, std::uint64_t seed);

/// Serial reference for simulate_stage1; must produce identical results.
EmpiricalEstimate simulate_stage1_serial(long long n, long long p_num, long long p_den,
                                         std::uint64_t trials, std::uint64_t seed);

}  // namespace nbt::verify
