#pragma once

#include <cstdint>

namespace nbt::rng {

/// splitmix64 finalizer; a bijective 64-bit avalanche mix.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// splitmix64 stream.  Substream j of a seed is an independent stream whose
/// state is seed ^ mix64(j); chunked consumers draw from one substream per
/// fixed-size chunk, making the aggregate independent of scheduling.
class Splitmix64 {
  public:
    explicit Splitmix64(std::uint64_t seed) : state_(seed) {}

    static Splitmix64 substream(std::uint64_t seed, std::uint64_t j) {
        return Splitmix64(seed ^ mix64(j));
    }

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double next_uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

}  // namespace nbt::rng
