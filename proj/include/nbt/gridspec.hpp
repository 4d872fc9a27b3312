#pragma once

#include <string>
#include <vector>

namespace nbt::cli {

/// A probability parsed from the command line.  Decimals are converted to
/// exact rationals (0.15 -> 3/20) so integrality of n p can be checked.
struct ParsedProbability {
    double value;
    long long num;
    long long den;
};

/// Grid specs: a single integer ("42"), an inclusive integer range ("3..50"),
/// or a geometric grid "min:max:geoK" with K points per decade.
std::vector<long long> parse_n_grid(const std::string& spec);

/// Accepts "a/b" or a plain decimal; throws std::invalid_argument otherwise.
ParsedProbability parse_probability(const std::string& text);

}  // namespace nbt::cli
