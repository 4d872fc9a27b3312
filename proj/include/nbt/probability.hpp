#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nbt {

/// A probability carrying both its value in [0,1] and its natural log, so
/// quantities formed from it can stay in log-space at large n.
struct Probability {
    double value = 0.0;
    double log_value = -std::numeric_limits<double>::infinity();

    static Probability from_value(double v) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::domain_error("Probability: value outside [0,1]");
        }
        return {v, v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity()};
    }

    /// lv <= 0 required; values within round-off of 0 are clamped to exactly 1.
    static Probability from_log(double lv) {
        if (lv > 1e-12) throw std::domain_error("Probability: log value above 0");
        if (lv > 0.0) lv = 0.0;
        return {std::min(std::exp(lv), 1.0), lv};
    }
};

}  // namespace nbt
