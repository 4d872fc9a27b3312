#include "nbt/gridspec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace nbt::cli {

namespace {

long long parse_count(const std::string& text, const char* what) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (errno != 0 || end != text.c_str() + text.size() || text.empty()) {
        throw std::invalid_argument(std::string("invalid ") + what + ": '" + text + "'");
    }
    const double rounded = std::round(value);
    if (!(rounded >= 1.0 && rounded <= 9.0e18) || std::abs(value - rounded) > 1e-6 * rounded) {
        throw std::invalid_argument(std::string(what) + " must be a positive integer: '" + text +
                                    "'");
    }
    return static_cast<long long>(rounded);
}

long long parse_plain_integer(const std::string& text, const char* what) {
    if (text.empty() || !std::all_of(text.begin(), text.end(),
                                     [](unsigned char c) { return std::isdigit(c); })) {
        throw std::invalid_argument(std::string("invalid ") + what + ": '" + text + "'");
    }
    return std::stoll(text);
}

}  // namespace

std::vector<long long> parse_n_grid(const std::string& spec) {
    const size_t range_pos = spec.find("..");
    if (range_pos != std::string::npos) {
        const long long lo = parse_count(spec.substr(0, range_pos), "grid start");
        const long long hi = parse_count(spec.substr(range_pos + 2), "grid end");
        if (hi < lo) throw std::invalid_argument("grid range end below start: '" + spec + "'");
        std::vector<long long> grid;
        grid.reserve(static_cast<size_t>(hi - lo + 1));
        for (long long n = lo; n <= hi; ++n) grid.push_back(n);
        return grid;
    }

    const size_t first_colon = spec.find(':');
    if (first_colon != std::string::npos) {
        const size_t second_colon = spec.find(':', first_colon + 1);
        if (second_colon == std::string::npos || spec.compare(second_colon + 1, 3, "geo") != 0) {
            throw std::invalid_argument("grid spec must be 'min:max:geoK': '" + spec + "'");
        }
        const long long lo = parse_count(spec.substr(0, first_colon), "grid min");
        const long long hi =
            parse_count(spec.substr(first_colon + 1, second_colon - first_colon - 1), "grid max");
        const long long per_decade =
            parse_plain_integer(spec.substr(second_colon + 4), "points per decade");
        if (hi < lo) throw std::invalid_argument("grid max below min: '" + spec + "'");
        if (per_decade < 1 || per_decade > 1000) {
            throw std::invalid_argument("points per decade must lie in [1, 1000]");
        }
        std::vector<long long> grid;
        const double log_lo = std::log10(static_cast<double>(lo));
        for (long long j = 0;; ++j) {
            const double x = std::pow(10.0, log_lo + static_cast<double>(j) / per_decade);
            if (x > static_cast<double>(hi) * (1.0 + 1e-12)) break;
            const long long value = std::llround(std::min(x, static_cast<double>(hi)));
            if (grid.empty() || grid.back() != value) grid.push_back(value);
        }
        return grid;
    }

    return {parse_count(spec, "n")};
}

ParsedProbability parse_probability(const std::string& text) {
    const size_t slash = text.find('/');
    if (slash != std::string::npos) {
        const long long num = parse_plain_integer(text.substr(0, slash), "probability numerator");
        const long long den =
            parse_plain_integer(text.substr(slash + 1), "probability denominator");
        if (den == 0 || num > den) {
            throw std::invalid_argument("probability must lie in [0, 1]: '" + text + "'");
        }
        const long long g = std::gcd(num, den);
        return {static_cast<double>(num) / static_cast<double>(den), num / g, den / g};
    }

    const size_t dot = text.find('.');
    const std::string integer_part = dot == std::string::npos ? text : text.substr(0, dot);
    const std::string fraction_part = dot == std::string::npos ? "" : text.substr(dot + 1);
    if (integer_part.empty() && fraction_part.empty()) {
        throw std::invalid_argument("invalid probability: '" + text + "'");
    }
    if (fraction_part.size() > 17) {
        throw std::invalid_argument("probability has too many decimal digits: '" + text + "'");
    }
    long long num = integer_part.empty() ? 0 : parse_plain_integer(integer_part, "probability");
    long long den = 1;
    for (const char c : fraction_part) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw std::invalid_argument("invalid probability: '" + text + "'");
        }
        num = 10 * num + (c - '0');
        den *= 10;
    }
    if (num > den) throw std::invalid_argument("probability must lie in [0, 1]: '" + text + "'");
    const long long g = std::gcd(num, den);
    return {static_cast<double>(num) / static_cast<double>(den), num / g, den / g};
}

}  // namespace nbt::cli
