#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rfgen {

using FeatureVector = std::vector<double>;
using Rng = std::mt19937_64;

// Argument outside the mathematical domain of an operation (digamma(0), k = 0, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input data that cannot be used: length mismatch, non-finite values, constant features.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at " + std::to_string(position) + ")"), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// splitmix64 finalizer; used for counter-based noise so that jitter never
// depends on the draw order of a shared generator.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) noexcept
{
    return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

// Uniform double in [0, 1) from 53 high bits.
constexpr double unit_double(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline std::uint64_t double_bits(double v) noexcept
{
    if (v == 0.0) {
        v = 0.0; // fold -0.0
    }
    return std::bit_cast<std::uint64_t>(v);
}

inline std::uint64_t hash_values(const std::vector<double>& v) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL ^ v.size();
    for (double d : v) {
        h = mix64(h, double_bits(d));
    }
    return h;
}

inline bool all_finite(const std::vector<double>& v) noexcept
{
    for (double d : v) {
        if (!std::isfinite(d)) {
            return false;
        }
    }
    return true;
}

// Uniform integer in [0, n) with a rejection step, independent of the
// standard library's distribution implementation.
inline std::size_t uniform_index(Rng& rng, std::size_t n)
{
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return static_cast<std::size_t>(r % bound);
}

inline double uniform_real(Rng& rng)
{
    return unit_double(rng());
}

} // namespace rfgen
