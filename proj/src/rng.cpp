#include "pensiondc/rng.hpp"

#include <cmath>
#include <numbers>

namespace pensiondc {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

NormalStream::NormalStream(std::uint64_t master_seed, std::uint64_t path_index) {
    // Decorrelate the per-path seed from the master seed before expanding.
    std::uint64_t x = master_seed ^ (0xD1B54A32D192ED03ULL * (path_index + 1));
    for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t NormalStream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double NormalStream::next_uniform() {
    // 53-bit mantissa, shifted into (0,1].
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double NormalStream::next_normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

}  // namespace pensiondc
