#pragma once

#include <cstdint>

namespace pensiondc {

// xoshiro256++ with splitmix64 seeding. Every (master_seed, path_index) pair
// maps to its own stream, so the draws for a path do not depend on execution
// order or on how many workers are running.
class NormalStream {
public:
    NormalStream(std::uint64_t master_seed, std::uint64_t path_index);

    // Standard normal via Box-Muller on 53-bit uniforms.
    double next_normal();

    // Uniform on (0,1].
    double next_uniform();

private:
    std::uint64_t next_u64();

    std::uint64_t s_[4];
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Seeding policy for a simulation run: a master seed plus per-path substreams.
struct RngPolicy {
    std::uint64_t master_seed = 0;

    NormalStream stream_for(std::uint64_t path_index) const {
        return NormalStream(master_seed, path_index);
    }
};

}  // namespace pensiondc
