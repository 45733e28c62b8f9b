#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pensiondc/market.hpp"
#include "pensiondc/rng.hpp"

namespace pensiondc {

struct SimulationGrid {
    double T = 20.0;
    int n_steps = 240;

    SimulationGrid() = default;
    SimulationGrid(double T_, int n_steps_);

    double dt() const { return T / n_steps; }
    double time(int k) const { return (k == n_steps) ? T : k * dt(); }
};

// One time-point of a simulated path. dW_* are the Brownian increments over
// the step that produced this state (zero at k = 0). Y is filled by the
// wealth layer; the market generator leaves it at 0.
struct PathState {
    double t = 0.0;
    double r = 0.0;
    double I = 0.0;
    double S = 0.0;
    double ell = 0.0;
    double Y = 0.0;
    double dW_r = 0.0;
    double dW_I = 0.0;
    double dW_S = 0.0;
};

// Exact Ornstein-Uhlenbeck transition over dt given a standard normal z.
double step_rate_exact(const MarketParams& p, double r, double dt, double z);

struct VolLoad {
    double vol;  // volatility coefficient
    double dW;   // Brownian increment over the step
};

// x * exp{(drift - 0.5 sum vol_i^2) dt + sum vol_i dW_i}. Requires x > 0.
double step_lognormal(double x, double drift, double dt, std::span<const VolLoad> loads);

// Simulates (r, I, S, ell) on the grid. The rate uses exact transitions; the
// lognormal factors use log-Euler with r frozen at the left endpoint. Per
// step the stream is consumed in the fixed order (z_r, z_I, z_S).
std::vector<PathState> generate_path(const MarketParams& p, const SimulationGrid& grid,
                                     const RngPolicy& rng, std::uint64_t path_index);

}  // namespace pensiondc
