#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pensiondc/market.hpp"
#include "pensiondc/mortality.hpp"
#include "pensiondc/sde.hpp"
#include "pensiondc/strategy.hpp"

namespace pensiondc {

struct UtilitySpec {
    double alpha;
    // U(y) = y^alpha / alpha on y > 0.
    double operator()(double y) const;
};

struct UtilityEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_paths = 0;
    std::int64_t n_failed = 0;  // paths that hit Y <= 0 before T
};

// Strategy callback: calendar time plus the (delay-adjusted) observed state.
using StrategyFn = std::function<StrategyVector(double t, const PathState& observed)>;

// One Euler step of the displayed relative-wealth equation. Throws
// std::domain_error when Y <= 0 on entry.
double step_relative_wealth(const MarketParams& p, const PlanConfig& cfg,
                            const MortalityLaw& law, double t, double r, double Y,
                            const StrategyVector& strat, double dt, double dW_r,
                            double dW_I, double dW_S);

struct SimOptions {
    SimulationGrid grid;
    std::int64_t n_paths = 100000;
    std::uint64_t seed = 42;
    double utility_floor_y = 1e-6;  // flagged paths contribute U(this level)
    int threads = 0;                // 0: library default / OpenMP runtime
    int fan_max_checkpoints = 65;   // fan-chart sampling resolution
};

// Terminal-utility estimate over independent paths. Paths that lose
// admissibility are flagged and contribute U(utility_floor_y). Deterministic
// for a fixed seed, for any thread count: every path owns an RNG stream
// derived from (seed, path_index) and the estimator reduces per-path values
// in path order with pairwise summation.
UtilityEstimate simulate_terminal(const MarketParams& p, const PlanConfig& cfg,
                                  const MortalityLaw& law, const StrategyFn& strategy,
                                  const SimOptions& opt);

// Reference implementation: identical contract, plain serial loop. Kept for
// testing the OpenMP kernel against and for the benchmark target.
UtilityEstimate simulate_terminal_serial(const MarketParams& p, const PlanConfig& cfg,
                                         const MortalityLaw& law, const StrategyFn& strategy,
                                         const SimOptions& opt);

struct FanChart {
    std::vector<double> t;
    std::vector<double> mean;
    std::vector<double> q05;
    std::vector<double> q95;
};

// Same simulation, also recording the cross-section of Y at up to
// fan_max_checkpoints evenly spaced grid times (always including 0 and T).
UtilityEstimate simulate_fan(const MarketParams& p, const PlanConfig& cfg,
                             const MortalityLaw& law, const StrategyFn& strategy,
                             const SimOptions& opt, FanChart& fan);

struct RivalResult {
    std::string label;
    double mean_diff = 0.0;   // candidate minus rival
    double std_error = 0.0;   // of the paired difference
    double lower95 = 0.0;     // one-sided 95% lower confidence bound
    std::int64_t n_failed_candidate = 0;
    std::int64_t n_failed_rival = 0;
    double mean_candidate = 0.0;
    double mean_rival = 0.0;
};

// Evaluates candidate and rivals under common random numbers (one shared
// exogenous path per path index) and reports paired differences.
std::vector<RivalResult> compare_strategies(const MarketParams& p, const PlanConfig& cfg,
                                            const MortalityLaw& law, const StrategyFn& candidate,
                                            const std::vector<std::pair<std::string, StrategyFn>>& rivals,
                                            const SimOptions& opt);

// Full paths (market states plus Y and increments) for the verification
// layer. Small ensembles only; memory is n_paths * (n_steps+1) states.
std::vector<std::vector<PathState>> simulate_paths_full(const MarketParams& p,
                                                        const PlanConfig& cfg,
                                                        const MortalityLaw& law,
                                                        const StrategyFn& strategy,
                                                        const SimOptions& opt);

// Per-node median of a pilot ensemble of relative-wealth paths; the
// deterministic proxy y(t) used by the varphi quadrature.
std::vector<double> build_y_proxy(const MarketParams& p, const PlanConfig& cfg,
                                  const MortalityLaw& law, const StrategyFn& strategy,
                                  const SimulationGrid& grid, std::int64_t n_pilot,
                                  std::uint64_t seed);

}  // namespace pensiondc
