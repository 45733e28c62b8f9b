#include "pensiondc/wealth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pensiondc/config.hpp"
#include "pensiondc/numerics.hpp"

namespace pensiondc {

double UtilitySpec::operator()(double y) const {
    if (!(y > 0.0)) throw std::domain_error("utility: argument must be positive");
    return std::pow(y, alpha) / alpha;
}

double step_relative_wealth(const MarketParams& p, const PlanConfig& cfg,
                            const MortalityLaw& law, double t, double r, double Y,
                            const StrategyVector& strat, double dt, double dW_r,
                            double dW_I, double dW_S) {
    if (!(Y > 0.0)) throw std::domain_error("step_relative_wealth: Y must be positive on entry");
    const double eb = bond_exposure(p, t);
    const double ebpi2 = eb * strat.pi2;
    const double beta = force_of_mortality(law, t);
    const double s1 = p.sigma1(t);
    const double s2 = p.sigma2(t);
    const double sS = p.sigma_S(t);
    const double drift = p.mu_I(t) * strat.pi1 + p.xi * ebpi2 + (r + p.mu(t)) * strat.pi3 -
                         cfg.kappa * r + beta - p.mu_ell(t) + s1 * s1 + s2 * s2 -
                         strat.pi3 * sS * s2 - (strat.pi3 * sS - ebpi2) * s1;
    const double diffusion = strat.pi1 * p.sigma_I(t) * dW_I +
                             (strat.pi3 * p.sigma(t) - s2) * dW_S +
                             (strat.pi3 * sS - ebpi2 - s1) * dW_r;
    const double contribution = (1.0 - law.epsilon * t * beta) * cfg.delta;
    return Y + Y * (drift * dt + diffusion) - contribution * dt;
}

namespace {

struct PathOutcome {
    double utility = 0.0;
    bool failed = false;
};

// Lean single-path run: evolves r with exact transitions and Y with Euler
// steps, consuming the stream in the same (z_r, z_I, z_S) order as
// generate_path so that the rate path matches the full generator bit for
// bit. checkpoints, when nonempty, receive Y at the listed grid indices
// (0 after a failure). When n_strategies > 1 all strategies share the path
// (common random numbers); utilities has one slot per strategy.
void run_path_lean(const MarketParams& p, const PlanConfig& cfg, const MortalityLaw& law,
                   std::span<const StrategyFn> strategies, const SimOptions& opt,
                   std::uint64_t path_index, std::span<double> utilities,
                   std::span<std::uint8_t> failed_flags,
                   std::span<const int> checkpoints, std::span<double> checkpoint_y) {
    const SimulationGrid& grid = opt.grid;
    const double dt = grid.dt();
    const double sqdt = std::sqrt(dt);
    NormalStream stream(opt.seed, path_index);
    const auto n_strat = strategies.size();
    const int lag = std::clamp(static_cast<int>(std::llround(cfg.theta / dt)), 0, grid.n_steps);

    std::vector<double> r_hist(static_cast<std::size_t>(grid.n_steps) + 1);
    r_hist[0] = p.r0;
    std::vector<double> Y(n_strat, cfg.Y0);
    std::vector<std::uint8_t> dead(n_strat, 0);

    std::size_t next_ckpt = 0;
    auto record = [&](int k) {
        if (checkpoints.empty()) return;
        while (next_ckpt < checkpoints.size() && checkpoints[next_ckpt] == k) {
            checkpoint_y[next_ckpt] = dead[0] ? 0.0 : Y[0];
            ++next_ckpt;
        }
    };
    record(0);

    for (int k = 0; k < grid.n_steps; ++k) {
        const double t = grid.time(k);
        const double z_r = stream.next_normal();
        const double z_I = stream.next_normal();
        const double z_S = stream.next_normal();
        const double dW_r = sqdt * z_r;
        const double dW_I = sqdt * z_I;
        const double dW_S = sqdt * z_S;

        const int obs_k = std::max(0, k - lag);
        PathState observed{};
        observed.t = grid.time(obs_k);
        observed.r = r_hist[static_cast<std::size_t>(obs_k)];

        for (std::size_t j = 0; j < n_strat; ++j) {
            if (dead[j]) continue;
            const StrategyVector sv = strategies[j](t, observed);
            const double Yn = step_relative_wealth(p, cfg, law, t,
                                                   r_hist[static_cast<std::size_t>(k)], Y[j], sv,
                                                   dt, dW_r, dW_I, dW_S);
            if (!(Yn > 0.0)) {
                dead[j] = 1;
            } else {
                Y[j] = Yn;
            }
        }
        r_hist[static_cast<std::size_t>(k) + 1] =
            step_rate_exact(p, r_hist[static_cast<std::size_t>(k)], dt, z_r);
        record(k + 1);
    }

    const UtilitySpec U{cfg.alpha};
    for (std::size_t j = 0; j < n_strat; ++j) {
        failed_flags[j] = dead[j];
        utilities[j] = dead[j] ? U(opt.utility_floor_y) : U(Y[j]);
    }
}

UtilityEstimate reduce_estimate(std::span<const double> utilities,
                                std::span<const std::uint8_t> failed) {
    UtilityEstimate est;
    est.n_paths = static_cast<std::int64_t>(utilities.size());
    est.mean = mean_of(utilities);
    est.std_error = std::sqrt(sample_variance(utilities) / static_cast<double>(utilities.size()));
    for (std::uint8_t f : failed) est.n_failed += f;
    return est;
}

int effective_threads(const SimOptions& opt) {
    return resolve_threads(opt.threads);
}

}  // namespace

UtilityEstimate simulate_terminal_serial(const MarketParams& p, const PlanConfig& cfg,
                                         const MortalityLaw& law, const StrategyFn& strategy,
                                         const SimOptions& opt) {
    if (opt.n_paths <= 0) throw std::invalid_argument("simulate_terminal: n_paths must be positive");
    const auto n = static_cast<std::size_t>(opt.n_paths);
    std::vector<double> utilities(n);
    std::vector<std::uint8_t> failed(n);
    const StrategyFn strategies[] = {strategy};
    for (std::size_t i = 0; i < n; ++i) {
        run_path_lean(p, cfg, law, strategies, opt, i, {&utilities[i], 1}, {&failed[i], 1}, {}, {});
    }
    return reduce_estimate(utilities, failed);
}

UtilityEstimate simulate_terminal(const MarketParams& p, const PlanConfig& cfg,
                                  const MortalityLaw& law, const StrategyFn& strategy,
                                  const SimOptions& opt) {
    if (opt.n_paths <= 0) throw std::invalid_argument("simulate_terminal: n_paths must be positive");
    const auto n = static_cast<std::size_t>(opt.n_paths);
    std::vector<double> utilities(n);
    std::vector<std::uint8_t> failed(n);
    const StrategyFn strategies[] = {strategy};
    const int threads = effective_threads(opt);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
    for (std::int64_t i = 0; i < opt.n_paths; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        run_path_lean(p, cfg, law, strategies, opt, ui, {&utilities[ui], 1}, {&failed[ui], 1}, {},
                      {});
    }
    (void)threads;
    return reduce_estimate(utilities, failed);
}

UtilityEstimate simulate_fan(const MarketParams& p, const PlanConfig& cfg,
                             const MortalityLaw& law, const StrategyFn& strategy,
                             const SimOptions& opt, FanChart& fan) {
    if (opt.n_paths <= 0) throw std::invalid_argument("simulate_fan: n_paths must be positive");
    const auto n = static_cast<std::size_t>(opt.n_paths);
    const int n_ck = std::min(opt.fan_max_checkpoints, opt.grid.n_steps + 1);
    std::vector<int> ckpts;
    for (int j = 0; j < n_ck; ++j) {
        const int k = (n_ck == 1) ? 0
                                  : static_cast<int>(std::llround(
                                        static_cast<double>(j) * opt.grid.n_steps / (n_ck - 1)));
        if (ckpts.empty() || ckpts.back() != k) ckpts.push_back(k);
    }
    std::vector<double> utilities(n);
    std::vector<std::uint8_t> failed(n);
    std::vector<double> ymat(ckpts.size() * n);
    const StrategyFn strategies[] = {strategy};
    const int threads = effective_threads(opt);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
    for (std::int64_t i = 0; i < opt.n_paths; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        std::vector<double> yrow(ckpts.size());
        run_path_lean(p, cfg, law, strategies, opt, ui, {&utilities[ui], 1}, {&failed[ui], 1},
                      ckpts, yrow);
        for (std::size_t c = 0; c < ckpts.size(); ++c) ymat[c * n + ui] = yrow[c];
    }
    (void)threads;
    fan.t.clear();
    fan.mean.clear();
    fan.q05.clear();
    fan.q95.clear();
    for (std::size_t c = 0; c < ckpts.size(); ++c) {
        std::span<const double> row(&ymat[c * n], n);
        fan.t.push_back(opt.grid.time(ckpts[c]));
        fan.mean.push_back(mean_of(row));
        std::vector<double> copy(row.begin(), row.end());
        fan.q05.push_back(quantile(copy, 0.05));
        fan.q95.push_back(quantile(std::move(copy), 0.95));
    }
    return reduce_estimate(utilities, failed);
}

std::vector<RivalResult> compare_strategies(const MarketParams& p, const PlanConfig& cfg,
                                            const MortalityLaw& law, const StrategyFn& candidate,
                                            const std::vector<std::pair<std::string, StrategyFn>>& rivals,
                                            const SimOptions& opt) {
    if (rivals.empty()) throw std::invalid_argument("compare_strategies: needs at least one rival");
    if (opt.n_paths <= 0) throw std::invalid_argument("compare_strategies: n_paths must be positive");
    const auto n = static_cast<std::size_t>(opt.n_paths);
    const std::size_t n_strat = rivals.size() + 1;

    std::vector<StrategyFn> strategies;
    strategies.reserve(n_strat);
    strategies.push_back(candidate);
    for (const auto& rv : rivals) strategies.push_back(rv.second);

    std::vector<double> utilities(n_strat * n);
    std::vector<std::uint8_t> failed(n_strat * n);
    const int threads = effective_threads(opt);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
    for (std::int64_t i = 0; i < opt.n_paths; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        std::vector<double> u(n_strat);
        std::vector<std::uint8_t> f(n_strat);
        run_path_lean(p, cfg, law, strategies, opt, ui, u, f, {}, {});
        for (std::size_t j = 0; j < n_strat; ++j) {
            utilities[j * n + ui] = u[j];
            failed[j * n + ui] = f[j];
        }
    }
    (void)threads;

    constexpr double kOneSided95 = 1.6448536269514722;
    std::vector<RivalResult> results;
    std::vector<double> diff(n);
    std::span<const double> cand(&utilities[0], n);
    for (std::size_t j = 1; j < n_strat; ++j) {
        std::span<const double> riv(&utilities[j * n], n);
        for (std::size_t i = 0; i < n; ++i) diff[i] = cand[i] - riv[i];
        RivalResult r;
        r.label = rivals[j - 1].first;
        r.mean_diff = mean_of(diff);
        r.std_error = std::sqrt(sample_variance(diff) / static_cast<double>(n));
        r.lower95 = r.mean_diff - kOneSided95 * r.std_error;
        r.mean_candidate = mean_of(cand);
        r.mean_rival = mean_of(riv);
        for (std::size_t i = 0; i < n; ++i) {
            r.n_failed_candidate += failed[i];
            r.n_failed_rival += failed[j * n + i];
        }
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<std::vector<PathState>> simulate_paths_full(const MarketParams& p,
                                                        const PlanConfig& cfg,
                                                        const MortalityLaw& law,
                                                        const StrategyFn& strategy,
                                                        const SimOptions& opt) {
    if (opt.n_paths <= 0) throw std::invalid_argument("simulate_paths_full: n_paths must be positive");
    const auto n = static_cast<std::size_t>(opt.n_paths);
    const RngPolicy rng{opt.seed};
    const double dt = opt.grid.dt();
    const int lag = std::clamp(static_cast<int>(std::llround(cfg.theta / dt)), 0, opt.grid.n_steps);
    std::vector<std::vector<PathState>> paths(n);
    const int threads = effective_threads(opt);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
    for (std::int64_t i = 0; i < opt.n_paths; ++i) {
        auto path = generate_path(p, opt.grid, rng, static_cast<std::uint64_t>(i));
        path[0].Y = cfg.Y0;
        bool dead = false;
        for (int k = 0; k < opt.grid.n_steps; ++k) {
            const auto ks = static_cast<std::size_t>(k);
            const double t = path[ks].t;
            if (dead) {
                path[ks + 1].Y = 0.0;
                continue;
            }
            const int obs_k = std::max(0, k - lag);
            const StrategyVector sv = strategy(t, path[static_cast<std::size_t>(obs_k)]);
            const double Yn =
                step_relative_wealth(p, cfg, law, t, path[ks].r, path[ks].Y, sv, dt,
                                     path[ks + 1].dW_r, path[ks + 1].dW_I, path[ks + 1].dW_S);
            if (!(Yn > 0.0)) {
                dead = true;
                path[ks + 1].Y = 0.0;
            } else {
                path[ks + 1].Y = Yn;
            }
        }
        paths[static_cast<std::size_t>(i)] = std::move(path);
    }
    (void)threads;
    return paths;
}

std::vector<double> build_y_proxy(const MarketParams& p, const PlanConfig& cfg,
                                  const MortalityLaw& law, const StrategyFn& strategy,
                                  const SimulationGrid& grid, std::int64_t n_pilot,
                                  std::uint64_t seed) {
    SimOptions opt;
    opt.grid = grid;
    opt.n_paths = n_pilot;
    opt.seed = seed;
    auto paths = simulate_paths_full(p, cfg, law, strategy, opt);
    const auto n_nodes = static_cast<std::size_t>(grid.n_steps) + 1;
    std::vector<double> proxy(n_nodes);
    std::vector<double> column(paths.size());
    for (std::size_t k = 0; k < n_nodes; ++k) {
        for (std::size_t i = 0; i < paths.size(); ++i) column[i] = paths[i][k].Y;
        proxy[k] = quantile(column, 0.5);
        if (!(proxy[k] > 0.0)) {
            throw std::runtime_error("build_y_proxy: pilot median hit zero; raise Y0 or paths");
        }
    }
    return proxy;
}

}  // namespace pensiondc
