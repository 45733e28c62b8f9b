#include "pensiondc/sde.hpp"

#include <cmath>
#include <stdexcept>

namespace pensiondc {

SimulationGrid::SimulationGrid(double T_, int n_steps_) : T(T_), n_steps(n_steps_) {
    if (!(T > 0.0)) throw std::invalid_argument("grid: T must be positive");
    if (n_steps < 1) throw std::invalid_argument("grid: n_steps must be >= 1");
}

double step_rate_exact(const MarketParams& p, double r, double dt, double z) {
    const double decay = std::exp(-p.a * dt);
    const double sd = p.sigma_r * std::sqrt((1.0 - std::exp(-2.0 * p.a * dt)) / (2.0 * p.a));
    return r * decay + p.r_bar * (1.0 - decay) + sd * z;
}

double step_lognormal(double x, double drift, double dt, std::span<const VolLoad> loads) {
    if (!(x > 0.0)) throw std::invalid_argument("step_lognormal: x must be positive");
    double var = 0.0;
    double diffusion = 0.0;
    for (const auto& l : loads) {
        var += l.vol * l.vol;
        diffusion += l.vol * l.dW;
    }
    return x * std::exp((drift - 0.5 * var) * dt + diffusion);
}

std::vector<PathState> generate_path(const MarketParams& p, const SimulationGrid& grid,
                                     const RngPolicy& rng, std::uint64_t path_index) {
    NormalStream stream = rng.stream_for(path_index);
    const double dt = grid.dt();
    const double sqdt = std::sqrt(dt);

    std::vector<PathState> path(static_cast<std::size_t>(grid.n_steps) + 1);
    path[0] = PathState{0.0, p.r0, 1.0, 1.0, p.ell0, 0.0, 0.0, 0.0, 0.0};

    for (int k = 0; k < grid.n_steps; ++k) {
        const PathState& cur = path[static_cast<std::size_t>(k)];
        const double t = grid.time(k);
        const double z_r = stream.next_normal();
        const double z_I = stream.next_normal();
        const double z_S = stream.next_normal();
        const double dW_r = sqdt * z_r;
        const double dW_I = sqdt * z_I;
        const double dW_S = sqdt * z_S;

        const CoefficientSet c = coefficients_at(p, t, cur.r);
        PathState next{};
        next.t = grid.time(k + 1);
        next.r = step_rate_exact(p, cur.r, dt, z_r);
        const VolLoad loads_I[] = {{c.infl_vol_I, dW_I}};
        next.I = step_lognormal(cur.I, p.mu_I(t), dt, loads_I);  // index drift mu_I, no r
        const VolLoad loads_S[] = {{c.stock_vol_S, dW_S}, {c.stock_vol_r, dW_r}};
        next.S = step_lognormal(cur.S, c.stock_drift, dt, loads_S);
        const VolLoad loads_ell[] = {{c.salary_vol_r, dW_r}, {c.salary_vol_S, dW_S}};
        next.ell = step_lognormal(cur.ell, c.salary_drift, dt, loads_ell);
        next.dW_r = dW_r;
        next.dW_I = dW_I;
        next.dW_S = dW_S;
        path[static_cast<std::size_t>(k) + 1] = next;
    }
    return path;
}

}  // namespace pensiondc
