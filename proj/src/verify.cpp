#include "pensiondc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pensiondc/numerics.hpp"

namespace pensiondc {

namespace {

// Drift of the displayed relative-wealth equation, per unit Y, plus the
// additive contribution term; shared by the Hamiltonian and its gradient.
double wealth_drift_per_y(const MarketParams& p, const PlanConfig& cfg,
                          const MortalityLaw& law, double t, double r,
                          const StrategyVector& s) {
    const double eb = bond_exposure(p, t);
    const double ebpi2 = eb * s.pi2;
    const double beta = force_of_mortality(law, t);
    const double s1 = p.sigma1(t);
    const double s2 = p.sigma2(t);
    const double sS = p.sigma_S(t);
    return p.mu_I(t) * s.pi1 + p.xi * ebpi2 + (r + p.mu(t)) * s.pi3 - cfg.kappa * r + beta -
           p.mu_ell(t) + s1 * s1 + s2 * s2 - s.pi3 * sS * s2 - (s.pi3 * sS - ebpi2) * s1;
}

}  // namespace

double hamiltonian(const MarketParams& p, const PlanConfig& cfg, const MortalityLaw& law,
                   double t, double r, double Y, const StrategyVector& strat,
                   const AdjointState& adj) {
    const double beta = force_of_mortality(law, t);
    const double eb = bond_exposure(p, t);
    const double b_Y = Y * wealth_drift_per_y(p, cfg, law, t, r, strat) -
                       (1.0 - law.epsilon * t * beta) * cfg.delta;
    const double vol_I = strat.pi1 * p.sigma_I(t) * Y;
    const double vol_S = (strat.pi3 * p.sigma(t) - p.sigma2(t)) * Y;
    const double vol_r = (strat.pi3 * p.sigma_S(t) - eb * strat.pi2 - p.sigma1(t)) * Y;
    return b_Y * adj.A1 + p.a * (p.r_bar - r) * adj.A2 + vol_I * adj.B_I + vol_S * adj.B_S +
           vol_r * adj.B_r + p.sigma_r * adj.B4;
}

std::array<double, 3> hamiltonian_control_gradient(const MarketParams& p, const PlanConfig& cfg,
                                                   double t, double r, double Y,
                                                   const AdjointState& adj) {
    (void)cfg;
    const double eb = bond_exposure(p, t);
    const double s1 = p.sigma1(t);
    const double s2 = p.sigma2(t);
    const double sS = p.sigma_S(t);
    const double muS = r + p.mu(t);
    return {
        Y * (p.mu_I(t) * adj.A1 + p.sigma_I(t) * adj.B_I),
        Y * eb * ((p.xi + s1) * adj.A1 - adj.B_r),
        Y * ((muS - sS * s2 - sS * s1) * adj.A1 + sS * adj.B_r + p.sigma(t) * adj.B_S),
    };
}

AffinityReport affinity_check(const MarketParams& p, const PlanConfig& cfg,
                              const MortalityLaw& law, double t, double r, double Y,
                              const StrategyVector& at, const AdjointState& adj,
                              double h, double tol) {
    const auto H = [&](double d1, double d2, double d3) {
        StrategyVector s{at.pi1 + d1, at.pi2 + d2, at.pi3 + d3};
        return hamiltonian(p, cfg, law, t, r, Y, s, adj);
    };
    AffinityReport rep;
    const double base = H(0, 0, 0);
    const double pure[3] = {
        H(h, 0, 0) - 2.0 * base + H(-h, 0, 0),
        H(0, h, 0) - 2.0 * base + H(0, -h, 0),
        H(0, 0, h) - 2.0 * base + H(0, 0, -h),
    };
    const double cross[3] = {
        H(h, h, 0) - H(h, -h, 0) - H(-h, h, 0) + H(-h, -h, 0),
        H(h, 0, h) - H(h, 0, -h) - H(-h, 0, h) + H(-h, 0, -h),
        H(0, h, h) - H(0, h, -h) - H(0, -h, h) + H(0, -h, -h),
    };
    for (int i = 0; i < 3; ++i) {
        rep.second_diff[static_cast<std::size_t>(i)] = pure[i];
        rep.cross_diff[static_cast<std::size_t>(i)] = cross[i];
        rep.max_abs = std::max({rep.max_abs, std::abs(pure[i]), std::abs(cross[i])});
    }
    rep.pass = rep.max_abs <= tol;
    return rep;
}

std::array<double, 3> foc_residual(const MarketParams& p, const PlanConfig& cfg, double t,
                                   double r, const StrategyVector& strat, double phi_t) {
    const double am1 = cfg.alpha - 1.0;
    const double sI = p.sigma_I(t);
    const double s = p.sigma(t);
    const double sS = p.sigma_S(t);
    const double s1 = p.sigma1(t);
    const double s2 = p.sigma2(t);
    const double eb = bond_exposure(p, t);
    const double muS = r + p.mu(t);
    const double br = am1 * (sS * strat.pi3 - eb * strat.pi2 - s1) + p.sigma_r * phi_t;
    return {
        p.mu_I(t) + sI * br,
        (p.xi + s1) - am1 * strat.pi1 * sI,
        (muS - sS * (s1 + s2)) + sS * am1 * strat.pi1 * sI + s * am1 * (s * strat.pi3 - s2),
    };
}

BsdeResidualStats bsde_residual_A1(const MarketParams& p, const PlanConfig& cfg,
                                   const MortalityLaw& law,
                                   std::span<const std::vector<PathState>> paths,
                                   const StrategyPolicy& policy) {
    const AuxTables& aux = policy.aux();
    const SimulationGrid& grid = aux.grid;
    const double dt = grid.dt();
    const int lag = std::clamp(static_cast<int>(std::llround(cfg.theta / dt)), 0, grid.n_steps);
    const double em1 = cfg.alpha - 1.0;

    BsdeResidualStats stats;
    double total_abs = 0.0;
    for (const auto& path : paths) {
        if (path.size() != static_cast<std::size_t>(grid.n_steps) + 1) {
            throw std::invalid_argument("bsde_residual_A1: path length does not match the grid");
        }
        bool usable = true;
        for (const auto& st : path) {
            if (!(st.Y > 0.0)) {
                usable = false;
                break;
            }
        }
        if (!usable) continue;

        auto ansatz = [&](std::size_t k) {
            return std::pow(path[k].Y, em1) *
                   std::exp(aux.varphi[k] + aux.phi[k] * path[k].r);
        };
        for (int k = 0; k < grid.n_steps; ++k) {
            const auto ks = static_cast<std::size_t>(k);
            const double t = path[ks].t;
            const int obs_k = std::max(0, k - lag);
            const StrategyVector sv = policy.at(t, path[static_cast<std::size_t>(obs_k)]);
            const double A1 = ansatz(ks);
            const double eb = bond_exposure(p, t);
            const double B_r = (em1 * (sv.pi3 * p.sigma_S(t) - eb * sv.pi2 - p.sigma1(t)) +
                                p.sigma_r * aux.phi[ks]) * A1;
            const double B_I = em1 * sv.pi1 * p.sigma_I(t) * A1;
            const double B_S = em1 * (sv.pi3 * p.sigma(t) - p.sigma2(t)) * A1;
            const double beta = force_of_mortality(law, t);
            const double s1 = p.sigma1(t);
            const double s2 = p.sigma2(t);
            const double drift = -((beta - cfg.kappa * path[ks].r - p.mu_ell(t) + s1 * s1 +
                                    s2 * s2) * A1 - s1 * B_I - s2 * B_S);
            const double residual = ansatz(ks + 1) - A1 - drift * dt -
                                    (B_r * path[ks + 1].dW_r + B_I * path[ks + 1].dW_I +
                                     B_S * path[ks + 1].dW_S);
            total_abs += std::abs(residual);
            ++stats.n_steps_counted;
        }
        const double terminal_err =
            std::abs(ansatz(path.size() - 1) - std::pow(path.back().Y, em1));
        stats.max_terminal_err = std::max(stats.max_terminal_err, terminal_err);
    }
    if (stats.n_steps_counted == 0) {
        throw std::invalid_argument("bsde_residual_A1: no usable paths");
    }
    stats.mean_abs = total_abs / static_cast<double>(stats.n_steps_counted);
    return stats;
}

A2Estimate estimate_A2(const MarketParams& p, const PlanConfig& cfg, const MortalityLaw& law,
                       std::span<const std::vector<PathState>> paths, double t,
                       const AuxTables& aux, A2Discount discount, int degree) {
    (void)law;
    if (paths.size() < 100) {
        throw std::invalid_argument("estimate_A2: needs at least 100 paths");
    }
    const SimulationGrid& grid = aux.grid;
    const double dt = grid.dt();
    const int k_t = std::clamp(static_cast<int>(std::llround(t / dt)), 0, grid.n_steps);
    const int lag = std::clamp(static_cast<int>(std::llround(cfg.theta / dt)), 0, grid.n_steps);
    const int obs_k = std::max(0, k_t - lag);
    const auto n = paths.size();

    if (k_t >= grid.n_steps) return {0.0, 0.0};  // empty integral at t = T

    // Pathwise integral Z_i = -kappa int_t^T disc(s) h(s) Y(s)^alpha ds
    // (trapezoid on the grid), h = e^{varphi + phi r}.
    std::vector<double> Z(n), xr(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& path = paths[i];
        double acc = 0.0;
        bool usable = true;
        auto integrand = [&](int k) {
            const auto ks = static_cast<std::size_t>(k);
            if (!(path[ks].Y > 0.0)) {
                usable = false;
                return 0.0;
            }
            const double disc = (discount == A2Discount::Discounted)
                                    ? std::exp(-p.a * (path[ks].t - grid.time(k_t)))
                                    : 1.0;
            return disc * std::exp(aux.varphi[ks] + aux.phi[ks] * path[ks].r) *
                   std::pow(path[ks].Y, cfg.alpha);
        };
        double prev = integrand(k_t);
        for (int k = k_t + 1; k <= grid.n_steps && usable; ++k) {
            const double cur = integrand(k);
            acc += 0.5 * (prev + cur) * dt;
            prev = cur;
        }
        Z[i] = usable ? -cfg.kappa * acc : 0.0;
        xr[i] = path[static_cast<std::size_t>(obs_k)].r;
        xy[i] = path[static_cast<std::size_t>(obs_k)].Y;
    }

    bool all_zero = true;
    for (double z : Z) {
        if (z != 0.0) {
            all_zero = false;
            break;
        }
    }
    if (all_zero) return {0.0, 0.0};

    // Regression features: centered/scaled (r, Y) monomials up to `degree`.
    // Degenerate cross sections (zero variance) fall back to lower degree.
    const double mr = mean_of(xr);
    const double my = mean_of(xy);
    const double sdr = std::sqrt(sample_variance(xr));
    const double sdy = std::sqrt(sample_variance(xy));
    std::vector<std::vector<double>> cols;
    cols.emplace_back(n, 1.0);
    if (degree >= 1) {
        if (sdr > 1e-14) {
            std::vector<double> c(n);
            for (std::size_t i = 0; i < n; ++i) c[i] = (xr[i] - mr) / sdr;
            cols.push_back(std::move(c));
        }
        if (sdy > 1e-14) {
            std::vector<double> c(n);
            for (std::size_t i = 0; i < n; ++i) c[i] = (xy[i] - my) / sdy;
            cols.push_back(std::move(c));
        }
    }
    if (degree >= 2) {
        const std::size_t base = cols.size();
        for (std::size_t ai = 1; ai < base; ++ai) {
            for (std::size_t bi = ai; bi < base; ++bi) {
                std::vector<double> c(n);
                for (std::size_t i = 0; i < n; ++i) c[i] = cols[ai][i] * cols[bi][i];
                cols.push_back(std::move(c));
            }
        }
    }
    const std::size_t m = cols.size();
    std::vector<double> XtX(m * m, 0.0), XtZ(m, 0.0);
    for (std::size_t aI = 0; aI < m; ++aI) {
        for (std::size_t bI = aI; bI < m; ++bI) {
            double sdot = 0.0;
            for (std::size_t i = 0; i < n; ++i) sdot += cols[aI][i] * cols[bI][i];
            XtX[aI * m + bI] = XtX[bI * m + aI] = sdot;
        }
        double sz = 0.0;
        for (std::size_t i = 0; i < n; ++i) sz += cols[aI][i] * Z[i];
        XtZ[aI] = sz;
    }
    // Tiny ridge keeps near-collinear quadratic features solvable.
    for (std::size_t j = 0; j < m; ++j) XtX[j * m + j] += 1e-10 * XtX[j * m + j] + 1e-300;
    std::vector<double> beta = cholesky_solve(XtX, XtZ, m);

    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = 0.0;
        for (std::size_t j = 0; j < m; ++j) fit += beta[j] * cols[j][i];
        const double e = Z[i] - fit;
        ss_res += e * e;
    }
    const double dof = static_cast<double>(n) - static_cast<double>(m);
    const double s2_hat = ss_res / std::max(dof, 1.0);
    // Value at the mean observation: every centered feature vanishes there
    // except the squared ones, whose mean-point value is 0 by construction of
    // centered monomials evaluated at u = v = 0.
    std::vector<double> e0(m, 0.0);
    e0[0] = 1.0;
    std::vector<double> inv_col = cholesky_solve(XtX, e0, m);
    A2Estimate out;
    out.value = beta[0];
    out.std_error = std::sqrt(std::max(0.0, s2_hat * inv_col[0]));
    return out;
}

std::vector<CheckRow> integrability_report(const MarketParams& p, const PlanConfig& cfg,
                                           const MortalityLaw& law,
                                           std::span<const std::vector<PathState>> paths,
                                           const StrategyPolicy& policy) {
    (void)law;
    const AuxTables& aux = policy.aux();
    const SimulationGrid& grid = aux.grid;
    const double dt = grid.dt();
    const double em1 = cfg.alpha - 1.0;
    const int lag = std::clamp(static_cast<int>(std::llround(cfg.theta / dt)), 0, grid.n_steps);

    auto ensemble_mean = [&](std::size_t lo, std::size_t hi, double& m_yb, double& m_as) {
        double acc_yb = 0.0, acc_as = 0.0;
        std::size_t used = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            const auto& path = paths[i];
            bool usable = true;
            double int_yb = 0.0, int_as = 0.0;
            for (int k = 0; k < grid.n_steps; ++k) {
                const auto ks = static_cast<std::size_t>(k);
                if (!(path[ks].Y > 0.0)) {
                    usable = false;
                    break;
                }
                const double t = path[ks].t;
                const int obs_k = std::max(0, k - lag);
                const StrategyVector sv = policy.at(t, path[static_cast<std::size_t>(obs_k)]);
                const double A1 = std::pow(path[ks].Y, em1) *
                                  std::exp(aux.varphi[ks] + aux.phi[ks] * path[ks].r);
                const double eb = bond_exposure(p, t);
                const double B_r = (em1 * (sv.pi3 * p.sigma_S(t) - eb * sv.pi2 - p.sigma1(t)) +
                                    p.sigma_r * aux.phi[ks]) * A1;
                const double B_I = em1 * sv.pi1 * p.sigma_I(t) * A1;
                const double B_S = em1 * (sv.pi3 * p.sigma(t) - p.sigma2(t)) * A1;
                const double y2 = path[ks].Y * path[ks].Y;
                int_yb += y2 * (B_r * B_r + B_I * B_I + B_S * B_S) * dt;
                const double vI = sv.pi1 * p.sigma_I(t) * path[ks].Y;
                const double vS = (sv.pi3 * p.sigma(t) - p.sigma2(t)) * path[ks].Y;
                const double vr = (sv.pi3 * p.sigma_S(t) - eb * sv.pi2 - p.sigma1(t)) * path[ks].Y;
                int_as += A1 * A1 * (vI * vI + vS * vS + vr * vr) * dt;
            }
            if (usable) {
                acc_yb += int_yb;
                acc_as += int_as;
                ++used;
            }
        }
        m_yb = used ? acc_yb / static_cast<double>(used) : 0.0;
        m_as = used ? acc_as / static_cast<double>(used) : 0.0;
    };

    double full_yb, full_as, half_yb, half_as;
    ensemble_mean(0, paths.size(), full_yb, full_as);
    ensemble_mean(0, paths.size() / 2, half_yb, half_as);

    auto ratio = [](double h, double f) { return (f > 0.0) ? h / f : 1.0; };
    std::vector<CheckRow> rows;
    rows.push_back({"integrability.E_int_Y2_B2", full_yb, 0.0, true, true});
    rows.push_back({"integrability.E_int_Y2_B2_halfratio", ratio(half_yb, full_yb), 0.0, true, true});
    rows.push_back({"integrability.E_int_A1sq_vol2", full_as, 0.0, true, true});
    rows.push_back({"integrability.E_int_A1sq_vol2_halfratio", ratio(half_as, full_as), 0.0, true, true});
    return rows;
}

}  // namespace pensiondc
