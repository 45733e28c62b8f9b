#include "pensiondc/strategy.hpp"

#include <cmath>
#include <stdexcept>

#include "pensiondc/numerics.hpp"

// The first-order conditions, with the adjoint-diffusion relations
//   B1* = [(alpha-1)(sigma_S pi3 - E_b pi2 - sigma1) + sigma_r phi] A1*
//   B2* = (alpha-1) pi1 sigma_I A1*
//   B3* = (alpha-1)(sigma pi3 - sigma2) A1*
// substituted equation-by-equation and A1* divided out, reduce to a 3x3
// linear system that is triangular in the order pi1 (condition 2), pi3
// (condition 3), pi2 (condition 1). foc_solve solves that system; the
// pi*_star functions evaluate the closed forms for comparison.

namespace pensiondc {

void PlanConfig::validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("plan.delta must be in (0,1)");
    if (!(kappa >= 0.0 && kappa < 1.0)) throw std::invalid_argument("plan.kappa must be in [0,1)");
    if (!(alpha < 1.0) || alpha == 0.0) throw std::invalid_argument("plan.alpha must be < 1 and nonzero");
    if (!(Y0 > 0.0)) throw std::invalid_argument("plan.Y0 must be positive");
    if (!(theta >= 0.0)) throw std::invalid_argument("plan.theta must be nonnegative");
}

double pi1_star(const MarketParams& p, const PlanConfig& cfg, double t) {
    const double sI = p.sigma_I(t);
    const double denom = (cfg.alpha - 1.0) * sI;
    if (denom == 0.0) {
        throw std::domain_error("pi1_star: singular parameters ((alpha-1) sigma_I = 0)");
    }
    return (p.xi + p.sigma1(t)) / denom;
}

namespace {

double pi3_numerator(const MarketParams& p, const PlanConfig& cfg, double t, double r) {
    const double muS = r + p.mu(t);
    return muS - p.sigma_S(t) * p.sigma2(t) + p.xi * p.sigma_S(t) +
           (1.0 - cfg.alpha) * p.sigma(t) * p.sigma2(t);
}

}  // namespace

double pi3_star(const MarketParams& p, const PlanConfig& cfg, double t, double r) {
    const double denom = (1.0 - cfg.alpha) * p.sigma(t) * p.sigma_S(t);
    if (denom == 0.0) {
        throw std::domain_error("pi3_star: singular parameters ((1-alpha) sigma sigma_S = 0)");
    }
    return pi3_numerator(p, cfg, t, r) / denom;
}

double pi3_foc(const MarketParams& p, const PlanConfig& cfg, double t, double r) {
    const double s = p.sigma(t);
    const double denom = (1.0 - cfg.alpha) * s * s;
    if (denom == 0.0) {
        throw std::domain_error("pi3_foc: singular parameters ((1-alpha) sigma^2 = 0)");
    }
    return pi3_numerator(p, cfg, t, r) / denom;
}

namespace {

// E_b(t) * pi2(t): finite all the way to maturity (the 1 - e^{-a(T-t)}
// factors cancel), so internal consumers use this form.
double exposure_weighted_pi2(const MarketParams& p, const PlanConfig& cfg, double t, double r,
                             double phi_t, StrategyVariant variant) {
    const double sI = p.sigma_I(t);
    const double am1 = cfg.alpha - 1.0;
    const double pi3 = (variant == StrategyVariant::FocOracle) ? pi3_foc(p, cfg, t, r)
                                                               : pi3_star(p, cfg, t, r);
    const double bracket = p.sigma_r * sI * phi_t + p.mu_I(t) +
                           am1 * sI * (p.sigma_S(t) * pi3 - p.sigma1(t));
    if (variant == StrategyVariant::FocOracle) {
        if (am1 * sI == 0.0) throw std::domain_error("pi2: singular parameters ((alpha-1) sigma_I = 0)");
        return bracket / (am1 * sI);
    }
    if (p.xi == 0.0) {
        throw std::domain_error("pi2_star: xi = 0 is singular under the verbatim formula");
    }
    return 2.0 * bracket / (am1 * sI * p.xi);
}

}  // namespace

double pi2_star(const MarketParams& p, const PlanConfig& cfg, double t, double r,
                double phi_t, StrategyVariant variant) {
    const double eb = bond_exposure(p, t);
    if (eb == 0.0) {
        throw std::domain_error("pi2_star: maturity singularity (bond exposure vanishes at t = T)");
    }
    return exposure_weighted_pi2(p, cfg, t, r, phi_t, variant) / eb;
}

StrategyVector foc_solve(const MarketParams& p, const PlanConfig& cfg, double t, double r,
                         double phi_t) {
    const double am1 = cfg.alpha - 1.0;
    const double sI = p.sigma_I(t);
    const double s = p.sigma(t);
    const double sS = p.sigma_S(t);
    const double s1 = p.sigma1(t);
    const double s2 = p.sigma2(t);
    const double muS = r + p.mu(t);
    const double eb = bond_exposure(p, t);

    // Rows: condition 2, condition 3, condition 1; unknowns (pi1, pi2, pi3).
    const double m00 = am1 * sI;
    const double b0 = p.xi + s1;
    const double m10 = am1 * sI * sS;
    const double m12 = am1 * s * s;
    const double b1 = sS * (s1 + s2) - muS + am1 * s * s2;
    const double m21 = -am1 * sI * eb;
    const double m22 = am1 * sI * sS;
    const double b2 = -p.mu_I(t) + am1 * sI * s1 - sI * p.sigma_r * phi_t;

    if (m00 == 0.0) throw std::domain_error("foc_solve: pivot (alpha-1) sigma_I vanishes");
    const double pi1 = b0 / m00;
    if (m12 == 0.0) throw std::domain_error("foc_solve: pivot (alpha-1) sigma^2 vanishes");
    const double pi3 = (b1 - m10 * pi1) / m12;
    if (m21 == 0.0) {
        throw std::domain_error("foc_solve: pivot (alpha-1) sigma_I bond_exposure vanishes (t = T?)");
    }
    const double pi2 = (b2 - m22 * pi3) / m21;
    return StrategyVector{pi1, pi2, pi3};
}

double AuxTables::phi_at(double t) const {
    const double dt = grid.dt();
    if (t <= 0.0) return phi.front();
    if (t >= grid.T) return phi.back();
    const double pos = t / dt;
    const auto k = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(k);
    return (1.0 - w) * phi[k] + w * phi[k + 1];
}

double AuxTables::varphi_at(double t) const {
    const double dt = grid.dt();
    if (t <= 0.0) return varphi.front();
    if (t >= grid.T) return varphi.back();
    const double pos = t / dt;
    const auto k = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(k);
    return (1.0 - w) * varphi[k] + w * varphi[k + 1];
}

namespace {

// Displayed solution for given M(t) and r(t):
//   phi(t) = (1/2) sigma_r^2 exp{-int_t^T M/r} int_t^T 1/r
// computed incrementally over the grid intervals with adaptive quadrature.
std::vector<double> phi_formula(const SimulationGrid& grid, double sigma_r,
                                const std::function<double(double)>& M,
                                const std::function<double(double)>& rfn) {
    const int n = grid.n_steps;
    std::vector<double> int_m(static_cast<std::size_t>(n) + 1, 0.0);  // int_t^T M/r
    std::vector<double> int_r(static_cast<std::size_t>(n) + 1, 0.0);  // int_t^T 1/r
    for (int k = n - 1; k >= 0; --k) {
        const double lo = grid.time(k);
        const double hi = grid.time(k + 1);
        const auto f_m = [&](double u) {
            const double rv = rfn(u);
            if (!(rv > 0.0)) throw std::domain_error("phi: proxy rate is nonpositive on [t,T]");
            return M(u) / rv;
        };
        const auto f_r = [&](double u) {
            const double rv = rfn(u);
            if (!(rv > 0.0)) throw std::domain_error("phi: proxy rate is nonpositive on [t,T]");
            return 1.0 / rv;
        };
        int_m[k] = int_m[k + 1] + integrate(f_m, lo, hi, 1e-13);
        int_r[k] = int_r[k + 1] + integrate(f_r, lo, hi, 1e-13);
    }
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        out[static_cast<std::size_t>(k)] =
            0.5 * sigma_r * sigma_r * std::exp(-int_m[k]) * int_r[k];
    }
    out.back() = 0.0;
    return out;
}

}  // namespace

std::vector<double> phi_formula_custom(const SimulationGrid& grid, double sigma_r,
                                       const std::function<double(double)>& M,
                                       const std::function<double(double)>& r) {
    return phi_formula(grid, sigma_r, M, r);
}

double M_fn(const MarketParams& p, const PlanConfig& cfg, StrategyVariant variant,
            double t, double phi_t) {
    const double rm = vasicek_mean(p, t);
    const double pi3 = (variant == StrategyVariant::FocOracle) ? pi3_foc(p, cfg, t, rm)
                                                               : pi3_star(p, cfg, t, rm);
    const double ebpi2 = exposure_weighted_pi2(p, cfg, t, rm, phi_t, variant);
    return p.a * (p.r_bar - rm) +
           0.5 * (cfg.alpha - 1.0) * p.sigma_r * (pi3 * p.sigma_S(t) - ebpi2 - p.sigma1(t));
}

std::vector<double> build_phi_table(const MarketParams& p, const PlanConfig& cfg,
                                    const SimulationGrid& grid, StrategyVariant variant) {
    std::vector<double> phi(static_cast<std::size_t>(grid.n_steps) + 1, 0.0);
    auto interp = [&](double t) {
        const double pos = t / grid.dt();
        const auto k = std::min(static_cast<std::size_t>(pos), phi.size() - 2);
        const double w = pos - static_cast<double>(k);
        return (1.0 - w) * phi[k] + w * phi[k + 1];
    };
    // pi2 depends on phi, so iterate; the sigma_r sigma_I phi feedback is a
    // few orders below mu_I and the map contracts immediately.
    for (int it = 0; it < 4; ++it) {
        phi = phi_formula(
            grid, p.sigma_r, [&](double u) { return M_fn(p, cfg, variant, u, interp(u)); },
            [&](double u) { return vasicek_mean(p, u); });
    }
    return phi;
}

double Q_fn(const MarketParams& p, const PlanConfig& cfg, const MortalityLaw& law,
            double t, double r) {
    const double s1 = p.sigma1(t);
    const double s2 = p.sigma2(t);
    return cfg.kappa * r + p.mu_ell(t) - force_of_mortality(law, t) - s1 * s1 - s2 * s2;
}

double K_fn(const MarketParams& p, const PlanConfig& cfg, const MortalityLaw& law,
            StrategyVariant variant, double t, double r, double y, double phi_t) {
    if (!(y > 0.0)) throw std::domain_error("K: proxy relative wealth must be positive");
    const double am1 = cfg.alpha - 1.0;
    const double am2 = cfg.alpha - 2.0;
    const double sI = p.sigma_I(t);
    const double s1 = p.sigma1(t);
    const double s2 = p.sigma2(t);
    const double sS = p.sigma_S(t);
    const double beta = force_of_mortality(law, t);
    const double pi1 = pi1_star(p, cfg, t);
    const double pi3 = (variant == StrategyVariant::FocOracle) ? pi3_foc(p, cfg, t, r)
                                                               : pi3_star(p, cfg, t, r);
    const double ebpi2 = exposure_weighted_pi2(p, cfg, t, r, phi_t, variant);
    // As displayed: the bond weight carries its xi factor inside the cross
    // and quadratic terms as well.
    const double e2x = ebpi2 * p.xi;
    const double wS = sS * pi3 - s2;
    const double wr = sS * pi3 - e2x - s1;
    return am1 * (p.mu_I(t) * pi1 + p.mu(t) * pi3 + e2x - cfg.kappa * r + beta - p.mu_ell(t) +
                  s1 * s1 + s2 * s2 - sS * s2 * pi3 + 0.5 * am2 * pi1 * pi1 * sI * sI -
                  (sS * pi3 - e2x) * s1 + 0.5 * am2 * wS * wS + 0.5 * am2 * wr * wr -
                  (1.0 - law.epsilon * t * beta) * cfg.delta / y);
}

double Kcal_fn(const MarketParams& p, const PlanConfig& cfg, const MortalityLaw& law,
               StrategyVariant variant, double t, double r, double y, double phi_t) {
    const double am1 = cfg.alpha - 1.0;
    const double sI = p.sigma_I(t);
    const double s1 = p.sigma1(t);
    const double s2 = p.sigma2(t);
    const double pi1 = pi1_star(p, cfg, t);
    const double pi3 = (variant == StrategyVariant::FocOracle) ? pi3_foc(p, cfg, t, r)
                                                               : pi3_star(p, cfg, t, r);
    return K_fn(p, cfg, law, variant, t, r, y, phi_t) -
           (Q_fn(p, cfg, law, t, r) +
            am1 * (pi1 * s1 * sI + s2 * (pi3 * p.sigma_S(t) - s2)));
}

std::vector<double> build_varphi_table(const MarketParams& p, const PlanConfig& cfg,
                                       const MortalityLaw& law, const SimulationGrid& grid,
                                       StrategyVariant variant,
                                       std::span<const double> phi_table,
                                       std::span<const double> y_proxy) {
    const auto n = static_cast<std::size_t>(grid.n_steps);
    if (phi_table.size() != n + 1 || y_proxy.size() != n + 1) {
        throw std::invalid_argument("build_varphi_table: tables must have n_steps+1 entries");
    }
    const double dt = grid.dt();
    auto lerp = [dt](std::span<const double> tab, double t) {
        const double pos = t / dt;
        const auto k = std::min(static_cast<std::size_t>(pos), tab.size() - 2);
        const double w = pos - static_cast<double>(k);
        return (1.0 - w) * tab[k] + w * tab[k + 1];
    };
    std::vector<double> varphi(n + 1, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        const double lo = grid.time(static_cast<int>(k));
        const double hi = grid.time(static_cast<int>(k) + 1);
        const double piece = integrate(
            [&](double u) {
                return Kcal_fn(p, cfg, law, variant, u, vasicek_mean(p, u), lerp(y_proxy, u),
                               lerp(phi_table, u));
            },
            lo, hi, 1e-12);
        varphi[k] = varphi[k + 1] - piece;  // varphi(t) = -int_t^T Kcal
    }
    varphi.back() = 0.0;
    return varphi;
}

std::vector<double> ode_oracle(const MarketParams& p, const PlanConfig& cfg,
                               const SimulationGrid& grid, StrategyVariant variant,
                               double terminal, const std::function<double(double)>* M_override) {
    // r phi' + M phi + (1/2) sigma_r^2 phi^2 = 0 integrated backward from
    // phi(T) = terminal. M is evaluated with zero phi-feedback; the
    // sigma_r sigma_I phi term inside pi2 shifts M by < 1e-6 here.
    const auto Mv = [&](double t) {
        return M_override ? (*M_override)(t) : M_fn(p, cfg, variant, t, 0.0);
    };
    const auto slope = [&](double t, double v) {
        const double rv = vasicek_mean(p, t);
        if (!(rv > 0.0)) throw std::domain_error("ode_oracle: proxy rate nonpositive");
        return -(Mv(t) * v + 0.5 * p.sigma_r * p.sigma_r * v * v) / rv;
    };
    const auto n = static_cast<std::size_t>(grid.n_steps);
    const double h = grid.dt();
    if (!(h > 1e-12)) throw std::runtime_error("ode_oracle: step size underflow");
    std::vector<double> phi(n + 1);
    phi[n] = terminal;
    for (std::size_t k = n; k-- > 0;) {
        const double t1 = grid.time(static_cast<int>(k) + 1);
        const double v = phi[k + 1];
        const double k1 = slope(t1, v);
        const double k2 = slope(t1 - 0.5 * h, v - 0.5 * h * k1);
        const double k3 = slope(t1 - 0.5 * h, v - 0.5 * h * k2);
        const double k4 = slope(t1 - h, v - h * k3);
        phi[k] = v - h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return phi;
}

StrategyVector StrategyPolicy::at(double t, double r_observed) const {
    const double phi_t = aux_->phi_at(t);
    if (variant_ == StrategyVariant::FocOracle) {
        return foc_solve(*p_, *cfg_, t, r_observed, phi_t);
    }
    return StrategyVector{pi1_star(*p_, *cfg_, t),
                          pi2_star(*p_, *cfg_, t, r_observed, phi_t, variant_),
                          pi3_star(*p_, *cfg_, t, r_observed)};
}

}  // namespace pensiondc
