#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pensiondc/market.hpp"
#include "pensiondc/mortality.hpp"
#include "pensiondc/sde.hpp"

namespace pensiondc {

struct PlanConfig {
    double delta = 0.12;  // contribution rate, in (0,1)
    double kappa = 0.1;   // safe-asset floor, in [0,1)
    double alpha = -3.0;  // power-utility exponent, < 1 and != 0
    double Y0 = 10.0;     // initial relative wealth
    double theta = 0.0;   // information delay in years, >= 0

    void validate() const;
};

// Portfolio proportions in (inflation-linked bond, zero coupon bond, stock).
struct StrategyVector {
    double pi1 = 0.0;
    double pi2 = 0.0;
    double pi3 = 0.0;
};

inline double safe_weight(const StrategyVector& v, double kappa) {
    return 1.0 - kappa - v.pi1 - v.pi2 - v.pi3;
}

// The printed closed forms carry two slips relative to the first-order
// conditions they were derived from (a sigma*sigma_S vs sigma^2 denominator
// in pi3 and an extra xi plus a factor 2 in pi2). FocOracle solves the
// first-order-condition system itself; PaperVerbatim evaluates the printed
// formulas as displayed.
enum class StrategyVariant { FocOracle, PaperVerbatim };

// pi1* = (xi + sigma1(t)) / ((alpha - 1) sigma_I(t)); shared by both variants.
double pi1_star(const MarketParams& p, const PlanConfig& cfg, double t);

// Printed closed form: (mu_S - sigma_S sigma2 + xi sigma_S + (1-alpha) sigma
// sigma2) / ((1-alpha) sigma sigma_S), with mu_S = r + mu(t).
double pi3_star(const MarketParams& p, const PlanConfig& cfg, double t, double r);

// Same numerator over (1-alpha) sigma(t)^2 (what the condition system gives).
double pi3_foc(const MarketParams& p, const PlanConfig& cfg, double t, double r);

// Zero-coupon bond weight; needs phi(t) from the backward system. FocOracle
// divides the common bracket by (alpha-1) sigma_I bond_exposure(t);
// PaperVerbatim applies the printed 2a/((alpha-1) sigma_r sigma_I xi (1 -
// e^{-a(T-t)})) prefactor. Throws at t = T and, under PaperVerbatim, xi = 0.
double pi2_star(const MarketParams& p, const PlanConfig& cfg, double t, double r,
                double phi_t, StrategyVariant variant = StrategyVariant::FocOracle);

// Solves the 3x3 linear system obtained by substituting the ansatz relations
// for (B1*, B2*, B3*) into the three first-order conditions and dividing out
// A1* > 0. The system is triangular:
//   condition 2:  (alpha-1) sigma_I pi1                    = xi + sigma1
//   condition 3:  (alpha-1) sigma_I sigma_S pi1 + (alpha-1) sigma^2 pi3
//                 = sigma_S(sigma1+sigma2) - mu_S + (alpha-1) sigma sigma2
//   condition 1:  -(alpha-1) sigma_I E_b pi2 + (alpha-1) sigma_I sigma_S pi3
//                 = -mu_I + (alpha-1) sigma_I sigma1 - sigma_I sigma_r phi
// with E_b = bond_exposure(t). Throws std::domain_error naming the vanishing
// pivot when alpha = 1, sigma_I = 0, sigma = 0 or t = T.
StrategyVector foc_solve(const MarketParams& p, const PlanConfig& cfg, double t, double r,
                         double phi_t);

// phi and varphi sampled on a grid, with the terminal entries exactly zero.
struct AuxTables {
    SimulationGrid grid;
    std::vector<double> phi;     // phi(t_k), the rate-slope of the ansatz exponent
    std::vector<double> varphi;  // varphi(t_k), the time part

    double phi_at(double t) const;
    double varphi_at(double t) const;
};

// phi per the displayed solution, evaluated along the deterministic proxy
// path r(s) = E[r(s)]:
//   phi(t) = (1/2) sigma_r^2 exp{-int_t^T M(s)/r(s) ds} int_t^T ds/r(s)
// M depends on pi2* which depends on phi, so the table is computed by fixed
// point from phi = 0 (the feedback term sigma_r sigma_I phi is tiny).
std::vector<double> build_phi_table(const MarketParams& p, const PlanConfig& cfg,
                                    const SimulationGrid& grid, StrategyVariant variant);

// M(t) = a(r_bar - r) + (1/2)(alpha-1) sigma_r (pi3 sigma_S - E_b pi2 - sigma1),
// along the mean-rate proxy path, with the variant's strategy.
double M_fn(const MarketParams& p, const PlanConfig& cfg, StrategyVariant variant,
            double t, double phi_t);

// The displayed phi solution for caller-supplied M(t) and r(t); the degenerate
// closed-form cases (M = 0, constant r) go through here.
std::vector<double> phi_formula_custom(const SimulationGrid& grid, double sigma_r,
                                       const std::function<double(double)>& M,
                                       const std::function<double(double)>& r);

// Q(t) = kappa r + mu_ell - beta - sigma1^2 - sigma2^2.
double Q_fn(const MarketParams& p, const PlanConfig& cfg, const MortalityLaw& law,
            double t, double r);

// Displayed K(t); y is the deterministic relative-wealth proxy at t.
double K_fn(const MarketParams& p, const PlanConfig& cfg, const MortalityLaw& law,
            StrategyVariant variant, double t, double r, double y, double phi_t);

// Kcal(t) = K - [Q + (alpha-1)(pi1 sigma1 sigma_I + sigma2(pi3 sigma_S - sigma2))].
double Kcal_fn(const MarketParams& p, const PlanConfig& cfg, const MortalityLaw& law,
               StrategyVariant variant, double t, double r, double y, double phi_t);

// varphi(t) = -int_t^T Kcal(s) ds by quadrature along the mean-rate path and
// the supplied relative-wealth proxy y_proxy (one value per grid node).
std::vector<double> build_varphi_table(const MarketParams& p, const PlanConfig& cfg,
                                       const MortalityLaw& law, const SimulationGrid& grid,
                                       StrategyVariant variant,
                                       std::span<const double> phi_table,
                                       std::span<const double> y_proxy);

// Classical RK4 backward integration of  r phi' + M phi + (1/2) sigma_r^2 phi^2 = 0
// from phi(T) = terminal, along r(s) = E[r(s)]. With terminal = 0 the exact
// solution is identically zero, which quantifies the gap to the displayed
// formula. M_override, when set, replaces M_fn (used by the closed-form tests).
std::vector<double> ode_oracle(const MarketParams& p, const PlanConfig& cfg,
                               const SimulationGrid& grid, StrategyVariant variant,
                               double terminal = 0.0,
                               const std::function<double(double)>* M_override = nullptr);

// Strategy evaluation under the sub-filtration: the caller passes the state
// observed at time max(0, t - theta); formulas are evaluated at calendar
// time t with the delayed rate.
class StrategyPolicy {
public:
    StrategyPolicy(const MarketParams& p, const PlanConfig& cfg, StrategyVariant variant,
                   const AuxTables& aux)
        : p_(&p), cfg_(&cfg), variant_(variant), aux_(&aux) {}

    StrategyVector at(double t, double r_observed) const;
    StrategyVector at(double t, const PathState& observed) const { return at(t, observed.r); }

    StrategyVariant variant() const { return variant_; }
    const AuxTables& aux() const { return *aux_; }

private:
    const MarketParams* p_;
    const PlanConfig* cfg_;
    StrategyVariant variant_;
    const AuxTables* aux_;
};

}  // namespace pensiondc
