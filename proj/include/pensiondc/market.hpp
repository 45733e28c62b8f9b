#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace pensiondc {

// Right-continuous step function of time. A plain constant is the common case;
// knots are times at which the value changes.
class StepFunction {
public:
    StepFunction() : knots_{0.0}, values_{0.0} {}
    explicit StepFunction(double constant) : knots_{0.0}, values_{constant} {}
    StepFunction(std::vector<double> knots, std::vector<double> values);

    static StepFunction constant(double v) { return StepFunction(v); }

    double operator()(double t) const;
    bool is_constant() const { return values_.size() == 1; }
    double min_value() const;
    std::span<const double> knots() const { return knots_; }

private:
    std::vector<double> knots_;   // ascending, knots_[0] == 0
    std::vector<double> values_;  // values_[i] on [knots_[i], knots_[i+1])
};

// All coefficients of the four-factor market: short rate (Vasicek), zero
// coupon bond, inflation-linked bond, stock and salary.
struct MarketParams {
    double a = 0.2;        // mean-reversion speed
    double r_bar = 0.05;   // long-run mean rate
    double sigma_r = 0.02; // rate volatility
    double r0 = 0.03;      // initial rate
    double xi = 0.15;      // market price of interest-rate risk
    StepFunction mu_I{-0.01};   // expected inflation rate
    StepFunction sigma_I{0.015};
    StepFunction mu{0.06};      // stock excess return: mu_S(t) = r + mu(t)
    StepFunction sigma{0.19};   // stock W_S volatility
    StepFunction sigma_S{0.06}; // stock W_r volatility
    StepFunction mu_ell{0.01};  // salary excess growth
    StepFunction sigma1{0.014}; // salary W_r volatility
    StepFunction sigma2{0.171}; // salary W_S volatility
    double ell0 = 100.0;
    double T = 20.0;

    // Throws std::invalid_argument when a > 0, sigma_r > 0, T > 0 or the
    // positivity of sigma_I, sigma, sigma_S on [0,T] is violated.
    void validate() const;
};

// E[r(t)] = r_bar + (r0 - r_bar) e^{-a t}
double vasicek_mean(const MarketParams& p, double t);

// Var[r(t)] = sigma_r^2 (1 - e^{-2 a t}) / (2 a)
double vasicek_variance(const MarketParams& p, double t);

// (sigma_r / a)(1 - e^{-a(T-t)}): the bond's loading on dW_r (with a minus
// sign in the price dynamics). Positive for t < T, zero at maturity.
double bond_exposure(const MarketParams& p, double t);

// Drift/volatility coefficients of P, B, S and ell at (t, r).
struct CoefficientSet {
    double bond_drift;     // r + (sigma_r/a) xi (1 - e^{-a(T-t)})
    double bond_vol_r;     // -bond_exposure(t)
    double infl_drift;     // r + mu_I(t)
    double infl_vol_I;     // sigma_I(t)
    double stock_drift;    // r + mu(t)
    double stock_vol_S;    // sigma(t)
    double stock_vol_r;    // sigma_S(t)
    double salary_drift;   // mu_ell(t) + r
    double salary_vol_r;   // sigma1(t)
    double salary_vol_S;   // sigma2(t)
};

CoefficientSet coefficients_at(const MarketParams& p, double t, double r);

}  // namespace pensiondc
