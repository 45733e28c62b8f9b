#include "pensiondc/market.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pensiondc {

StepFunction::StepFunction(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    if (knots_.empty() || knots_.size() != values_.size()) {
        throw std::invalid_argument("StepFunction: knots and values must be nonempty and equal-sized");
    }
    if (!std::is_sorted(knots_.begin(), knots_.end())) {
        throw std::invalid_argument("StepFunction: knots must be ascending");
    }
    if (knots_.front() != 0.0) {
        throw std::invalid_argument("StepFunction: first knot must be 0");
    }
}

double StepFunction::operator()(double t) const {
    if (values_.size() == 1) return values_[0];
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const auto idx = static_cast<std::size_t>(std::distance(knots_.begin(), it));
    return values_[idx == 0 ? 0 : idx - 1];
}

double StepFunction::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

void MarketParams::validate() const {
    if (!(a > 0.0)) throw std::invalid_argument("market.a must be positive");
    if (!(sigma_r > 0.0)) throw std::invalid_argument("market.sigma_r must be positive");
    if (!(T > 0.0)) throw std::invalid_argument("market.T must be positive");
    if (!(r_bar > 0.0)) throw std::invalid_argument("market.r_bar must be positive");
    if (!(ell0 > 0.0)) throw std::invalid_argument("market.ell0 must be positive");
    if (!(sigma_I.min_value() > 0.0)) throw std::invalid_argument("market.sigma_I must be positive on [0,T]");
    if (!(sigma.min_value() > 0.0)) throw std::invalid_argument("market.sigma must be positive on [0,T]");
    if (!(sigma_S.min_value() > 0.0)) throw std::invalid_argument("market.sigma_S must be positive on [0,T]");
}

namespace {

void check_time(const MarketParams& p, double t) {
    if (!(t >= 0.0 && t <= p.T)) {
        throw std::domain_error("time outside [0, T]");
    }
}

}  // namespace

double vasicek_mean(const MarketParams& p, double t) {
    check_time(p, t);
    return p.r_bar + (p.r0 - p.r_bar) * std::exp(-p.a * t);
}

double vasicek_variance(const MarketParams& p, double t) {
    check_time(p, t);
    return p.sigma_r * p.sigma_r * (1.0 - std::exp(-2.0 * p.a * t)) / (2.0 * p.a);
}

double bond_exposure(const MarketParams& p, double t) {
    check_time(p, t);
    return p.sigma_r / p.a * (1.0 - std::exp(-p.a * (p.T - t)));
}

CoefficientSet coefficients_at(const MarketParams& p, double t, double r) {
    check_time(p, t);
    if (!std::isfinite(r)) throw std::domain_error("rate must be finite");
    const double eb = bond_exposure(p, t);
    CoefficientSet c{};
    c.bond_drift = r + p.xi * eb;
    c.bond_vol_r = -eb;
    c.infl_drift = r + p.mu_I(t);
    c.infl_vol_I = p.sigma_I(t);
    c.stock_drift = r + p.mu(t);
    c.stock_vol_S = p.sigma(t);
    c.stock_vol_r = p.sigma_S(t);
    c.salary_drift = p.mu_ell(t) + r;
    c.salary_vol_r = p.sigma1(t);
    c.salary_vol_S = p.sigma2(t);
    return c;
}

}  // namespace pensiondc
