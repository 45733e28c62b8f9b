#include "pensiondc/mortality.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pensiondc {

MortalityLaw::MortalityLaw(double tau_, double t0_, int epsilon_, MortalityConvention conv)
    : tau(tau_), t0(t0_), epsilon(epsilon_), convention(conv) {
    if (!(t0 > 0.0)) throw std::invalid_argument("mortality.t0 must be positive");
    if (epsilon != 0 && epsilon != 1) throw std::invalid_argument("mortality.epsilon must be 0 or 1");
    if (!(validity_bound() > 0.0)) {
        throw std::invalid_argument("mortality: tau, t0 leave no validity window");
    }
}

double MortalityLaw::validity_bound() const {
    return convention == MortalityConvention::Corrected ? tau - t0 : tau + t0;
}

double force_of_mortality(const MortalityLaw& law, double t) {
    const double denom = law.validity_bound() - t;
    if (!(denom > 0.0)) {
        throw std::domain_error(
            "force_of_mortality: t >= " + std::to_string(law.validity_bound()) +
            (law.convention == MortalityConvention::Corrected ? " (tau - t0)" : " (tau + t0)"));
    }
    if (t < 0.0) throw std::domain_error("force_of_mortality: t must be nonnegative");
    return 1.0 / denom;
}

double survival_probability(const MortalityLaw& law, double t, double s) {
    if (s < t) throw std::invalid_argument("survival_probability: requires t <= s");
    const double bound = law.validity_bound();
    if (t < 0.0 || !(s < bound)) {
        throw std::domain_error("survival_probability: [t, s] outside validity window");
    }
    return (bound - s) / (bound - t);
}

double expected_survivors(const MortalityLaw& law, double m0, double t) {
    if (m0 < 0.0) throw std::invalid_argument("expected_survivors: m0 must be nonnegative");
    return m0 * survival_probability(law, 0.0, t);
}

}  // namespace pensiondc
