#pragma once

#include <string>

namespace pensiondc {

// The source text's force of mortality 1/(tau + t0 - t) is inconsistent with
// the De Moivre survival ratio it quotes; Corrected uses 1/(tau - t0 - t),
// which is the standard law for entry age t0 and limiting age tau. Both ship.
enum class MortalityConvention { PaperVerbatim, Corrected };

struct MortalityLaw {
    double tau = 105.0;  // maximum-age parameter (years)
    double t0 = 25.0;    // entry age (years)
    int epsilon = 1;     // premium-return switch, 0 or 1
    MortalityConvention convention = MortalityConvention::Corrected;

    MortalityLaw() = default;
    MortalityLaw(double tau_, double t0_, int epsilon_, MortalityConvention conv);

    // Upper end of the validity window for t (hazard denominator positive).
    double validity_bound() const;
};

// Hazard at plan time t: Corrected 1/(tau - t0 - t), PaperVerbatim
// 1/(tau + t0 - t). Throws std::domain_error past the validity bound.
double force_of_mortality(const MortalityLaw& law, double t);

// exp{-int_t^s hazard}; closed form (tau' - s)/(tau' - t) with tau' the
// convention's effective limit. Requires t <= s inside the validity window.
double survival_probability(const MortalityLaw& law, double t, double s);

// m0 * survival_probability(0, t)
double expected_survivors(const MortalityLaw& law, double m0, double t);

}  // namespace pensiondc
