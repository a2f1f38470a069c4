#pragma once

#include <vector>

#include "ocurve/fitting.hpp"
#include "ocurve/integrator.hpp"
#include "ocurve/normal_form.hpp"
#include "ocurve/ocurve_build.hpp"
#include "ocurve/reduced_system.hpp"

namespace ocl {

struct VerifyConfig {
    IntegratorConfig integrator;
    double exponentTol = 0.05;
    double amplitudeRelTol = 0.05;
    double j1DeviationTol = 0.05;
    double energyDriftTol = 1e-9;
    // |psi_1 - c| below this is treated as at the measurement floor: the
    // predicted coefficient of the leading decay term may vanish (c_1 = 0),
    // in which case the gap decays faster than the generic law and only an
    // upper bound is checkable.
    double psiGapFloor = 1e-5;
};

struct VerificationReport {
    // J_1 power law against the ansatz z*Gamma ~ Gamma (2/((N-2)t))^(2/(N-2)).
    FitResult j1Fit;
    double expectedJ1Exponent = 0.0;
    double expectedJ1Amplitude = 0.0;
    bool j1Pass = false;

    // |psi_1 - c| decay, generic exponent -2 delta/(N-2).
    FitResult psiGapFit;  // meaningful only when !psiGapAtFloor
    double expectedPsiExponent = 0.0;
    double maxPsiGap = 0.0;
    bool psiGapAtFloor = false;
    bool psiPass = false;

    // Transverse actions: max |JHat| * t^((N+2)/(N-2)) over the window.
    double jHatScaledMax = 0.0;

    double energyDriftRel = 0.0;
    bool driftPass = false;

    // Max relative deviation of integrated J_1 from the curve's prediction.
    double maxRelDevJ1 = 0.0;
    bool deviationPass = false;

    bool pass = false;

    Trajectory trajectory;            // integrated original system
    std::vector<double> measuredJ1;   // aligned with trajectory samples
    std::vector<double> measuredPsiGap;
};

// Integrates the original system from the curve's earliest sample (forward
// for O+, backward for O-), measures (J_1, psi_1) through the inverse
// normalizing map and the linear change, and checks the asymptotic laws.
VerificationReport verifyOCurve(const CartesianPolynomial& h, const OCurve& curve,
                                const NormalFormResult& nf, const ReducedSystem& sys,
                                const VerifyConfig& config = {});

}  // namespace ocl
