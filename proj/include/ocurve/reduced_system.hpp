#pragma once

#include <vector>

#include "ocurve/normal_form.hpp"
#include "ocurve/poisson_series.hpp"
#include "ocurve/resonance.hpp"

namespace ocl {

// The linear symplectic change (I, theta) -> (J, psi) = (A1 I, A2 theta):
// J_1 = k_1 I_1, J_a = k_1 I_a - k_a I_1, psi_1 = <theta, k> / k_1^2,
// psi_a = theta_a / k_1. A2 is the inverse transpose of A1.
struct LinearChange {
    int n = 0;
    std::vector<std::vector<Rational>> a1;
    std::vector<std::vector<Rational>> a2;
    std::vector<std::vector<Rational>> a1Inverse;

    std::vector<Rational> actionsFromJ(const std::vector<Rational>& j) const;   // I = A1^{-1} J
    std::vector<double> actionsFromJ(const std::vector<double>& j) const;
    std::vector<double> anglesFromPsi(const std::vector<double>& psi) const;    // theta = A1^T psi
    std::vector<double> jFromActions(const std::vector<double>& actions) const; // J = A1 I
    std::vector<double> psiFromAngles(const std::vector<double>& angles) const; // psi = A2 theta
};

LinearChange buildLinearChange(const ResonanceStructure& res);

// Evaluators for K(J, psi) = H^B(A1^{-1} J, A2^{-1} psi) and its partial
// derivatives, built once per (series, derivative order) and then cheap to
// evaluate pointwise.
class KBundle {
public:
    KBundle() = default;
    KBundle(const NormalFormResult& nf, const ResonanceStructure& res, LinearChange lc);

    int n() const { return n_; }
    const LinearChange& linearChange() const { return lc_; }

    // Value / partials of a single block at (J, psi1). jOrder1 counts
    // d/dJ_1 applications, psiOrder counts d/dpsi_1, jHatIndex >= 1 asks
    // for one d/dJ_a in addition (at most one transverse derivative).
    double integrable(int j, const std::vector<double>& J, int jOrder1 = 0,
                      int jHatIndex = 0) const;
    double resonant(int r, const std::vector<double>& J, double psi1, int jOrder1 = 0,
                    int psiOrder = 0, int jHatIndex = 0) const;

    // Full-field pieces for the equations of motion at (J, psi1):
    // dKR/dpsi1, Omega_1 + dKR/dJ_1, and the transverse vector
    // OmegaHat + dKR/dJHat.
    double totalDPsi1(const std::vector<double>& J, double psi1) const;
    double totalDJ1(const std::vector<double>& J, double psi1) const;
    std::vector<double> totalDJHat(const std::vector<double>& J, double psi1) const;

    int maxIntegrableOrder() const { return maxIntegrable_; }
    int maxResonantOrder() const { return maxResonant_; }

private:
    double evalSeries(const PoissonSeries& s, const std::vector<double>& J, double psi1) const;
    PoissonSeries dJ1(const PoissonSeries& s) const;
    PoissonSeries dJHat(const PoissonSeries& s, int a) const;
    PoissonSeries dPsi1(const PoissonSeries& s) const;

    int n_ = 0;
    int k1_ = 1;
    std::vector<int> k_;
    LinearChange lc_;
    std::vector<PoissonSeries> integrable_;  // index j (0 unused)
    std::vector<PoissonSeries> resonant_;    // index r; includes the 2k block at r = N
    PoissonSeries total_;                    // all blocks together
    PoissonSeries totalDPsi1_;
    PoissonSeries totalDJ1_;
    std::vector<PoissonSeries> totalDJHat_;
    int maxIntegrable_ = 0;
    int maxResonant_ = 0;
};

// All data of the reduced hyperbolic system: gamma, Gamma, the asymptotic
// coefficients of the ansatz, and the autonomous field with its exact
// remainder-by-subtraction nonlinearities.
struct ReducedSystem {
    int n = 0;
    int N = 0;
    double delta = 0.5;
    int k1 = 1;

    double c = 0.0;       // selected ray root
    double gamma = 0.0;   // dK_0/dpsi_1 (1, 0, c) > 0
    double Gamma = 0.0;   // gamma^{-2/(N-2)}
    double c1 = 0.0, c2 = 0.0;
    double d0 = 0.0, d1 = 0.0, d2 = 0.0;
    std::vector<double> dHat;      // size n-1
    std::vector<double> omegaHat0; // size n-1

    KBundle bundle;
    double epsilon = 0.05;  // radius of the domain N^+

    // Below this z the remainders are returned as exactly 0: the true
    // values are O(z^2) there (far below any tolerance in use), while the
    // subtraction formulas amplify the angle round-off at the ray root by
    // z^(delta - 1), which would otherwise dominate.
    double tailCutoff = 1e-6;

    int stateDim() const { return 2 * n + 1; }

    // State layout: (z, xi_1, xiHat[n-1], eta_1, etaHat[n-1]).
    std::vector<double> field(const std::vector<double>& s) const;
    std::vector<std::vector<double>> jacobianAtOrigin() const;

    // The nonlinear remainders U = (U1, UHat), V = (V1, VHat) obtained by
    // subtracting the linear part from the transformed equations of motion.
    struct Remainders {
        double u1 = 0.0;
        std::vector<double> uHat;
        double v1 = 0.0;
        std::vector<double> vHat;
    };
    Remainders remainders(const std::vector<double>& s) const;

    // (J, psi) point of the substitution at reduced state s and the value
    // z; psiHat uses omegaHat0 + etaHat scaled by z^{-(N-2)/2}.
    void substitution(const std::vector<double>& s, std::vector<double>& J,
                      std::vector<double>& psi) const;

    bool insideDomain(const std::vector<double>& s) const;
};

// Computes gamma for a candidate ray root; sign selects the branch.
double computeGamma(const KBundle& bundle, double rayRoot);

// Assembles all Proposition-style coefficients. Requires gamma > 0 (the
// negative branch is handled upstream by negating the Hamiltonian).
ReducedSystem computeCoefficients(const KBundle& bundle, const ResonanceStructure& res,
                                  double gamma, double rayRoot);

}  // namespace ocl
