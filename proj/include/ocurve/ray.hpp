#pragma once

#include <string>
#include <vector>

#include "ocurve/normal_form.hpp"
#include "ocurve/resonance.hpp"

namespace ocl {

// Channel-of-instability check: H^B_[j](k) = 0 for all integer
// j <= (N-1)/2, evaluated exactly.
struct H3Report {
    bool holds = true;
    std::vector<int> checkedOrders;
    std::vector<Rational> values;  // H^B_[j](k), aligned with checkedOrders
};

H3Report checkH3(const NormalFormResult& nf, const ResonanceStructure& res);

// Psi(sigma) = H^B_[N/2](k) + H_0(k, k1^2 sigma) = A cos[k1^2 (sigma + sigma0)] + B,
// canonicalized to A > 0. For N odd, B = 0.
struct PsiForm {
    double A = 0.0;
    double sigma0 = 0.0;
    double B = 0.0;
    int k1 = 1;

    double value(double sigma) const;
    double derivative(double sigma) const;
    double secondDerivative(double sigma) const;
    double period() const;
};

PsiForm buildPsi(const NormalFormResult& nf, const ResonanceStructure& res);

// A simple zero of Psi with the sign of Psi' at it; sign '+' labels r_+.
struct Ray {
    double c = 0.0;
    int sign = 0;  // +1 or -1, equal to sign(Psi'(c))
    double psiPrimeAtC = 0.0;
};

struct RayPair {
    Ray plus;
    Ray minus;
};

// Both simple zeros in one fundamental period [0, 2pi/k1^2), classified by
// the sign of Psi'. Throws NoSimpleZero when |A| <= |B| (tangency or no
// crossing) and PsiConstant when A vanishes.
RayPair findRays(const PsiForm& psi);

}  // namespace ocl
