#pragma once

#include <map>
#include <vector>

#include "ocurve/poisson_series.hpp"
#include "ocurve/polynomial.hpp"
#include "ocurve/resonance.hpp"

namespace ocl {

// Output of the resonant Birkhoff normalization.
//
// normalForm is the transformed Hamiltonian in action-angle variables,
// complete through Cartesian degree truncationDegree. integrableParts[j]
// holds the angle-free homogeneous part of degree j in the actions;
// resonantParts[r] the first-harmonic block whose action degree is
// N/2 + r; doubleHarmonicParts the cos/sin(2<theta,k>) block of the
// top resonant order; higherHarmonics collects resonant terms with
// harmonic index q*k, |q| >= 3, which can appear at the truncation
// degree itself.
//
// forwardMap expresses the original coordinates in the new ones,
// x = y + Phi(y); inverseMap is the truncated inverse.
struct NormalFormResult {
    int n = 0;
    int truncationDegree = 0;
    std::vector<Rational> omega;
    std::vector<int> k;

    PoissonSeries normalForm;
    std::map<int, PoissonSeries> integrableParts;   // j -> H^B_[j]
    std::map<int, PoissonSeries> resonantParts;     // r -> H_r (first harmonics)
    PoissonSeries doubleHarmonicParts;              // 2<theta,k> block of H_N
    PoissonSeries higherHarmonics;

    std::vector<CartesianPolynomial> forwardMap;    // x(y), 2n components
    std::vector<CartesianPolynomial> inverseMap;    // y(x), truncated

    // Normal form expressed back in Cartesian variables (exact).
    CartesianPolynomial normalFormCartesian;

    PoissonSeries integrablePart(int j) const {
        auto it = integrableParts.find(j);
        return it == integrableParts.end() ? PoissonSeries(n) : it->second;
    }
    PoissonSeries resonantPart(int r) const {
        auto it = resonantParts.find(r);
        return it == resonantParts.end() ? PoissonSeries(n) : it->second;
    }
};

// Reads the frequency vector off a diagonal elliptic quadratic part,
// H_[2] = sum_i c_i (x_i^2 + x_{i+n}^2), with omega_i = 2 c_i so that the
// action form is exactly <omega, I>. Throws on cross terms or unpaired
// diagonal coefficients.
std::vector<Rational> frequenciesFromQuadraticPart(const CartesianPolynomial& h);

// Lie-transform Birkhoff normalization through Cartesian degree
// truncationDegree (default and maximum 3N). Works order by order in
// complexified variables; homological divisors are i<omega, a-b> and a
// zero divisor on a non-resonant monomial is reported as an error.
NormalFormResult birkhoffNormalize(const CartesianPolynomial& h, const ResonanceStructure& res,
                                   int truncationDegree);

// Partition of an already-normalized series into integrable / resonant
// blocks; throws if a term's harmonic index is not a multiple of k.
void extractComponents(NormalFormResult& nf, const ResonanceStructure& res);

// Max coefficient magnitude of {map_i, map_j} - J_ij truncated at `degree`.
// Exactly 0.0 when the truncated brackets vanish in rational arithmetic.
double symplecticityDefect(const std::vector<CartesianPolynomial>& map, int degree);

}  // namespace ocl
