#pragma once

#include <vector>

#include "ocurve/errors.hpp"
#include "ocurve/rational.hpp"

namespace ocl {

// Detected resonance lattice data for a rational frequency vector.
//
// Invariants: <omega, k> = 0 exactly, N = |k| >= 3, M = 3N - 1, every
// resonant h in Z_+^n with |h| <= M is a positive integer multiple of k,
// and k[0] > 0 after the canonical reordering (permutation records the
// index order applied to the input).
struct ResonanceStructure {
    std::vector<Rational> omega;
    std::vector<int> k;
    int N = 0;
    int M = 0;
    bool oddN = false;              // delta = 1/2 if N odd, 1 if N even
    std::vector<Rational> e;        // k / |k|
    std::vector<int> permutation;   // original index of each slot (identity if untouched)

    int n() const { return static_cast<int>(omega.size()); }
    double delta() const { return oddN ? 0.5 : 1.0; }
    int twoDelta() const { return oddN ? 1 : 2; }
    int k1() const { return k.empty() ? 0 : k.front(); }
};

// All h in Z_+^n \ {0} with |h| <= maxOrder and <omega, h> = 0, exactly,
// in lexicographic order.
std::vector<std::vector<int>> findResonances(const std::vector<Rational>& omega, int maxOrder);

// Finds the minimal-order resonant vector, verifies (H1) and the
// unique-direction reading of (H2) up to order M = 3N - 1, and populates
// the structure. Throws PipelineError with NoResonance, OrderTooLow, or
// MultipleDirections (in that priority).
//
// scanBound caps the search for the minimal resonance order.
ResonanceStructure checkH1H2(const std::vector<Rational>& omega, int scanBound = 24);

}  // namespace ocl
