#pragma once

// Shared fixtures for the test suite: the two canonical systems used
// throughout (E1: elliptic quadratic part with omega = (2, -1) plus the
// resonant cubic; E2: E1 plus the integrable quartic 4 I_1^2) and helpers
// that run the pipeline stages needed by a test.

#include <string>

#include "ocurve/normal_form.hpp"
#include "ocurve/pipeline.hpp"
#include "ocurve/reduced_system.hpp"
#include "ocurve/resonance.hpp"

namespace octest {

inline const char* kE1Text =
    "n 2\n"
    "term 1/1 2 0 0 0\n"
    "term 1/1 0 0 2 0\n"
    "term -1/2 0 2 0 0\n"
    "term -1/2 0 0 0 2\n"
    "term 1/1 1 2 0 0\n"
    "term -1/1 1 0 0 2\n"
    "term -2/1 0 1 1 1\n";

inline const char* kE2Text =
    "n 2\n"
    "term 1/1 2 0 0 0\n"
    "term 1/1 0 0 2 0\n"
    "term -1/2 0 2 0 0\n"
    "term -1/2 0 0 0 2\n"
    "term 1/1 1 2 0 0\n"
    "term -1/1 1 0 0 2\n"
    "term -2/1 0 1 1 1\n"
    "term 1/1 4 0 0 0\n"
    "term 2/1 2 0 2 0\n"
    "term 1/1 0 0 4 0\n";

inline ocl::CartesianPolynomial e1() { return ocl::parseSpec(kE1Text).polynomial(); }
inline ocl::CartesianPolynomial e2() { return ocl::parseSpec(kE2Text).polynomial(); }

struct Reduction {
    ocl::ResonanceStructure res;
    ocl::NormalFormResult nf;
    ocl::ReducedSystem sys;
};

// Resonance -> normal form -> rays -> reduced coefficients for one of the
// canonical systems, on the gamma > 0 ray.
inline Reduction reduce(const ocl::CartesianPolynomial& h, int degree = 0) {
    Reduction out;
    out.res = ocl::checkH1H2(ocl::frequenciesFromQuadraticPart(h));
    if (degree == 0) degree = 3 * out.res.N;
    out.nf = ocl::birkhoffNormalize(h, out.res, degree);
    auto psi = ocl::buildPsi(out.nf, out.res);
    auto rays = ocl::findRays(psi);
    ocl::KBundle bundle(out.nf, out.res, ocl::buildLinearChange(out.res));
    double gamma = ocl::computeGamma(bundle, rays.plus.c);
    out.sys = ocl::computeCoefficients(bundle, out.res, gamma, rays.plus.c);
    return out;
}

}  // namespace octest
