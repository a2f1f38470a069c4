#pragma once

#include <vector>

#include "ocurve/manifold.hpp"
#include "ocurve/normal_form.hpp"
#include "ocurve/reduced_system.hpp"

namespace ocl {

struct OCurveSample {
    double t = 0.0;    // signed time label (negative on O- curves)
    double tau = 0.0;  // chart time, z = z0 exp(-tau)
    double z = 0.0;
    std::vector<double> reduced;  // (z, xi_1, xiHat, eta_1, etaHat)
    std::vector<double> J;
    std::vector<double> psi;
    std::vector<double> x;  // original Cartesian coordinates
};

struct OCurve {
    int sign = +1;  // +1: forward-asymptotic, -1: backward-asymptotic
    std::vector<double> familyParam;  // etaHat0
    double rayRoot = 0.0;
    int n = 0;
    int N = 0;
    std::vector<OCurveSample> samples;
};

// The paper's z <-> t correspondence, z = [2/((N-2) t)]^(2/(N-2)).
double zFromTime(int N, double t);
double timeFromZ(int N, double z);

// Maps one reduced state to original Cartesian coordinates through the
// substitution, the inverse linear change, action-angle, and the forward
// normalizing map. Optionally reports the intermediate (J, psi).
std::vector<double> reducedToCartesian(const ReducedSystem& sys, const NormalFormResult& nf,
                                       const std::vector<double>& state,
                                       std::vector<double>* jOut = nullptr,
                                       std::vector<double>* psiOut = nullptr);

// Samples the chart trajectory at the requested (unsigned) times; labels
// carry `sign`. Every time must land inside the chart's tau range.
OCurve buildOCurve(const ReducedSystem& sys, const NormalFormResult& nf,
                   const ManifoldChart& chart, const std::vector<double>& times, int sign = +1);

// Logarithmically spaced window [t0, tMax].
std::vector<double> logSpacedTimes(double t0, double tMax, int count);

}  // namespace ocl
