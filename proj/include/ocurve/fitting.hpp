#pragma once

#include <vector>

namespace ocl {

struct FitResult {
    double exponent = 0.0;
    double amplitude = 0.0;  // value ~ amplitude * t^exponent
    double rSquared = 0.0;
    double windowLo = 0.0;
    double windowHi = 0.0;
};

// Least-squares slope of log(value) against log(t). Both inputs must be
// strictly positive and aligned.
FitResult fitPowerLaw(const std::vector<double>& ts, const std::vector<double>& values);

}  // namespace ocl
