#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ocurve/polynomial.hpp"

namespace ocl {

struct IntegratorConfig {
    double relTol = 1e-11;
    double absTol = 1e-13;
    double initialStep = 1e-3;
    double minStep = 1e-14;
    double maxStep = 1e18;
    long maxSteps = 50'000'000;
};

struct TrajectorySample {
    double t = 0.0;
    std::vector<double> state;
};

struct Trajectory {
    std::string frame;
    std::vector<TrajectorySample> samples;
};

using OdeRhs = std::function<void(double t, const std::vector<double>& x, std::vector<double>& dx)>;

// Fast numeric evaluator compiled from an exact polynomial.
class PolyEval {
public:
    PolyEval() = default;
    explicit PolyEval(const CartesianPolynomial& p);
    double operator()(const std::vector<double>& x) const;

private:
    struct Term {
        std::vector<int> exps;
        double coeff = 0.0;
    };
    std::vector<Term> terms_;
};

// Hamiltonian vector field dx_i/dt = dH/dx_{i+n}, dx_{i+n}/dt = -dH/dx_i
// with the gradient compiled once.
OdeRhs hamiltonianFlow(const CartesianPolynomial& h);

// Dormand-Prince 5(4) adaptive step from t0 to t1 (either direction).
std::vector<double> integrateTo(const OdeRhs& rhs, double t0, std::vector<double> x0, double t1,
                                const IntegratorConfig& config = {});

// Integrates through the strictly monotone time list, recording the state
// at each entry (the first entry is the initial time).
Trajectory integrateTimes(const OdeRhs& rhs, const std::vector<double>& x0,
                          const std::vector<double>& times, const IntegratorConfig& config = {});

}  // namespace ocl
