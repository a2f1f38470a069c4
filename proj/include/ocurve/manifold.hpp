#pragma once

#include <functional>
#include <vector>

#include "ocurve/reduced_system.hpp"

namespace ocl {

struct ManifoldConfig {
    double horizon = 0.0;         // 0: default 20 / (smallest stable rate)
    double step = 0.01;           // tau-grid spacing
    double tolerance = 1e-12;     // fixed-point sup-norm tolerance
    int maxIterations = 100;
    std::vector<double> unstableSeed;  // optional initial guess, size n
    double shootingHorizon = 0.0;      // 0: default min(horizon, 16 / smallest unstable rate)
};

struct ConvergenceReport {
    int iterations = 0;
    double contractionRatio = 0.0;
    double residual = 0.0;
};

// One point of the local stable manifold: the graph value (xiHat0, eta10)
// over the stable parameters (z0, xi10, etaHat0), together with the
// converged trajectory grid (full states over tau in [0, T]).
struct ManifoldChart {
    double z0 = 0.0;
    double xi10 = 0.0;
    std::vector<double> etaHat0;     // size n-1
    std::vector<double> graphValue;  // (xiHat0 [n-1], eta10), size n
    ConvergenceReport convergence;

    std::vector<double> tau;
    std::vector<std::vector<double>> states;  // full (2n+1)-states on the tau grid
};

using FieldFn = std::function<std::vector<double>(const std::vector<double>&)>;

// Lyapunov-Perron fixed point for a field with the reduced-system state
// layout (z, xi_1, xiHat, eta_1, etaHat) and block-triangular linearization
// `jacobian` at the origin. epsilon bounds the admissible chart data.
ManifoldChart stableManifoldPointGeneric(int n, const std::vector<std::vector<double>>& jacobian,
                                         const FieldFn& field, double epsilon, double z0,
                                         double xi10, const std::vector<double>& etaHat0,
                                         const ManifoldConfig& config = {});

ManifoldChart stableManifoldPoint(const ReducedSystem& sys, double z0, double xi10,
                                  const std::vector<double>& etaHat0,
                                  const ManifoldConfig& config = {});

// Independent cross-check: damped Newton on the initial unstable
// coordinates so that the decoupled unstable component at the shooting
// horizon vanishes. Returns (xiHat0, eta10).
std::vector<double> shootGraphValue(const ReducedSystem& sys, double z0, double xi10,
                                    const std::vector<double>& etaHat0,
                                    const ManifoldConfig& config = {});

}  // namespace ocl
