#include "ocurve/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "ocurve/errors.hpp"

namespace ocl {

PolyEval::PolyEval(const CartesianPolynomial& p) {
    for (const auto& [e, c] : p.terms()) terms_.push_back({e, toDouble(c)});
}

double PolyEval::operator()(const std::vector<double>& x) const {
    double sum = 0.0;
    for (const auto& term : terms_) {
        double t = term.coeff;
        for (size_t i = 0; i < term.exps.size(); ++i)
            for (int p = 0; p < term.exps[i]; ++p) t *= x[i];
        sum += t;
    }
    return sum;
}

OdeRhs hamiltonianFlow(const CartesianPolynomial& h) {
    if (h.dim() % 2 != 0) throw std::invalid_argument("phase space dimension must be even");
    const int n = h.dim() / 2;
    auto grads = std::make_shared<std::vector<PolyEval>>();
    grads->reserve(static_cast<size_t>(2 * n));
    for (int i = 0; i < 2 * n; ++i) grads->emplace_back(h.derivative(i));
    // Sign convention matching x_i = sqrt(2 I_i) cos(theta_i),
    // x_{n+i} = sqrt(2 I_i) sin(theta_i) with dtheta/dt = +dH/dI:
    // dx_i/dt = -dH/dx_{n+i}, dx_{n+i}/dt = +dH/dx_i.
    return [n, grads](double, const std::vector<double>& x, std::vector<double>& dx) {
        dx.resize(x.size());
        for (int i = 0; i < n; ++i) {
            dx[static_cast<size_t>(i)] = -(*grads)[static_cast<size_t>(i + n)](x);
            dx[static_cast<size_t>(i + n)] = (*grads)[static_cast<size_t>(i)](x);
        }
    };
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = 35.0 / 384 - 5179.0 / 57600, kE3 = 500.0 / 1113 - 7571.0 / 16695,
                 kE4 = 125.0 / 192 - 393.0 / 640, kE5 = -2187.0 / 6784 + 92097.0 / 339200,
                 kE6 = 11.0 / 84 - 187.0 / 2100, kE7 = -1.0 / 40;
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;

struct Stepper {
    const OdeRhs& rhs;
    const IntegratorConfig& cfg;
    size_t dim;
    std::vector<double> k1, k2, k3, k4, k5, k6, k7, tmp, y5;
    bool haveK1 = false;  // FSAL cache

    Stepper(const OdeRhs& f, const IntegratorConfig& c, size_t d) : rhs(f), cfg(c), dim(d) {
        for (auto* v : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &tmp, &y5}) v->resize(dim);
    }

    // Remaining gaps below this are closed by snapping t to the target; at
    // large |t| a few ulp can exceed any fixed absolute step floor.
    double snapTol(double t, double tEnd) const {
        return std::max(cfg.minStep, 4.0 * std::numeric_limits<double>::epsilon() *
                                         std::max(std::abs(t), std::abs(tEnd)));
    }

    // One accepted adaptive step from (t, x); updates t, x, h in place.
    void step(double& t, std::vector<double>& x, double& h, double tEnd, long& count) {
        if (std::abs(tEnd - t) <= snapTol(t, tEnd)) {
            t = tEnd;
            return;
        }
        const double dir = tEnd >= t ? 1.0 : -1.0;
        if (!haveK1) {
            rhs(t, x, k1);
            haveK1 = true;
        }
        for (;;) {
            if (++count > cfg.maxSteps)
                throw PipelineError(ErrorCode::StepUnderflow, "step budget exhausted");
            double hs = dir * std::min(std::abs(h), cfg.maxStep);
            if (std::abs(hs) > std::abs(tEnd - t)) hs = tEnd - t;
            if (std::abs(hs) < cfg.minStep)
                throw PipelineError(ErrorCode::StepUnderflow, "step size underflow");

            auto stage = [&](const std::vector<std::pair<double, const std::vector<double>*>>& w,
                             double cFrac, std::vector<double>& out) {
                for (size_t i = 0; i < dim; ++i) {
                    double acc = x[i];
                    for (const auto& [a, k] : w) acc += hs * a * (*k)[i];
                    tmp[i] = acc;
                }
                rhs(t + cFrac * hs, tmp, out);
            };
            stage({{kA21, &k1}}, kC2, k2);
            stage({{kA31, &k1}, {kA32, &k2}}, kC3, k3);
            stage({{kA41, &k1}, {kA42, &k2}, {kA43, &k3}}, kC4, k4);
            stage({{kA51, &k1}, {kA52, &k2}, {kA53, &k3}, {kA54, &k4}}, kC5, k5);
            stage({{kA61, &k1}, {kA62, &k2}, {kA63, &k3}, {kA64, &k4}, {kA65, &k5}}, 1.0, k6);
            for (size_t i = 0; i < dim; ++i)
                y5[i] = x[i] + hs * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] + kB5 * k5[i] +
                                     kB6 * k6[i]);
            rhs(t + hs, y5, k7);

            double errNorm = 0.0;
            for (size_t i = 0; i < dim; ++i) {
                double e = hs * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                                 kE6 * k6[i] + kE7 * k7[i]);
                double scale = cfg.absTol + cfg.relTol * std::max(std::abs(x[i]), std::abs(y5[i]));
                errNorm += (e / scale) * (e / scale);
            }
            errNorm = std::sqrt(errNorm / static_cast<double>(dim));
            if (!std::isfinite(errNorm))
                throw PipelineError(ErrorCode::NonFiniteState, "non-finite state in integration");

            double factor = errNorm > 0.0 ? 0.9 * std::pow(errNorm, -0.2) : 5.0;
            factor = std::clamp(factor, 0.2, 5.0);
            if (errNorm <= 1.0) {
                t += hs;
                if (std::abs(tEnd - t) <= snapTol(t, tEnd)) t = tEnd;
                x = y5;
                k1 = k7;  // FSAL
                h = std::abs(hs) * factor;
                return;
            }
            h = std::abs(hs) * factor;
        }
    }
};

}  // namespace

std::vector<double> integrateTo(const OdeRhs& rhs, double t0, std::vector<double> x0, double t1,
                                const IntegratorConfig& config) {
    if (t0 == t1) return x0;
    Stepper st(rhs, config, x0.size());
    double t = t0;
    double h = std::abs(config.initialStep);
    long count = 0;
    while (t != t1) st.step(t, x0, h, t1, count);
    return x0;
}

Trajectory integrateTimes(const OdeRhs& rhs, const std::vector<double>& x0,
                          const std::vector<double>& times, const IntegratorConfig& config) {
    if (times.size() < 2) throw std::invalid_argument("need at least two sample times");
    const bool forward = times.back() > times.front();
    for (size_t i = 1; i < times.size(); ++i)
        if (forward ? times[i] <= times[i - 1] : times[i] >= times[i - 1])
            throw std::invalid_argument("sample times must be strictly monotone");

    Trajectory traj;
    traj.samples.push_back({times.front(), x0});
    Stepper st(rhs, config, x0.size());
    double t = times.front();
    std::vector<double> x = x0;
    double h = std::abs(config.initialStep);
    long count = 0;
    for (size_t i = 1; i < times.size(); ++i) {
        while (t != times[i]) st.step(t, x, h, times[i], count);
        traj.samples.push_back({t, x});
    }
    return traj;
}

}  // namespace ocl
