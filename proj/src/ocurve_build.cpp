#include "ocurve/ocurve_build.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ocurve/errors.hpp"

namespace ocl {

namespace {

// Catmull-Rom interpolation of the chart grid at tau.
std::vector<double> chartStateAt(const ManifoldChart& chart, double tau) {
    const int m = static_cast<int>(chart.tau.size()) - 1;
    const double h = chart.tau[1] - chart.tau[0];
    if (tau < chart.tau.front() - 1e-12 || tau > chart.tau.back() + 1e-12)
        throw PipelineError(ErrorCode::OutsideDomain, "time outside the chart horizon");
    double pos = std::clamp(tau / h, 0.0, static_cast<double>(m));
    int i = std::min(static_cast<int>(pos), m - 1);
    double s = pos - i;
    auto at = [&](int j) -> const std::vector<double>& {
        return chart.states[static_cast<size_t>(std::clamp(j, 0, m))];
    };
    const auto &p0 = at(i - 1), &p1 = at(i), &p2 = at(i + 1), &p3 = at(i + 2);
    std::vector<double> out(p1.size());
    for (size_t c = 0; c < out.size(); ++c) {
        double a0 = p1[c];
        double a1 = 0.5 * (p2[c] - p0[c]);
        double a2 = p0[c] - 2.5 * p1[c] + 2.0 * p2[c] - 0.5 * p3[c];
        double a3 = -0.5 * p0[c] + 1.5 * p1[c] - 1.5 * p2[c] + 0.5 * p3[c];
        out[c] = a0 + s * (a1 + s * (a2 + s * a3));
    }
    return out;
}

}  // namespace

double zFromTime(int N, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("z-time map needs t > 0");
    return std::pow(2.0 / ((N - 2) * t), 2.0 / (N - 2));
}

double timeFromZ(int N, double z) {
    if (!(z > 0.0)) throw std::invalid_argument("z-time map needs z > 0");
    return 2.0 / ((N - 2) * std::pow(z, (N - 2) / 2.0));
}

std::vector<double> reducedToCartesian(const ReducedSystem& sys, const NormalFormResult& nf,
                                       const std::vector<double>& state,
                                       std::vector<double>* jOut, std::vector<double>* psiOut) {
    std::vector<double> J, psi;
    sys.substitution(state, J, psi);
    const LinearChange& lc = sys.bundle.linearChange();
    std::vector<double> actions = lc.actionsFromJ(J);
    std::vector<double> angles = lc.anglesFromPsi(psi);

    const int n = sys.n;
    std::vector<double> y(static_cast<size_t>(2 * n), 0.0);
    for (int i = 0; i < n; ++i) {
        double I = actions[static_cast<size_t>(i)];
        if (I < 0.0) {
            if (I > -1e-12 * std::max(1.0, std::abs(J[0])))
                I = 0.0;  // round-off at the channel boundary
            else
                throw PipelineError(ErrorCode::ActionNegative,
                                    "negative action: outside the chart's validity");
        }
        double r = std::sqrt(2.0 * I);
        y[static_cast<size_t>(i)] = r * std::cos(angles[static_cast<size_t>(i)]);
        y[static_cast<size_t>(i + n)] = r * std::sin(angles[static_cast<size_t>(i)]);
    }
    std::vector<double> x(static_cast<size_t>(2 * n), 0.0);
    for (int i = 0; i < 2 * n; ++i) x[static_cast<size_t>(i)] = nf.forwardMap[static_cast<size_t>(i)].evaluate(y);
    if (jOut) *jOut = std::move(J);
    if (psiOut) *psiOut = std::move(psi);
    return x;
}

OCurve buildOCurve(const ReducedSystem& sys, const NormalFormResult& nf,
                   const ManifoldChart& chart, const std::vector<double>& times, int sign) {
    OCurve curve;
    curve.sign = sign;
    curve.familyParam = chart.etaHat0;
    curve.rayRoot = sys.c;
    curve.n = sys.n;
    curve.N = sys.N;
    curve.samples.reserve(times.size());
    for (double t : times) {
        if (!(t > 0.0)) throw std::invalid_argument("sample times must be positive (unsigned)");
        double z = zFromTime(sys.N, t);
        if (!(z <= chart.z0 * (1.0 + 1e-12)))
            throw PipelineError(ErrorCode::OutsideDomain, "time before the chart entry point");
        double tau = std::log(chart.z0 / z);
        OCurveSample sample;
        sample.t = sign * t;
        sample.tau = tau;
        sample.reduced = chartStateAt(chart, tau);
        sample.reduced[0] = z;  // the z-equation is closed; use it exactly
        sample.z = z;
        sample.x = reducedToCartesian(sys, nf, sample.reduced, &sample.J, &sample.psi);
        curve.samples.push_back(std::move(sample));
    }
    return curve;
}

std::vector<double> logSpacedTimes(double t0, double tMax, int count) {
    if (!(t0 > 0.0) || !(tMax > t0) || count < 2) throw std::invalid_argument("bad time window");
    std::vector<double> ts(static_cast<size_t>(count));
    const double ratio = std::log(tMax / t0);
    for (int i = 0; i < count; ++i)
        ts[static_cast<size_t>(i)] = t0 * std::exp(ratio * i / (count - 1));
    ts.back() = tMax;
    return ts;
}

}  // namespace ocl
