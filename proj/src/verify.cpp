#include "ocurve/verify.hpp"

#include <cmath>
#include <stdexcept>

#include "ocurve/errors.hpp"

namespace ocl {

namespace {

double wrapToHalf(double value, double period) {
    double w = std::fmod(value, period);
    if (w < -period / 2) w += period;
    if (w >= period / 2) w -= period;
    return w;
}

}  // namespace

VerificationReport verifyOCurve(const CartesianPolynomial& h, const OCurve& curve,
                                const NormalFormResult& nf, const ReducedSystem& sys,
                                const VerifyConfig& config) {
    if (curve.samples.size() < 4) throw std::invalid_argument("curve has too few samples");
    const int n = sys.n;
    const LinearChange& lc = sys.bundle.linearChange();

    std::vector<double> times;
    times.reserve(curve.samples.size());
    for (const auto& s : curve.samples) times.push_back(s.t);

    VerificationReport rep;
    rep.trajectory = integrateTimes(hamiltonianFlow(h), curve.samples.front().x, times,
                                    config.integrator);
    rep.trajectory.frame = "cartesian";

    PolyEval energy(h);
    const double h0 = energy(curve.samples.front().x);
    // The curve lives on the zero-energy level, so |H| itself is near the
    // cancellation floor; drift is measured relative to the size of the
    // individual Hamiltonian terms at the initial point instead.
    double energyScale = 0.0;
    for (const auto& [e, c] : h.terms()) {
        double mag = std::abs(toDouble(c));
        for (size_t i = 0; i < e.size(); ++i)
            mag *= std::pow(std::abs(curve.samples.front().x[i]), e[i]);
        energyScale += mag;
    }
    const double period = 2.0 * M_PI / (sys.k1 * sys.k1);

    std::vector<double> absT, j1Vals, gapVals;
    double jHatScaledMax = 0.0, maxDrift = 0.0, maxRelDev = 0.0, maxGap = 0.0;
    for (size_t i = 0; i < rep.trajectory.samples.size(); ++i) {
        const auto& ts = rep.trajectory.samples[i];
        std::vector<double> y(static_cast<size_t>(2 * n), 0.0);
        for (int c = 0; c < 2 * n; ++c)
            y[static_cast<size_t>(c)] = nf.inverseMap[static_cast<size_t>(c)].evaluate(ts.state);
        std::vector<double> actions(static_cast<size_t>(n), 0.0);
        std::vector<double> angles(static_cast<size_t>(n), 0.0);
        for (int c = 0; c < n; ++c) {
            double a = y[static_cast<size_t>(c)], b = y[static_cast<size_t>(c + n)];
            actions[static_cast<size_t>(c)] = 0.5 * (a * a + b * b);
            angles[static_cast<size_t>(c)] = std::atan2(b, a);
        }
        std::vector<double> J = lc.jFromActions(actions);
        std::vector<double> psi = lc.psiFromAngles(angles);

        double tAbs = std::abs(ts.t);
        double gap = std::abs(wrapToHalf(psi[0] - sys.c, period));
        absT.push_back(tAbs);
        j1Vals.push_back(J[0]);
        gapVals.push_back(gap);
        rep.measuredJ1.push_back(J[0]);
        rep.measuredPsiGap.push_back(gap);
        maxGap = std::max(maxGap, gap);

        double scale = std::pow(tAbs, (sys.N + 2.0) / (sys.N - 2.0));
        for (int a = 1; a < n; ++a)
            jHatScaledMax = std::max(jHatScaledMax,
                                     std::abs(J[static_cast<size_t>(a)]) * scale);
        maxDrift = std::max(maxDrift, std::abs(energy(ts.state) - h0));

        double predicted = curve.samples[i].J[0];
        if (predicted > 0.0)
            maxRelDev = std::max(maxRelDev, std::abs(J[0] - predicted) / predicted);
    }

    rep.expectedJ1Exponent = -2.0 / (sys.N - 2);
    rep.expectedJ1Amplitude =
        sys.Gamma * std::pow(2.0 / (sys.N - 2), 2.0 / (sys.N - 2));
    rep.j1Fit = fitPowerLaw(absT, j1Vals);
    rep.j1Pass = std::abs(rep.j1Fit.exponent - rep.expectedJ1Exponent) <= config.exponentTol &&
                 std::abs(rep.j1Fit.amplitude / rep.expectedJ1Amplitude - 1.0) <=
                     config.amplitudeRelTol &&
                 rep.j1Fit.rSquared >= 0.999;

    rep.expectedPsiExponent = -2.0 * sys.delta / (sys.N - 2);
    rep.maxPsiGap = maxGap;
    if (maxGap <= config.psiGapFloor) {
        // The generic leading term of psi_1 - c has coefficient c_1; when it
        // vanishes the gap sits at numerical noise (round-off amplified by
        // the transversal instability over the window, roughly
        // eps * (tmax/t0)^{(N+2)/(N-2)}) and the power law is an upper bound
        // satisfied trivially.
        rep.psiGapAtFloor = true;
        rep.psiPass = true;
    } else {
        std::vector<double> ft, fv;
        for (size_t i = 0; i < gapVals.size(); ++i)
            if (gapVals[i] > 0.0) {
                ft.push_back(absT[i]);
                fv.push_back(gapVals[i]);
            }
        if (ft.size() >= 3) {
            rep.psiGapFit = fitPowerLaw(ft, fv);
            rep.psiPass =
                std::abs(rep.psiGapFit.exponent - rep.expectedPsiExponent) <= config.exponentTol;
        }
    }

    rep.jHatScaledMax = jHatScaledMax;
    rep.energyDriftRel = maxDrift / std::max({std::abs(h0), energyScale, 1e-300});
    rep.driftPass = rep.energyDriftRel <= config.energyDriftTol;
    rep.maxRelDevJ1 = maxRelDev;
    rep.deviationPass = maxRelDev <= config.j1DeviationTol;
    rep.pass = rep.j1Pass && rep.psiPass && rep.driftPass && rep.deviationPass;
    return rep;
}

}  // namespace ocl
