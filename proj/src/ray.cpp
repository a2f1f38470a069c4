#include "ocurve/ray.hpp"

#include <cmath>

#include "ocurve/errors.hpp"

namespace ocl {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Newton polish from the closed-form root; the zero is simple, so a few
// steps reach machine precision. Falls back to bisection on a local
// bracket if Newton stalls.
double polishRoot(const PsiForm& psi, double x) {
    for (int iter = 0; iter < 50; ++iter) {
        double f = psi.value(x);
        double d = psi.derivative(x);
        if (f == 0.0 || d == 0.0) break;
        double next = x - f / d;
        if (std::abs(next - x) < 1e-16 * std::max(1.0, std::abs(x))) return next;
        x = next;
    }
    double h = 1e-6 * psi.period();
    double lo = x - h, hi = x + h;
    if ((psi.value(lo) > 0) == (psi.value(hi) > 0)) return x;
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        if ((psi.value(mid) > 0) == (psi.value(lo) > 0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double PsiForm::value(double sigma) const {
    return A * std::cos(k1 * k1 * (sigma + sigma0)) + B;
}

double PsiForm::derivative(double sigma) const {
    double k12 = static_cast<double>(k1) * k1;
    return -A * k12 * std::sin(k12 * (sigma + sigma0));
}

double PsiForm::secondDerivative(double sigma) const {
    double k12 = static_cast<double>(k1) * k1;
    return -A * k12 * k12 * std::cos(k12 * (sigma + sigma0));
}

double PsiForm::period() const { return 2.0 * kPi / (static_cast<double>(k1) * k1); }

H3Report checkH3(const NormalFormResult& nf, const ResonanceStructure& res) {
    H3Report report;
    std::vector<Rational> actions;
    actions.reserve(res.k.size());
    for (int ki : res.k) actions.emplace_back(ki);
    for (int j = 1; 2 * j <= res.N - 1; ++j) {
        Rational value = nf.integrablePart(j).evaluateExact(actions);
        report.checkedOrders.push_back(j);
        report.values.push_back(value);
        if (!isZero(value)) report.holds = false;
    }
    return report;
}

PsiForm buildPsi(const NormalFormResult& nf, const ResonanceStructure& res) {
    PsiForm psi;
    psi.k1 = res.k1();

    // B: the constant part, H^B_[N/2](k) (only present for even N).
    double b = 0.0;
    if (res.N % 2 == 0) {
        std::vector<Rational> actions;
        for (int ki : res.k) actions.emplace_back(ki);
        b = toDouble(nf.integrablePart(res.N / 2).evaluateExact(actions));
    }

    // H_0(k, phi) = Ac cos(phi) + As sin(phi) with phi = <theta, k>.
    double ac = 0.0, as = 0.0;
    for (const auto& term : nf.resonantPart(0).terms()) {
        double amp = toDouble(term.coeff);
        for (size_t i = 0; i < term.halfExponents.size(); ++i)
            amp *= PoissonSeries::halfPow(2.0 * res.k[i], term.halfExponents[i]);
        (term.isSin ? as : ac) += amp;
    }

    double a = std::hypot(ac, as);
    if (a == 0.0)
        throw PipelineError(ErrorCode::PsiConstant, "H_0 vanishes at I = k; Psi is constant");
    // Ac cos + As sin = A cos(phi + phi0) with phi0 = atan2(-As, Ac).
    double phi0 = std::atan2(-as, ac);
    psi.A = a;
    psi.B = b;
    double k12 = static_cast<double>(psi.k1) * psi.k1;
    psi.sigma0 = phi0 / k12;
    // Canonical representative of sigma0 in [0, period).
    psi.sigma0 -= psi.period() * std::floor(psi.sigma0 / psi.period());
    return psi;
}

RayPair findRays(const PsiForm& psi) {
    if (psi.A == 0.0) throw PipelineError(ErrorCode::PsiConstant, "Psi has zero amplitude");
    double ratio = -psi.B / psi.A;
    double margin = 1e-8;
    if (std::abs(ratio) >= 1.0 - margin)
        throw PipelineError(ErrorCode::NoSimpleZero,
                            "|A| <= |B|: Psi has a tangency or no crossing");

    double k12 = static_cast<double>(psi.k1) * psi.k1;
    double period = psi.period();
    // Closed-form roots of cos(u) = -B/A, u = k1^2 (sigma + sigma0).
    double u1 = std::acos(ratio);        // sin(u1) >= 0  ->  Psi' < 0 (A > 0)
    double u2 = 2.0 * kPi - u1;          // Psi' > 0
    auto toSigma = [&](double u) {
        double sigma = u / k12 - psi.sigma0;
        sigma -= period * std::floor(sigma / period);
        return sigma;
    };
    auto makeRay = [&](double sigma) {
        double c = polishRoot(psi, sigma);
        c -= period * std::floor(c / period);
        Ray ray;
        ray.c = c;
        ray.psiPrimeAtC = psi.derivative(c);
        ray.sign = ray.psiPrimeAtC > 0 ? +1 : -1;
        return ray;
    };

    Ray a = makeRay(toSigma(u1));
    Ray b = makeRay(toSigma(u2));
    double scale = std::abs(psi.A) + std::abs(psi.B);
    if (std::abs(a.psiPrimeAtC) < 1e-8 * scale || std::abs(b.psiPrimeAtC) < 1e-8 * scale)
        throw PipelineError(ErrorCode::NoSimpleZero, "Psi' below the simplicity tolerance");
    if (a.sign == b.sign) throw PipelineError(ErrorCode::NoSimpleZero, "roots not transversal");

    RayPair pair;
    pair.plus = a.sign > 0 ? a : b;
    pair.minus = a.sign > 0 ? b : a;
    return pair;
}

}  // namespace ocl
