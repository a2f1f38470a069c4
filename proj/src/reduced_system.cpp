#include "ocurve/reduced_system.hpp"

#include <cmath>
#include <stdexcept>

#include "ocurve/errors.hpp"

namespace ocl {

namespace {

// Smallest z at which the remainders are still evaluated; below this the
// origin limit U = V = 0 is used verbatim.
constexpr double kZFloor = 1e-300;

template <class T>
std::vector<T> matVec(const std::vector<std::vector<Rational>>& m, const std::vector<T>& v) {
    std::vector<T> out(m.size(), T(0));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) {
            if (isZero(m[i][j])) continue;
            if constexpr (std::is_same_v<T, Rational>)
                out[i] += m[i][j] * v[j];
            else
                out[i] += toDouble(m[i][j]) * v[j];
        }
    return out;
}

std::vector<std::vector<Rational>> transpose(const std::vector<std::vector<Rational>>& m) {
    std::vector<std::vector<Rational>> t(m.size(), std::vector<Rational>(m.size(), Rational(0)));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m.size(); ++j) t[j][i] = m[i][j];
    return t;
}

}  // namespace

std::vector<Rational> LinearChange::actionsFromJ(const std::vector<Rational>& j) const {
    return matVec<Rational>(a1Inverse, j);
}

std::vector<double> LinearChange::actionsFromJ(const std::vector<double>& j) const {
    return matVec<double>(a1Inverse, j);
}

std::vector<double> LinearChange::anglesFromPsi(const std::vector<double>& psi) const {
    return matVec<double>(transpose(a1), psi);
}

std::vector<double> LinearChange::jFromActions(const std::vector<double>& actions) const {
    return matVec<double>(a1, actions);
}

std::vector<double> LinearChange::psiFromAngles(const std::vector<double>& angles) const {
    return matVec<double>(a2, angles);
}

LinearChange buildLinearChange(const ResonanceStructure& res) {
    const int n = res.n();
    if (n < 2) throw PipelineError(ErrorCode::BadInput, "linear change needs n >= 2");
    const int k1 = res.k1();
    if (k1 <= 0) throw PipelineError(ErrorCode::BadInput, "k_1 must be positive");

    LinearChange lc;
    lc.n = n;
    auto zeros = [&] {
        return std::vector<std::vector<Rational>>(static_cast<size_t>(n),
                                                  std::vector<Rational>(static_cast<size_t>(n),
                                                                        Rational(0)));
    };
    lc.a1 = zeros();
    lc.a2 = zeros();
    lc.a1Inverse = zeros();

    // J_1 = k_1 I_1, J_a = k_1 I_a - k_a I_1.
    lc.a1[0][0] = Rational(k1);
    for (int a = 1; a < n; ++a) {
        lc.a1[a][0] = Rational(-res.k[static_cast<size_t>(a)]);
        lc.a1[a][a] = Rational(k1);
    }
    // I_1 = J_1 / k_1, I_a = J_a / k_1 + k_a J_1 / k_1^2.
    lc.a1Inverse[0][0] = rat(1, k1);
    for (int a = 1; a < n; ++a) {
        lc.a1Inverse[a][0] = rat(res.k[static_cast<size_t>(a)], k1 * k1);
        lc.a1Inverse[a][a] = rat(1, k1);
    }
    // A2 = A1^{-T}: psi_1 = <theta, k> / k_1^2, psi_a = theta_a / k_1.
    lc.a2 = transpose(lc.a1Inverse);

    // Sanity: A1 * A1^{-1} = Id.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rational s(0);
            for (int l = 0; l < n; ++l) s += lc.a1[i][l] * lc.a1Inverse[l][j];
            if (s != Rational(i == j ? 1 : 0))
                throw std::logic_error("linear change inverse check failed");
        }
    return lc;
}

KBundle::KBundle(const NormalFormResult& nf, const ResonanceStructure& res, LinearChange lc)
    : n_(res.n()), k1_(res.k1()), k_(res.k), lc_(std::move(lc)) {
    maxIntegrable_ = nf.integrableParts.empty() ? 0 : nf.integrableParts.rbegin()->first;
    maxResonant_ = nf.resonantParts.empty() ? -1 : nf.resonantParts.rbegin()->first;
    integrable_.assign(static_cast<size_t>(maxIntegrable_) + 1, PoissonSeries(n_));
    resonant_.assign(static_cast<size_t>(std::max(maxResonant_, -1)) + 1, PoissonSeries(n_));
    for (const auto& [j, s] : nf.integrableParts) integrable_[static_cast<size_t>(j)] = s;
    for (const auto& [r, s] : nf.resonantParts) resonant_[static_cast<size_t>(r)] = s;

    total_ = nf.normalForm;
    totalDPsi1_ = dPsi1(total_);
    totalDJ1_ = dJ1(total_);
    totalDJHat_.clear();
    for (int a = 1; a < n_; ++a) totalDJHat_.push_back(dJHat(total_, a));
}

double KBundle::evalSeries(const PoissonSeries& s, const std::vector<double>& J,
                           double psi1) const {
    // I = A1^{-1} J; the angle point theta = (k_1 psi_1, 0, ..., 0) is
    // equivalent to theta = A1^T (psi_1, 0, ..., 0) on every harmonic that
    // is a multiple of k, which covers the whole normal form.
    std::vector<double> actions = lc_.actionsFromJ(J);
    std::vector<double> angles(static_cast<size_t>(n_), 0.0);
    angles[0] = k1_ * psi1;
    return s.evaluateUnchecked(actions, angles);
}

PoissonSeries KBundle::dJ1(const PoissonSeries& s) const {
    // d/dJ_1 = (1/k_1) d/dI_1 + sum_a (k_a / k_1^2) d/dI_a.
    PoissonSeries r = s.derivativeAction(0) * rat(1, k1_);
    for (int a = 1; a < n_; ++a) {
        int ka = k_[static_cast<size_t>(a)];
        if (ka == 0) continue;
        r += s.derivativeAction(a) * rat(ka, k1_ * k1_);
    }
    return r;
}

PoissonSeries KBundle::dJHat(const PoissonSeries& s, int a) const {
    if (a < 1 || a >= n_) throw std::out_of_range("transverse action index");
    return s.derivativeAction(a) * rat(1, k1_);
}

PoissonSeries KBundle::dPsi1(const PoissonSeries& s) const {
    return s.derivativeAngle(0) * Rational(k1_);
}

double KBundle::integrable(int j, const std::vector<double>& J, int jOrder1, int jHatIndex) const {
    if (j < 0 || j > maxIntegrable_) return 0.0;
    PoissonSeries s = integrable_[static_cast<size_t>(j)];
    for (int i = 0; i < jOrder1; ++i) s = dJ1(s);
    if (jHatIndex >= 1) s = dJHat(s, jHatIndex);
    return evalSeries(s, J, 0.0);
}

double KBundle::resonant(int r, const std::vector<double>& J, double psi1, int jOrder1,
                         int psiOrder, int jHatIndex) const {
    if (r < 0 || r > maxResonant_) return 0.0;
    PoissonSeries s = resonant_[static_cast<size_t>(r)];
    for (int i = 0; i < jOrder1; ++i) s = dJ1(s);
    for (int i = 0; i < psiOrder; ++i) s = dPsi1(s);
    if (jHatIndex >= 1) s = dJHat(s, jHatIndex);
    return evalSeries(s, J, psi1);
}

double KBundle::totalDPsi1(const std::vector<double>& J, double psi1) const {
    return evalSeries(totalDPsi1_, J, psi1);
}

double KBundle::totalDJ1(const std::vector<double>& J, double psi1) const {
    return evalSeries(totalDJ1_, J, psi1);
}

std::vector<double> KBundle::totalDJHat(const std::vector<double>& J, double psi1) const {
    std::vector<double> out;
    out.reserve(totalDJHat_.size());
    for (const auto& s : totalDJHat_) out.push_back(evalSeries(s, J, psi1));
    return out;
}

double computeGamma(const KBundle& bundle, double rayRoot) {
    std::vector<double> J(static_cast<size_t>(bundle.n()), 0.0);
    J[0] = 1.0;
    return bundle.resonant(0, J, rayRoot, 0, 1, 0);
}

ReducedSystem computeCoefficients(const KBundle& bundle, const ResonanceStructure& res,
                                  double gamma, double rayRoot) {
    if (!(gamma > 0.0))
        throw PipelineError(ErrorCode::BadInput,
                            "reduced system requires gamma > 0 (negate the Hamiltonian first)");

    ReducedSystem sys;
    sys.n = res.n();
    sys.N = res.N;
    sys.delta = res.delta();
    sys.k1 = res.k1();
    sys.c = rayRoot;
    sys.gamma = gamma;
    sys.Gamma = std::pow(gamma, -2.0 / (res.N - 2));
    sys.bundle = bundle;

    const int N = res.N;
    const double G = sys.Gamma;
    const double c = rayRoot;
    const double k1 = static_cast<double>(res.k1());
    const double k14 = k1 * k1 * k1 * k1;
    std::vector<double> e1(static_cast<size_t>(sys.n), 0.0);
    e1[0] = 1.0;

    if (res.oddN) {
        double dKmid = bundle.integrable((N + 1) / 2, e1, 1);   // dK_[(N+1)/2]/dJ1 (1,0)
        double dK1 = bundle.resonant(1, e1, c, 1, 0);           // dK_1/dJ1 (1,0,c)
        sys.c1 = -2.0 * std::pow(G, (N - 1) / 2.0) / (N + 1) * dKmid;
        sys.c2 = -2.0 * std::pow(G, N / 2.0) / (N + 2) * dK1;
        sys.d0 = std::pow(G, (N + 2) / 2.0) * bundle.resonant(1, e1, c, 0, 1) -
                 G * 0.5 * k14 * sys.c1 * sys.c1;
        sys.d1 = -std::pow(G, (N + 1) / 2.0) * bundle.integrable((N + 3) / 2, e1, 1) -
                 sys.c1 * std::pow(G, N / 2.0) * bundle.resonant(1, e1, c, 1, 1);
        sys.d2 = -(N - 1) / 2.0 * std::pow(G, (N - 3) / 2.0) * dKmid -
                 sys.c1 / G * N * (N - 2) / 4.0;
    } else {
        double dKmid = bundle.integrable(N / 2 + 1, e1, 1);     // dK_[N/2+1]/dJ1 (1,0)
        double dK1 = bundle.resonant(1, e1, c, 1, 0);
        sys.c1 = -2.0 * std::pow(G, N / 2.0) / (N + 2) * (dKmid + dK1);
        sys.c2 = 0.0;
        sys.d0 = std::pow(G, (N + 2) / 2.0) * bundle.resonant(1, e1, c, 0, 1) +
                 sys.c1 * bundle.resonant(0, e1, c, 0, 2);
        sys.d1 = -std::pow(G, N / 2.0 + 1) *
                     (bundle.integrable(N / 2 + 2, e1, 1) + bundle.resonant(2, e1, c, 1, 0)) -
                 sys.c1 * std::pow(G, N / 2.0) * bundle.resonant(1, e1, c, 1, 1) +
                 k14 * sys.c1 * sys.c1 * std::pow(G, (N - 2) / 2.0) *
                     bundle.resonant(0, e1, c, 1, 0);
        sys.d2 = -N / 2.0 * std::pow(G, N / 2.0 - 1) * dKmid - sys.c1 / G * N * (N - 2) / 4.0;
    }

    sys.dHat.assign(static_cast<size_t>(sys.n - 1), 0.0);
    sys.omegaHat0.assign(static_cast<size_t>(sys.n - 1), 0.0);
    for (int a = 1; a < sys.n; ++a) {
        double dh = bundle.integrable(2, e1, 0, a);
        if (N == 4) dh += bundle.resonant(0, e1, c, 0, 0, a);
        sys.dHat[static_cast<size_t>(a - 1)] = G * G * dh;
        sys.omegaHat0[static_cast<size_t>(a - 1)] =
            2.0 / (k1 * (N - 2)) * toDouble(res.omega[static_cast<size_t>(a)]);
    }
    return sys;
}

void ReducedSystem::substitution(const std::vector<double>& s, std::vector<double>& J,
                                 std::vector<double>& psi) const {
    const double z = s[0];
    J.assign(static_cast<size_t>(n), 0.0);
    psi.assign(static_cast<size_t>(n), 0.0);
    const double zd = std::pow(z, delta);
    J[0] = z * (Gamma + s[1]);
    psi[0] = c + zd * (c1 + c2 * zd + s[static_cast<size_t>(n) + 1]);
    const double zhat = std::pow(z, (N + 2) / 2.0);
    const double zpsi = std::pow(z, -(N - 2) / 2.0);
    for (int a = 1; a < n; ++a) {
        J[static_cast<size_t>(a)] = zhat * s[static_cast<size_t>(1 + a)];
        psi[static_cast<size_t>(a)] =
            zpsi * (omegaHat0[static_cast<size_t>(a - 1)] + s[static_cast<size_t>(n + 1 + a)]);
    }
}

bool ReducedSystem::insideDomain(const std::vector<double>& s) const {
    if (!(s[0] >= 0.0) || s[0] >= epsilon) return false;
    double norm2 = 0.0;
    for (size_t i = 1; i < s.size(); ++i) norm2 += s[i] * s[i];
    return norm2 < epsilon * epsilon;
}

ReducedSystem::Remainders ReducedSystem::remainders(const std::vector<double>& s) const {
    Remainders r;
    r.uHat.assign(static_cast<size_t>(n - 1), 0.0);
    r.vHat.assign(static_cast<size_t>(n - 1), 0.0);
    const double z = s[0];
    if (z < tailCutoff) return r;  // origin limit: U = V = 0

    std::vector<double> J, psi;
    substitution(s, J, psi);
    if (!(J[0] > 0.0))
        throw PipelineError(ErrorCode::OutsideDomain, "J_1 <= 0 in remainder evaluation");

    const double xi1 = s[1];
    const double eta1 = s[static_cast<size_t>(n) + 1];
    const double zd = std::pow(z, delta);

    // Equations of motion of the truncated normal form. JHat is exactly
    // conserved: every retained harmonic depends on psi_1 only.
    const double dotJ1 = -bundle.totalDPsi1(J, psi[0]);
    const double dotPsi1 = bundle.totalDJ1(J, psi[0]);
    const std::vector<double> dotPsiHat = bundle.totalDJHat(J, psi[0]);

    r.u1 = -std::pow(z, -N / 2.0) * dotJ1 - Gamma - 0.5 * N * xi1 - d0 * z;
    // uHat stays identically zero.
    r.v1 = -std::pow(z, 1.0 - delta - N / 2.0) * dotPsi1 - c1 * delta - 2.0 * c2 * delta * zd +
           0.5 * N * eta1 - d1 * z - d2 * xi1;
    for (int a = 1; a < n; ++a)
        r.vHat[static_cast<size_t>(a - 1)] = -dotPsiHat[static_cast<size_t>(a - 1)] +
                                             0.5 * (N - 2) * omegaHat0[static_cast<size_t>(a - 1)] -
                                             dHat[static_cast<size_t>(a - 1)] * z;
    return r;
}

std::vector<double> ReducedSystem::field(const std::vector<double>& s) const {
    if (static_cast<int>(s.size()) != stateDim()) throw std::invalid_argument("state arity");
    Remainders r = remainders(s);
    const double z = s[0];
    std::vector<double> f(s.size(), 0.0);
    f[0] = -z;
    f[1] = -0.5 * (N - 2) * s[1] - d0 * z - r.u1;
    for (int a = 1; a < n; ++a)
        f[static_cast<size_t>(1 + a)] =
            0.5 * (N + 2) * s[static_cast<size_t>(1 + a)] - r.uHat[static_cast<size_t>(a - 1)];
    f[static_cast<size_t>(n) + 1] = 0.5 * (N + 2.0 * delta) * s[static_cast<size_t>(n) + 1] -
                                    d1 * z - d2 * s[1] - r.v1;
    for (int a = 1; a < n; ++a)
        f[static_cast<size_t>(n + 1 + a)] =
            -0.5 * (N - 2) * s[static_cast<size_t>(n + 1 + a)] -
            dHat[static_cast<size_t>(a - 1)] * z - r.vHat[static_cast<size_t>(a - 1)];
    return f;
}

std::vector<std::vector<double>> ReducedSystem::jacobianAtOrigin() const {
    const size_t dim = static_cast<size_t>(stateDim());
    std::vector<std::vector<double>> m(dim, std::vector<double>(dim, 0.0));
    m[0][0] = -1.0;
    m[1][0] = -d0;
    m[1][1] = -0.5 * (N - 2);
    for (int a = 1; a < n; ++a) {
        size_t i = static_cast<size_t>(1 + a);
        m[i][i] = 0.5 * (N + 2);
    }
    size_t ie1 = static_cast<size_t>(n) + 1;
    m[ie1][0] = -d1;
    m[ie1][1] = -d2;
    m[ie1][ie1] = 0.5 * (N + 2.0 * delta);
    for (int a = 1; a < n; ++a) {
        size_t i = static_cast<size_t>(n + 1 + a);
        m[i][0] = -dHat[static_cast<size_t>(a - 1)];
        m[i][i] = -0.5 * (N - 2);
    }
    return m;
}

}  // namespace ocl
