#include "ocurve/manifold.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "ocurve/errors.hpp"

namespace ocl {

namespace {

// Index split of the state (z, xi_1, xiHat, eta_1, etaHat): stable block
// (z, xi_1, etaHat), unstable block (xiHat, eta_1). The linearization is
// block triangular in this split (no stable <- unstable coupling).
struct Splitting {
    int n = 0;
    std::vector<int> stableIdx;    // size n+1
    std::vector<int> unstableIdx;  // size n
    Eigen::MatrixXd Ass;
    Eigen::MatrixXd Auu;
    Eigen::MatrixXd Y;  // decoupling: w = u + Y s, dw/dtau = Auu w + G_w
    double minStableRate = 0.0;
    double minUnstableRate = 0.0;
};

Splitting buildSplitting(int n, const std::vector<std::vector<double>>& jac) {
    Splitting sp;
    sp.n = n;
    sp.stableIdx = {0, 1};
    for (int a = 1; a < n; ++a) sp.stableIdx.push_back(n + 1 + a);
    for (int a = 1; a < n; ++a) sp.unstableIdx.push_back(1 + a);
    sp.unstableIdx.push_back(n + 1);

    const int ns = n + 1, nu = n;
    sp.Ass.resize(ns, ns);
    sp.Auu.resize(nu, nu);
    Eigen::MatrixXd Aus(nu, ns);
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < ns; ++j) sp.Ass(i, j) = jac[sp.stableIdx[i]][sp.stableIdx[j]];
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nu; ++j) sp.Auu(i, j) = jac[sp.unstableIdx[i]][sp.unstableIdx[j]];
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < ns; ++j) Aus(i, j) = jac[sp.unstableIdx[i]][sp.stableIdx[j]];
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < nu; ++j)
            if (jac[sp.stableIdx[i]][sp.unstableIdx[j]] != 0.0)
                throw std::logic_error("linearization is not block triangular");

    Eigen::VectorXcd sEv = Eigen::EigenSolver<Eigen::MatrixXd>(sp.Ass).eigenvalues();
    Eigen::VectorXcd uEv = Eigen::EigenSolver<Eigen::MatrixXd>(sp.Auu).eigenvalues();
    sp.minStableRate = sEv.real().cwiseAbs().minCoeff();
    sp.minUnstableRate = uEv.real().minCoeff();
    if (sEv.real().maxCoeff() >= 0.0 || sp.minUnstableRate <= 0.0)
        throw std::logic_error("origin is not hyperbolic with the expected split");

    // Sylvester equation Auu Y - Y Ass = Aus, solved row by row: Auu is
    // diagonal by construction.
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nu; ++j)
            if (i != j && sp.Auu(i, j) != 0.0)
                throw std::logic_error("unstable block expected diagonal");
    sp.Y.resize(nu, ns);
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(ns, ns);
    for (int i = 0; i < nu; ++i) {
        Eigen::MatrixXd m = sp.Auu(i, i) * id - sp.Ass;
        sp.Y.row(i) = m.transpose().partialPivLu().solve(Aus.row(i).transpose()).transpose();
    }
    return sp;
}

Eigen::VectorXd pick(const std::vector<double>& x, const std::vector<int>& idx) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i) v(static_cast<Eigen::Index>(i)) =
        x[static_cast<size_t>(idx[i])];
    return v;
}

std::vector<double> assemble(const Splitting& sp, const Eigen::VectorXd& s,
                             const Eigen::VectorXd& u) {
    std::vector<double> x(static_cast<size_t>(2 * sp.n + 1), 0.0);
    for (size_t i = 0; i < sp.stableIdx.size(); ++i)
        x[static_cast<size_t>(sp.stableIdx[i])] = s(static_cast<Eigen::Index>(i));
    for (size_t i = 0; i < sp.unstableIdx.size(); ++i)
        x[static_cast<size_t>(sp.unstableIdx[i])] = u(static_cast<Eigen::Index>(i));
    return x;
}

// Catmull-Rom value at the midpoint of grid interval [i, i+1], indices
// clamped at the ends.
Eigen::VectorXd midValue(const std::vector<Eigen::VectorXd>& g, int i) {
    const int m = static_cast<int>(g.size()) - 1;
    const auto& p0 = g[static_cast<size_t>(std::max(i - 1, 0))];
    const auto& p1 = g[static_cast<size_t>(i)];
    const auto& p2 = g[static_cast<size_t>(std::min(i + 1, m))];
    const auto& p3 = g[static_cast<size_t>(std::min(i + 2, m))];
    return (-p0 + 9.0 * p1 + 9.0 * p2 - p3) / 16.0;
}

// RK4 sweep of dx/dtau = A x + g(tau) with g sampled on the grid; dir = +1
// integrates forward filling indices 1..m from x[0], dir = -1 backward
// filling m-1..0 from x[m].
void sweep(const Eigen::MatrixXd& A, const std::vector<Eigen::VectorXd>& g, double h, int dir,
           std::vector<Eigen::VectorXd>& x) {
    const int m = static_cast<int>(g.size()) - 1;
    if (dir > 0) {
        for (int i = 0; i < m; ++i) {
            Eigen::VectorXd gm = midValue(g, i);
            const Eigen::VectorXd& xi = x[static_cast<size_t>(i)];
            Eigen::VectorXd k1 = A * xi + g[static_cast<size_t>(i)];
            Eigen::VectorXd k2 = A * (xi + 0.5 * h * k1) + gm;
            Eigen::VectorXd k3 = A * (xi + 0.5 * h * k2) + gm;
            Eigen::VectorXd k4 = A * (xi + h * k3) + g[static_cast<size_t>(i + 1)];
            x[static_cast<size_t>(i + 1)] = xi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    } else {
        for (int i = m; i > 0; --i) {
            Eigen::VectorXd gm = midValue(g, i - 1);
            const Eigen::VectorXd& xi = x[static_cast<size_t>(i)];
            Eigen::VectorXd k1 = A * xi + g[static_cast<size_t>(i)];
            Eigen::VectorXd k2 = A * (xi - 0.5 * h * k1) + gm;
            Eigen::VectorXd k3 = A * (xi - 0.5 * h * k2) + gm;
            Eigen::VectorXd k4 = A * (xi - h * k3) + g[static_cast<size_t>(i - 1)];
            x[static_cast<size_t>(i - 1)] = xi - h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
}

}  // namespace

ManifoldChart stableManifoldPointGeneric(int n, const std::vector<std::vector<double>>& jacobian,
                                         const FieldFn& field, double epsilon, double z0,
                                         double xi10, const std::vector<double>& etaHat0,
                                         const ManifoldConfig& config) {
    if (static_cast<int>(etaHat0.size()) != n - 1)
        throw std::invalid_argument("etaHat0 arity");
    double paramNorm2 = z0 * z0 + xi10 * xi10;
    for (double v : etaHat0) paramNorm2 += v * v;
    if (!(z0 >= 0.0) || z0 >= epsilon || std::sqrt(paramNorm2) >= epsilon)
        throw PipelineError(ErrorCode::OutsideDomain, "stable parameters outside the chart ball");

    Splitting sp = buildSplitting(n, jacobian);
    const int dim = 2 * n + 1;
    const int ns = n + 1, nu = n;

    double T = config.horizon > 0.0 ? config.horizon : 20.0 / sp.minStableRate;
    if (sp.minStableRate * T < 10.0)
        throw PipelineError(ErrorCode::HorizonTooShort,
                            "horizon gives linear decay factor above exp(-10)");
    const int m = std::max(16, static_cast<int>(std::ceil(T / config.step)));
    const double h = T / m;

    Eigen::VectorXd s0(ns);
    s0(0) = z0;
    s0(1) = xi10;
    for (int a = 0; a < n - 1; ++a) s0(2 + a) = etaHat0[static_cast<size_t>(a)];

    const double kappa = 2.0 * sp.minStableRate;  // decay rate of the quadratic tail
    Eigen::MatrixXd tailInv =
        (sp.Auu + kappa * Eigen::MatrixXd::Identity(nu, nu)).partialPivLu().inverse();

    // Iterate grids. Initial guess: linear stable flow (first sweep with
    // zero forcing), unstable seed folded in if provided.
    std::vector<Eigen::VectorXd> sGrid(static_cast<size_t>(m + 1), Eigen::VectorXd::Zero(ns));
    std::vector<Eigen::VectorXd> wGrid(static_cast<size_t>(m + 1), Eigen::VectorXd::Zero(nu));
    sGrid[0] = s0;
    {
        std::vector<Eigen::VectorXd> zero(static_cast<size_t>(m + 1), Eigen::VectorXd::Zero(ns));
        sweep(sp.Ass, zero, h, +1, sGrid);
    }
    if (!config.unstableSeed.empty()) {
        if (static_cast<int>(config.unstableSeed.size()) != nu)
            throw std::invalid_argument("unstable seed arity");
        Eigen::VectorXd seed(nu);
        for (int i = 0; i < nu; ++i) seed(i) = config.unstableSeed[static_cast<size_t>(i)];
        for (int i = 0; i <= m; ++i)
            wGrid[static_cast<size_t>(i)] =
                std::exp(-kappa * h * i) * (seed + sp.Y * sGrid[0]);
    }

    auto stateAt = [&](int i) {
        return assemble(sp, sGrid[static_cast<size_t>(i)],
                        wGrid[static_cast<size_t>(i)] - sp.Y * sGrid[static_cast<size_t>(i)]);
    };

    ConvergenceReport report;
    double prevDelta = 0.0;
    int growthStreak = 0;
    bool converged = false;
    for (int iter = 1; iter <= config.maxIterations; ++iter) {
        // Nonlinear forcing on the current grid.
        std::vector<Eigen::VectorXd> Gs(static_cast<size_t>(m + 1));
        std::vector<Eigen::VectorXd> Gw(static_cast<size_t>(m + 1));
        for (int i = 0; i <= m; ++i) {
            std::vector<double> x = stateAt(i);
            std::vector<double> f;
            try {
                f = field(x);
            } catch (const PipelineError& err) {
                throw PipelineError(ErrorCode::NoContraction,
                                    std::string("iterate left the field domain: ") + err.what());
            }
            Eigen::VectorXd g(dim);
            for (int r = 0; r < dim; ++r) {
                double lin = 0.0;
                for (int cIdx = 0; cIdx < dim; ++cIdx)
                    lin += jacobian[static_cast<size_t>(r)][static_cast<size_t>(cIdx)] *
                           x[static_cast<size_t>(cIdx)];
                g(r) = f[static_cast<size_t>(r)] - lin;
            }
            if (!g.allFinite())
                throw PipelineError(ErrorCode::NoContraction, "non-finite nonlinearity");
            std::vector<double> gv(g.data(), g.data() + dim);
            Gs[static_cast<size_t>(i)] = pick(gv, sp.stableIdx);
            Gw[static_cast<size_t>(i)] = pick(gv, sp.unstableIdx) + sp.Y * Gs[static_cast<size_t>(i)];
        }

        std::vector<Eigen::VectorXd> sNew(static_cast<size_t>(m + 1), Eigen::VectorXd::Zero(ns));
        std::vector<Eigen::VectorXd> wNew(static_cast<size_t>(m + 1), Eigen::VectorXd::Zero(nu));
        sNew[0] = s0;
        sweep(sp.Ass, Gs, h, +1, sNew);
        wNew[static_cast<size_t>(m)] = -tailInv * Gw[static_cast<size_t>(m)];
        sweep(sp.Auu, Gw, h, -1, wNew);

        double delta = 0.0;
        for (int i = 0; i <= m; ++i) {
            delta = std::max(delta,
                             (sNew[static_cast<size_t>(i)] - sGrid[static_cast<size_t>(i)])
                                 .cwiseAbs()
                                 .maxCoeff());
            delta = std::max(delta,
                             (wNew[static_cast<size_t>(i)] - wGrid[static_cast<size_t>(i)])
                                 .cwiseAbs()
                                 .maxCoeff());
        }
        sGrid.swap(sNew);
        wGrid.swap(wNew);

        if (const char* log = std::getenv("OCURVE_LOG"); log && std::string(log) == "debug")
            std::fprintf(stderr, "[manifold] iter %d delta %.3e\n", iter, delta);
        report.iterations = iter;
        report.residual = delta;
        if (iter > 1 && prevDelta > 0.0) report.contractionRatio = delta / prevDelta;
        if (delta < config.tolerance) {
            converged = true;
            break;
        }
        if (iter > 1 && delta >= prevDelta) {
            if (++growthStreak >= 3)
                throw PipelineError(ErrorCode::NoContraction,
                                    "fixed-point updates stopped contracting");
        } else {
            growthStreak = 0;
        }
        prevDelta = delta;
    }
    if (!converged)
        throw PipelineError(ErrorCode::NoContraction, "fixed point not reached in max iterations");

    ManifoldChart chart;
    chart.z0 = z0;
    chart.xi10 = xi10;
    chart.etaHat0 = etaHat0;
    chart.convergence = report;
    Eigen::VectorXd u0 = wGrid[0] - sp.Y * sGrid[0];
    chart.graphValue.assign(u0.data(), u0.data() + nu);
    chart.tau.resize(static_cast<size_t>(m + 1));
    chart.states.resize(static_cast<size_t>(m + 1));
    for (int i = 0; i <= m; ++i) {
        chart.tau[static_cast<size_t>(i)] = h * i;
        chart.states[static_cast<size_t>(i)] = stateAt(i);
    }
    return chart;
}

ManifoldChart stableManifoldPoint(const ReducedSystem& sys, double z0, double xi10,
                                  const std::vector<double>& etaHat0,
                                  const ManifoldConfig& config) {
    FieldFn field = [&sys](const std::vector<double>& x) { return sys.field(x); };
    return stableManifoldPointGeneric(sys.n, sys.jacobianAtOrigin(), field, sys.epsilon, z0,
                                      xi10, etaHat0, config);
}

std::vector<double> shootGraphValue(const ReducedSystem& sys, double z0, double xi10,
                                    const std::vector<double>& etaHat0,
                                    const ManifoldConfig& config) {
    const int n = sys.n;
    Splitting sp = buildSplitting(n, sys.jacobianAtOrigin());
    const int nu = n;

    double T = config.horizon > 0.0 ? config.horizon : 20.0 / sp.minStableRate;
    double Ts = config.shootingHorizon > 0.0 ? config.shootingHorizon
                                             : std::min(T, 16.0 / sp.minUnstableRate);
    const double h = config.step / 2.0;
    const int steps = std::max(8, static_cast<int>(std::ceil(Ts / h)));
    const double hs = Ts / steps;

    Eigen::VectorXd s0(n + 1);
    s0(0) = z0;
    s0(1) = xi10;
    for (int a = 0; a < n - 1; ++a) s0(2 + a) = etaHat0[static_cast<size_t>(a)];

    // Terminal decoupled unstable coordinate of the flow started at
    // (s0, u0): the shooting target F(u0) = w(Ts) = 0.
    auto terminal = [&](const Eigen::VectorXd& u0) -> Eigen::VectorXd {
        std::vector<double> x = assemble(sp, s0, u0);
        for (int i = 0; i < steps; ++i) {
            std::vector<double> k1 = sys.field(x);
            auto advance = [&](const std::vector<double>& k, double f) {
                std::vector<double> y(x);
                for (size_t j = 0; j < y.size(); ++j) y[j] += f * k[j];
                return y;
            };
            std::vector<double> k2 = sys.field(advance(k1, 0.5 * hs));
            std::vector<double> k3 = sys.field(advance(k2, 0.5 * hs));
            std::vector<double> k4 = sys.field(advance(k3, hs));
            for (size_t j = 0; j < x.size(); ++j)
                x[j] += hs / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        return pick(x, sp.unstableIdx) + sp.Y * pick(x, sp.stableIdx);
    };

    Eigen::VectorXd u = -sp.Y * s0;  // linear-graph initial guess
    Eigen::VectorXd F = terminal(u);
    for (int iter = 0; iter < 60; ++iter) {
        if (F.cwiseAbs().maxCoeff() < 1e-12) break;
        Eigen::MatrixXd Jm(nu, nu);
        for (int j = 0; j < nu; ++j) {
            double du = 1e-7 * (1.0 + std::abs(u(j)));
            Eigen::VectorXd up = u;
            up(j) += du;
            Jm.col(j) = (terminal(up) - F) / du;
        }
        Eigen::VectorXd step = Jm.partialPivLu().solve(F);
        if (!step.allFinite())
            throw PipelineError(ErrorCode::NoContraction, "shooting Newton step failed");
        double lambda = 1.0;
        Eigen::VectorXd uNew, FNew;
        bool accepted = false;
        for (int half = 0; half < 25; ++half) {
            uNew = u - lambda * step;
            FNew = terminal(uNew);
            if (FNew.norm() < F.norm()) {
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) break;  // at the round-off floor
        double move = (uNew - u).cwiseAbs().maxCoeff();
        u = uNew;
        F = FNew;
        if (move < 1e-14 * std::max(1.0, u.cwiseAbs().maxCoeff())) break;
    }
    return std::vector<double>(u.data(), u.data() + nu);
}

}  // namespace ocl
