#include "ocurve/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ocurve/errors.hpp"
#include "ocurve/integrator.hpp"

namespace ocl {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmtVec(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += fmt(v[i]);
    }
    return out;
}

std::string fmtRatVec(const std::vector<Rational>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += ratToString(v[i]);
    }
    return out;
}

std::string fmtIntVec(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

// How deep each user-facing stage actually computes.
int computeLevel(Stage s) {
    switch (s) {
        case Stage::Normalize: return 1;
        case Stage::Check:
        case Stage::Rays:
        case Stage::Analyze: return 2;
        case Stage::Reduce: return 3;
        case Stage::OCurveStage: return 4;
        case Stage::Verify: return 5;
    }
    return 5;
}

}  // namespace

CartesianPolynomial HamiltonianSpec::polynomial() const {
    CartesianPolynomial p(2 * n);
    for (const auto& [c, e] : terms) p.addTerm(e, c);
    return p;
}

HamiltonianSpec specFromPolynomial(const CartesianPolynomial& p) {
    if (p.dim() % 2 != 0) throw PipelineError(ErrorCode::BadInput, "odd phase-space dimension");
    HamiltonianSpec spec;
    spec.n = p.dim() / 2;
    for (const auto& [e, c] : p.terms()) spec.terms.emplace_back(c, e);
    return spec;
}

HamiltonianSpec parseSpec(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1;
    CartesianPolynomial accum;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        auto fail = [&](const std::string& msg) -> PipelineError {
            return PipelineError(ErrorCode::BadInput,
                                 "line " + std::to_string(lineNo) + ": " + msg);
        };
        if (word == "n") {
            if (n != -1) throw fail("duplicate n line");
            if (!(ls >> n) || n < 1) throw fail("n must be a positive integer");
            accum = CartesianPolynomial(2 * n);
        } else if (word == "term") {
            if (n == -1) throw fail("term before the n line");
            std::string coeffText;
            if (!(ls >> coeffText)) throw fail("missing coefficient");
            Rational coeff;
            try {
                coeff = ratFromString(coeffText);
            } catch (const std::exception&) {
                throw fail("malformed rational '" + coeffText + "'");
            }
            std::vector<int> exps(static_cast<size_t>(2 * n), 0);
            for (int i = 0; i < 2 * n; ++i) {
                if (!(ls >> exps[static_cast<size_t>(i)]) || exps[static_cast<size_t>(i)] < 0)
                    throw fail("expected 2n non-negative exponents");
            }
            int extra;
            if (ls >> extra) throw fail("too many exponents");
            accum.addTerm(std::move(exps), std::move(coeff));
        } else {
            throw fail("unknown directive '" + word + "'");
        }
    }
    if (n == -1) throw PipelineError(ErrorCode::BadInput, "missing n line");
    if (accum.degree() < 3)
        throw PipelineError(ErrorCode::BadInput, "need at least one term of degree >= 3");
    // Validate the elliptic quadratic structure up front.
    frequenciesFromQuadraticPart(accum);
    return specFromPolynomial(accum);
}

std::string emitSpec(const HamiltonianSpec& spec) {
    // Canonical form: aggregated coefficients in exponent-map order.
    HamiltonianSpec canon = specFromPolynomial(spec.polynomial());
    std::string out = "n " + std::to_string(canon.n) + "\n";
    for (const auto& [c, e] : canon.terms) {
        out += "term " + c.get_num().get_str() + "/" + c.get_den().get_str();
        for (int x : e) out += " " + std::to_string(x);
        out += "\n";
    }
    return out;
}

std::string PipelineResult::reportText() const {
    std::string out;
    for (const auto& [k, v] : report) out += k + " = " + v + "\n";
    return out;
}

std::string PipelineResult::reportJson() const {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : report) j[k] = v;
    return j.dump(2) + "\n";
}

PipelineResult runPipeline(const HamiltonianSpec& spec, const PipelineOptions& options) {
    PipelineResult r;
    auto put = [&r](const std::string& k, const std::string& v) { r.report.emplace_back(k, v); };

    CartesianPolynomial h = spec.polynomial();
    r.omega = frequenciesFromQuadraticPart(h);
    put("input.n", std::to_string(spec.n));
    put("input.degree", std::to_string(h.degree()));
    put("input.omega", fmtRatVec(r.omega));

    const int level = computeLevel(options.stage);

    auto hypothesisFail = [&](const char* label, const PipelineError& err) {
        r.hypothesesHold = false;
        r.failedHypothesis = label;
        put(std::string("hypothesis.") + label, "fail");
        put("hypothesis.failure_code", errorCodeName(err.code()));
        put("hypothesis.failure_detail", err.what());
    };

    try {
        r.res = checkH1H2(r.omega);
    } catch (const PipelineError& err) {
        if (!err.isHypothesisFailure()) throw;
        hypothesisFail(err.code() == ErrorCode::MultipleDirections ? "H2" : "H1", err);
        return r;
    }
    const ResonanceStructure& res = *r.res;
    put("hypothesis.H1", "pass");
    put("hypothesis.H2", "pass");
    put("resonance.k", fmtIntVec(res.k));
    put("resonance.N", std::to_string(res.N));
    put("resonance.M", std::to_string(res.M));
    put("resonance.delta", res.oddN ? "1/2" : "1");
    put("resonance.permutation", fmtIntVec(res.permutation));
    if (level < 1) {
        r.hypothesesHold = true;
        return r;
    }

    const int degree = options.order > 0 ? options.order : 3 * res.N;
    try {
        r.nf = birkhoffNormalize(h, res, degree);
    } catch (const PipelineError& err) {
        if (!err.isHypothesisFailure()) throw;
        hypothesisFail("H2", err);
        return r;
    }
    put("normalform.degree", std::to_string(degree));
    put("normalform.terms", std::to_string(r.nf->normalForm.termCount()));
    if (level < 2) {
        r.hypothesesHold = true;
        return r;
    }

    r.h3 = checkH3(*r.nf, res);
    put("hypothesis.H3", r.h3->holds ? "pass" : "fail");
    {
        std::string vals;
        for (size_t i = 0; i < r.h3->values.size(); ++i) {
            if (i) vals += ",";
            vals += ratToString(r.h3->values[i]);
        }
        put("hypothesis.H3_values", vals.empty() ? "none" : vals);
    }
    if (!r.h3->holds) {
        r.failedHypothesis = "H3";
        return r;
    }

    try {
        r.psi = buildPsi(*r.nf, res);
        r.rays = findRays(*r.psi);
    } catch (const PipelineError& err) {
        if (!err.isHypothesisFailure()) throw;
        hypothesisFail("H4", err);
        return r;
    }
    put("hypothesis.H4", "pass");
    put("psi.A", fmt(r.psi->A));
    put("psi.sigma0", fmt(r.psi->sigma0));
    put("psi.B", fmt(r.psi->B));
    put("rays.plus.c", fmt(r.rays->plus.c));
    put("rays.plus.psi_prime", fmt(r.rays->plus.psiPrimeAtC));
    put("rays.minus.c", fmt(r.rays->minus.c));
    put("rays.minus.psi_prime", fmt(r.rays->minus.psiPrimeAtC));
    r.hypothesesHold = true;
    if (level < 3) return r;

    // Reduction works on the O+ machinery; the O- family runs the same
    // machinery on the negated Hamiltonian (gamma > 0 by construction) and
    // relabels time.
    CartesianPolynomial hWork = h;
    const NormalFormResult* nfWork = &*r.nf;
    const ResonanceStructure* resWork = &res;
    std::optional<NormalFormResult> nfNeg;
    std::optional<ResonanceStructure> resNeg;
    double cWork = r.rays->plus.c;
    if (options.raySign < 0) {
        hWork = h * Rational(-1);
        std::vector<Rational> omegaNeg = frequenciesFromQuadraticPart(hWork);
        resNeg = checkH1H2(omegaNeg);
        nfNeg = birkhoffNormalize(hWork, *resNeg, degree);
        resWork = &*resNeg;
        nfWork = &*nfNeg;
        PsiForm psiNeg = buildPsi(*nfNeg, *resNeg);
        RayPair raysNeg = findRays(psiNeg);
        cWork = raysNeg.plus.c;  // the original r_- root
    }
    put("reduce.sign", options.raySign < 0 ? "-" : "+");
    put("reduce.ray_root", fmt(cWork));

    LinearChange lc = buildLinearChange(*resWork);
    KBundle bundle(*nfWork, *resWork, lc);
    double gamma = computeGamma(bundle, cWork);
    r.sys = computeCoefficients(bundle, *resWork, gamma, cWork);
    r.sys->epsilon = options.epsilon;
    put("reduced.gamma", fmt(gamma));
    put("reduced.Gamma", fmt(r.sys->Gamma));
    put("reduced.c1", fmt(r.sys->c1));
    put("reduced.c2", fmt(r.sys->c2));
    put("reduced.d0", fmt(r.sys->d0));
    put("reduced.d1", fmt(r.sys->d1));
    put("reduced.d2", fmt(r.sys->d2));
    put("reduced.d_hat", r.sys->dHat.empty() ? "none" : fmtVec(r.sys->dHat));
    put("reduced.omega_hat0", r.sys->omegaHat0.empty() ? "none" : fmtVec(r.sys->omegaHat0));
    {
        auto jac = r.sys->jacobianAtOrigin();
        std::vector<double> eig;
        for (size_t i = 0; i < jac.size(); ++i) eig.push_back(jac[i][i]);
        put("reduced.eigenvalues", fmtVec(eig));
    }
    if (level < 4) return r;

    const int N = res.N;
    double z0 = options.epsilon / 4.0;
    double t0 = options.t0 > 0.0 ? options.t0 : timeFromZ(N, z0);
    if (options.t0 > 0.0) z0 = zFromTime(N, t0);
    if (!(z0 < options.epsilon))
        throw PipelineError(ErrorCode::OutsideDomain, "t0 gives z0 outside the domain");
    double tMax = options.tMax > 0.0 ? options.tMax : 100.0 * t0;

    std::vector<double> etaHat = options.etaHat;
    if (etaHat.empty()) etaHat.assign(static_cast<size_t>(res.n() - 1), 0.0);
    if (static_cast<int>(etaHat.size()) != res.n() - 1)
        throw PipelineError(ErrorCode::BadInput, "eta-hat needs n-1 components");

    r.chart = stableManifoldPoint(*r.sys, z0, 0.0, etaHat, options.manifold);
    put("manifold.z0", fmt(z0));
    put("manifold.eta_hat0", etaHat.empty() ? "none" : fmtVec(etaHat));
    put("manifold.iterations", std::to_string(r.chart->convergence.iterations));
    put("manifold.contraction_ratio", fmt(r.chart->convergence.contractionRatio));
    put("manifold.residual", fmt(r.chart->convergence.residual));
    put("manifold.graph_value", fmtVec(r.chart->graphValue));

    r.curve = buildOCurve(*r.sys, *nfWork, *r.chart,
                          logSpacedTimes(t0, tMax, options.sampleCount), options.raySign);
    put("ocurve.t0", fmt(t0));
    put("ocurve.tmax", fmt(tMax));
    put("ocurve.samples", std::to_string(options.sampleCount));
    if (level < 5) return r;

    r.verification = verifyOCurve(h, *r.curve, *nfWork, *r.sys, options.verify);
    const VerificationReport& v = *r.verification;
    put("verify.j1_exponent", fmt(v.j1Fit.exponent));
    put("verify.j1_exponent_expected", fmt(v.expectedJ1Exponent));
    put("verify.j1_amplitude", fmt(v.j1Fit.amplitude));
    put("verify.j1_amplitude_expected", fmt(v.expectedJ1Amplitude));
    put("verify.j1_r_squared", fmt(v.j1Fit.rSquared));
    put("verify.j1_pass", v.j1Pass ? "true" : "false");
    put("verify.psi_gap_max", fmt(v.maxPsiGap));
    put("verify.psi_gap_at_floor", v.psiGapAtFloor ? "true" : "false");
    if (!v.psiGapAtFloor) {
        put("verify.psi_exponent", fmt(v.psiGapFit.exponent));
        put("verify.psi_exponent_expected", fmt(v.expectedPsiExponent));
    }
    put("verify.psi_pass", v.psiPass ? "true" : "false");
    put("verify.j_hat_scaled_max", fmt(v.jHatScaledMax));
    put("verify.energy_drift_rel", fmt(v.energyDriftRel));
    put("verify.drift_pass", v.driftPass ? "true" : "false");
    put("verify.j1_max_rel_dev", fmt(v.maxRelDevJ1));
    put("verify.deviation_pass", v.deviationPass ? "true" : "false");
    put("verify.pass", v.pass ? "true" : "false");
    return r;
}

std::string curveCsv(const CartesianPolynomial& h, const OCurve& curve) {
    PolyEval energy(h);
    const int dim = 2 * curve.n;
    std::string out = "t";
    for (int i = 1; i <= dim; ++i) out += ",x" + std::to_string(i);
    out += ",H,J1,psi1\n";
    for (const auto& s : curve.samples) {
        out += fmt(s.t);
        for (double x : s.x) out += "," + fmt(x);
        out += "," + fmt(energy(s.x)) + "," + fmt(s.J[0]) + "," + fmt(s.psi[0]) + "\n";
    }
    return out;
}

std::string trajectoryCsv(const CartesianPolynomial& h, const NormalFormResult& nf,
                          const LinearChange& lc, const Trajectory& traj) {
    PolyEval energy(h);
    const int n = nf.n;
    std::string out = "t";
    for (int i = 1; i <= 2 * n; ++i) out += ",x" + std::to_string(i);
    out += ",H,J1,psi1\n";
    for (const auto& s : traj.samples) {
        std::vector<double> y(static_cast<size_t>(2 * n), 0.0);
        for (int c = 0; c < 2 * n; ++c)
            y[static_cast<size_t>(c)] = nf.inverseMap[static_cast<size_t>(c)].evaluate(s.state);
        std::vector<double> actions(static_cast<size_t>(n), 0.0);
        std::vector<double> angles(static_cast<size_t>(n), 0.0);
        for (int c = 0; c < n; ++c) {
            double a = y[static_cast<size_t>(c)], b = y[static_cast<size_t>(c + n)];
            actions[static_cast<size_t>(c)] = 0.5 * (a * a + b * b);
            angles[static_cast<size_t>(c)] = std::atan2(b, a);
        }
        std::vector<double> J = lc.jFromActions(actions);
        std::vector<double> psi = lc.psiFromAngles(angles);
        out += fmt(s.t);
        for (double x : s.state) out += "," + fmt(x);
        out += "," + fmt(energy(s.state)) + "," + fmt(J[0]) + "," + fmt(psi[0]) + "\n";
    }
    return out;
}

}  // namespace ocl
