#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ocurve/manifold.hpp"
#include "ocurve/normal_form.hpp"
#include "ocurve/ocurve_build.hpp"
#include "ocurve/ray.hpp"
#include "ocurve/reduced_system.hpp"
#include "ocurve/resonance.hpp"
#include "ocurve/verify.hpp"

namespace ocl {

// Line-oriented Hamiltonian description:
//   # comment
//   n <int>
//   term <p>/<q> <e1> ... <e2n>
struct HamiltonianSpec {
    int n = 0;
    std::vector<std::pair<Rational, std::vector<int>>> terms;  // canonical order

    CartesianPolynomial polynomial() const;
};

HamiltonianSpec parseSpec(const std::string& text);
HamiltonianSpec specFromPolynomial(const CartesianPolynomial& p);
std::string emitSpec(const HamiltonianSpec& spec);

enum class Stage {
    Check = 0,      // hypotheses H1-H4
    Normalize = 1,  // Birkhoff normal form
    Rays = 2,
    Analyze = 3,    // everything up to and including rays, full report
    Reduce = 4,
    OCurveStage = 5,
    Verify = 6,
};

struct PipelineOptions {
    Stage stage = Stage::Verify;
    int order = 0;               // truncation degree; 0 -> 3N
    int raySign = +1;            // +1: O+ family (r_+), -1: O- family (r_-)
    std::vector<double> etaHat;  // family parameter, defaults to zeros
    double t0 = 0.0;             // 0 -> auto: z(t0) = epsilon / 4
    double tMax = 0.0;           // 0 -> 100 * t0
    double epsilon = 0.05;
    int sampleCount = 33;
    ManifoldConfig manifold;
    VerifyConfig verify;
};

struct PipelineResult {
    std::vector<Rational> omega;
    std::optional<ResonanceStructure> res;
    std::optional<NormalFormResult> nf;
    std::optional<H3Report> h3;
    std::optional<PsiForm> psi;
    std::optional<RayPair> rays;
    std::optional<ReducedSystem> sys;
    std::optional<ManifoldChart> chart;
    std::optional<OCurve> curve;
    std::optional<VerificationReport> verification;

    bool hypothesesHold = false;
    std::string failedHypothesis;  // empty when hypothesesHold

    // Deterministic key/value report in emission order.
    std::vector<std::pair<std::string, std::string>> report;

    std::string reportText() const;  // "key = value" lines
    std::string reportJson() const;
};

// Runs resonance -> normal form -> H3/H4 -> reduction -> manifold ->
// curve -> verification up to the requested stage. Hypothesis failures
// (H1-H4) are recorded in the result, not thrown; operational errors
// propagate as exceptions.
PipelineResult runPipeline(const HamiltonianSpec& spec, const PipelineOptions& options = {});

// Trajectory CSV with header t,x1,...,x2n,H,J1,psi1 (17 significant digits).
std::string curveCsv(const CartesianPolynomial& h, const OCurve& curve);
std::string trajectoryCsv(const CartesianPolynomial& h, const NormalFormResult& nf,
                          const LinearChange& lc, const Trajectory& traj);

}  // namespace ocl
