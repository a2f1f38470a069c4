#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "common.hpp"
#include "ocurve/errors.hpp"
#include "ocurve/manifold.hpp"
#include "ocurve/ocurve_build.hpp"
#include "ocurve/pipeline.hpp"
#include "ocurve/verify.hpp"

using namespace ocl;

TEST_CASE("reduced -> Cartesian -> (J, psi) round trip is consistent") {
    auto r = octest::reduce(octest::e1());
    std::vector<double> state = {0.01, 0.002, 0.0, 0.001, 0.003};
    std::vector<double> J, psi;
    auto x = reducedToCartesian(r.sys, r.nf, state, &J, &psi);
    REQUIRE(x.size() == 4);

    // The substitution values must agree with the reduced system's own
    std::vector<double> J2, psi2;
    r.sys.substitution(state, J2, psi2);
    for (size_t i = 0; i < J.size(); ++i) CHECK(J[i] == doctest::Approx(J2[i]).epsilon(1e-13));
    CHECK(psi[0] == doctest::Approx(psi2[0]).epsilon(1e-13));

    // Undo the forward map with the truncated inverse and re-read (J1, psi1)
    const auto& lc = r.sys.bundle.linearChange();
    std::vector<double> y(4);
    for (int i = 0; i < 4; ++i) y[static_cast<size_t>(i)] = r.nf.inverseMap[static_cast<size_t>(i)].evaluate(x);
    std::vector<double> acts(2), angs(2);
    for (int i = 0; i < 2; ++i) {
        acts[static_cast<size_t>(i)] = 0.5 * (y[static_cast<size_t>(i)] * y[static_cast<size_t>(i)] +
                                              y[static_cast<size_t>(i + 2)] * y[static_cast<size_t>(i + 2)]);
        angs[static_cast<size_t>(i)] = std::atan2(y[static_cast<size_t>(i + 2)], y[static_cast<size_t>(i)]);
    }
    auto Jb = lc.jFromActions(acts);
    CHECK(Jb[0] == doctest::Approx(J[0]).epsilon(1e-9));
}

TEST_CASE("curve sampling respects the chart range") {
    auto r = octest::reduce(octest::e1());
    double z0 = r.sys.epsilon / 4.0;
    auto chart = stableManifoldPoint(r.sys, z0, 0.0, {0.0});
    double t0 = timeFromZ(r.sys.N, z0);

    auto curve = buildOCurve(r.sys, r.nf, chart, logSpacedTimes(t0, 100.0 * t0, 17));
    REQUIRE(curve.samples.size() == 17);
    CHECK(curve.samples.front().t == doctest::Approx(t0));
    CHECK(curve.samples.front().z == doctest::Approx(z0).epsilon(1e-12));
    // z decreases along the curve like t^{-2}
    CHECK(curve.samples.back().z ==
          doctest::Approx(z0 / (100.0 * 100.0)).epsilon(1e-6));

    // times before the chart entry are outside the parametrized range
    CHECK_THROWS_AS(buildOCurve(r.sys, r.nf, chart, logSpacedTimes(t0 / 4.0, t0, 5)),
                    PipelineError);
}

TEST_CASE("verification passes on E1 and fails on a perturbed start") {
    auto r = octest::reduce(octest::e1());
    double z0 = r.sys.epsilon / 4.0;
    auto chart = stableManifoldPoint(r.sys, z0, 0.0, {0.0});
    double t0 = timeFromZ(r.sys.N, z0);
    auto curve = buildOCurve(r.sys, r.nf, chart, logSpacedTimes(t0, 100.0 * t0, 33));

    auto h = octest::e1();
    auto rep = verifyOCurve(h, curve, r.nf, r.sys, {});
    CHECK(rep.pass);
    CHECK(std::abs(rep.j1Fit.exponent + 2.0) <= 0.05);
    CHECK(std::abs(rep.j1Fit.amplitude / 0.125 - 1.0) <= 0.05);
    CHECK(rep.energyDriftRel <= 1e-9);

    // negative control: a transversal perturbation leaves the channel
    auto perturbed = curve;
    perturbed.samples.front().x[0] += 1e-3;
    bool failed = false;
    try {
        auto bad = verifyOCurve(h, perturbed, r.nf, r.sys, {});
        failed = !bad.j1Pass || !bad.pass;
    } catch (const PipelineError&) {
        failed = true;  // blow-up or step failure also counts as leaving
    }
    CHECK(failed);
}

TEST_CASE("the pipeline report is deterministic") {
    auto spec = parseSpec(octest::kE2Text);
    PipelineOptions opts;
    opts.stage = Stage::Reduce;
    auto a = runPipeline(spec, opts);
    auto b = runPipeline(spec, opts);
    CHECK(a.reportText() == b.reportText());
    CHECK(a.reportJson() == b.reportJson());
}

TEST_CASE("CSV artifacts carry the documented header") {
    auto spec = parseSpec(octest::kE1Text);
    PipelineOptions opts;
    opts.stage = Stage::OCurveStage;
    auto res = runPipeline(spec, opts);
    REQUIRE(res.curve.has_value());
    auto csv = curveCsv(spec.polynomial(), *res.curve);
    CHECK(csv.rfind("t,x1,x2,x3,x4,H,J1,psi1\n", 0) == 0);
}
