#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "ocurve/errors.hpp"
#include "ocurve/ray.hpp"

using namespace ocl;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("H3 holds for E1 with exactly vanishing witnesses") {
    auto h = octest::e1();
    auto res = checkH1H2(frequenciesFromQuadraticPart(h));
    auto nf = birkhoffNormalize(h, res, 3 * res.N);
    auto h3 = checkH3(nf, res);
    CHECK(h3.holds);
    for (const auto& v : h3.values) CHECK(v == 0);
}

TEST_CASE("E1 yields Psi = 4 sqrt(2) cos(sigma)") {
    auto h = octest::e1();
    auto res = checkH1H2(frequenciesFromQuadraticPart(h));
    auto nf = birkhoffNormalize(h, res, 3 * res.N);
    auto psi = buildPsi(nf, res);
    CHECK(psi.A == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(psi.sigma0) <= 1e-12);
    CHECK(std::abs(psi.B) <= 1e-12);
    CHECK(psi.k1 == 1);
    CHECK(psi.period() == doctest::Approx(2.0 * kPi));
}

TEST_CASE("E1 rays: roots pi/2 and 3 pi/2 with the right slopes") {
    auto h = octest::e1();
    auto res = checkH1H2(frequenciesFromQuadraticPart(h));
    auto nf = birkhoffNormalize(h, res, 3 * res.N);
    auto psi = buildPsi(nf, res);
    auto rays = findRays(psi);

    CHECK(rays.plus.c == doctest::Approx(3.0 * kPi / 2.0).epsilon(1e-14));
    CHECK(rays.minus.c == doctest::Approx(kPi / 2.0).epsilon(1e-14));
    CHECK(std::abs(psi.value(rays.plus.c)) <= 1e-12);
    CHECK(std::abs(psi.value(rays.minus.c)) <= 1e-12);
    CHECK(rays.plus.psiPrimeAtC == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-10));
    CHECK(rays.minus.psiPrimeAtC == doctest::Approx(-4.0 * std::sqrt(2.0)).epsilon(1e-10));
    CHECK(rays.plus.sign == +1);
    CHECK(rays.minus.sign == -1);

    // N odd: the roots sit where cos vanishes, so Psi'' vanishes there too
    CHECK(std::abs(psi.secondDerivative(rays.plus.c)) <= 1e-10);
    CHECK(std::abs(psi.secondDerivative(rays.minus.c)) <= 1e-10);

    // O- geometry: the two roots of cos differ by pi
    CHECK(std::abs(rays.plus.c - rays.minus.c) == doctest::Approx(kPi).epsilon(1e-14));
}

TEST_CASE("offset form A cos(sigma) + B selects the simple zeros") {
    PsiForm psi;
    psi.A = 2.0;
    psi.B = 1.0;
    psi.sigma0 = 0.0;
    psi.k1 = 1;
    auto rays = findRays(psi);
    CHECK(rays.plus.c == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
    CHECK(rays.minus.c == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-12));
    CHECK(rays.plus.psiPrimeAtC == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(rays.minus.psiPrimeAtC < 0.0);
}

TEST_CASE("degenerate Psi forms are hypothesis failures") {
    PsiForm tangent;
    tangent.A = 1.0;
    tangent.B = 1.0;  // |A| <= |B|: tangency, no simple zero
    tangent.k1 = 1;
    CHECK_THROWS_AS(findRays(tangent), PipelineError);

    PsiForm constant;
    constant.A = 0.0;
    constant.B = 0.5;
    constant.k1 = 1;
    try {
        findRays(constant);
        CHECK(false);
    } catch (const PipelineError& e) {
        CHECK(e.code() == ErrorCode::PsiConstant);
        CHECK(e.isHypothesisFailure());
    }
}
