#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "common.hpp"
#include "ocurve/normal_form.hpp"
#include "ocurve/poisson_series.hpp"

using namespace ocl;

TEST_CASE("frequencies are read off the paired quadratic coefficients") {
    auto omega = frequenciesFromQuadraticPart(octest::e1());
    CHECK(omega == std::vector<Rational>{rat(2), rat(-1)});

    CartesianPolynomial cross(4);
    cross.addTerm({2, 0, 0, 0}, rat(1));
    cross.addTerm({0, 0, 2, 0}, rat(1));
    cross.addTerm({1, 1, 0, 0}, rat(1));
    CHECK_THROWS(frequenciesFromQuadraticPart(cross));

    CartesianPolynomial unpaired(4);
    unpaired.addTerm({2, 0, 0, 0}, rat(1));
    unpaired.addTerm({0, 0, 2, 0}, rat(2));
    CHECK_THROWS(frequenciesFromQuadraticPart(unpaired));
}

TEST_CASE("non-resonant cubic terms vanish exactly; the resonant block is unchanged") {
    auto h = octest::e1();
    CartesianPolynomial extra(4);
    extra.addTerm({3, 0, 0, 0}, rat(1));  // x1^3 is non-resonant
    auto hPlus = h + extra;

    auto res = checkH1H2(frequenciesFromQuadraticPart(hPlus));
    auto nf = birkhoffNormalize(hPlus, res, 9);

    // Degree 3 of the normal form in action-angle variables must equal the
    // resonant cubic of E1 exactly: x1^3 disappears without residue.
    auto cubicOriginal = toActionAngle(h.homogeneousPart(3));
    CHECK(nf.normalForm.selectHalfDegree(3) == cubicOriginal);
    CHECK(nf.resonantPart(0) == cubicOriginal);

    // and the original cubic of E1 never moves (E1 is its own normal form)
    auto nfE1 = birkhoffNormalize(h, checkH1H2(frequenciesFromQuadraticPart(h)), 9);
    CHECK(nfE1.normalForm == toActionAngle(h));
}

TEST_CASE("the transformation is symplectic below truncation, exactly") {
    auto h = octest::e1();
    CartesianPolynomial extra(4);
    extra.addTerm({3, 0, 0, 0}, rat(1));
    auto res = checkH1H2(frequenciesFromQuadraticPart(h + extra));
    auto nf = birkhoffNormalize(h + extra, res, 9);
    CHECK(symplecticityDefect(nf.forwardMap, 9 - 1) == 0.0);
}

TEST_CASE("compose oracle: H(forwardMap(y)) equals the normal form through truncation") {
    auto h = octest::e1();
    CartesianPolynomial extra(4);
    extra.addTerm({3, 0, 0, 0}, rat(1));
    auto hPlus = h + extra;
    auto res = checkH1H2(frequenciesFromQuadraticPart(hPlus));
    const int degree = 6;
    auto nf = birkhoffNormalize(hPlus, res, degree);

    auto composed = hPlus.compose(nf.forwardMap).truncated(degree);
    CHECK(composed == nf.normalFormCartesian.truncated(degree));
}

TEST_CASE("forward and inverse maps cancel through truncation") {
    auto hPlus = octest::e2();
    auto res = checkH1H2(frequenciesFromQuadraticPart(hPlus));
    const int degree = 6;
    auto nf = birkhoffNormalize(hPlus, res, degree);
    for (int i = 0; i < 4; ++i) {
        auto roundTrip = nf.inverseMap[static_cast<size_t>(i)].compose(nf.forwardMap);
        CHECK(roundTrip.truncated(degree - 1) ==
              CartesianPolynomial::variable(4, i).truncated(degree - 1));
    }
}

TEST_CASE("component split: E2 has the expected integrable and resonant blocks") {
    auto r = octest::reduce(octest::e2());
    // H^B_[2] = 4 I_1^2: angle-free, degree 2 in the actions
    auto i2 = r.nf.integrablePart(2);
    CHECK(!i2.empty());
    std::vector<Rational> acts = {Rational(1), Rational(3)};
    CHECK(i2.evaluateExact(acts) == rat(4));  // 4 * 1^2, independent of I_2
    // resonant block at r = 0 is the E1 cubic
    CHECK(r.nf.resonantPart(0) == toActionAngle(octest::e1().homogeneousPart(3)));
    CHECK(r.nf.higherHarmonics.empty());
}
