#include "ocurve/normal_form.hpp"

#include <optional>

#include "ocurve/errors.hpp"

namespace ocl {

namespace {

// m = q * k for some integer q (any sign)? Returns q.
std::optional<int> multipleOfK(const std::vector<int>& m, const std::vector<int>& k) {
    std::optional<int> q;
    for (size_t i = 0; i < k.size(); ++i) {
        if (k[i] == 0) {
            if (m[i] != 0) return std::nullopt;
            continue;
        }
        if (m[i] % k[i] != 0) return std::nullopt;
        int qi = m[i] / k[i];
        if (!q) q = qi;
        if (*q != qi) return std::nullopt;
    }
    return q ? q : std::optional<int>(0);
}

ComplexPolynomial toComplexCoefficients(const CartesianPolynomial& p) {
    ComplexPolynomial r(p.dim());
    for (const auto& [e, c] : p.terms()) r.addTerm(e, GaussianRational(c));
    return r;
}

// Substitution x_i = (z_i + w_i)/2, x_{i+n} = -i (z_i - w_i)/2.
ComplexPolynomial toComplexVariables(const CartesianPolynomial& p) {
    int dim = p.dim();
    int n = dim / 2;
    std::vector<ComplexPolynomial> subs;
    subs.reserve(static_cast<size_t>(dim));
    GaussianRational half(rat(1, 2));
    GaussianRational minusHalfI(Rational(0), rat(-1, 2));
    for (int i = 0; i < n; ++i) {
        auto z = ComplexPolynomial::variable(dim, i);
        auto w = ComplexPolynomial::variable(dim, i + n);
        subs.push_back((z + w) * half);
    }
    for (int i = 0; i < n; ++i) {
        auto z = ComplexPolynomial::variable(dim, i);
        auto w = ComplexPolynomial::variable(dim, i + n);
        subs.push_back((z - w) * minusHalfI);
    }
    return toComplexCoefficients(p).compose(subs);
}

// Substitution z_i = x_i + i x_{i+n}, w_i = x_i - i x_{i+n}; the result
// must be real for inputs that represent real polynomials.
CartesianPolynomial toRealVariables(const ComplexPolynomial& p) {
    int dim = p.dim();
    int n = dim / 2;
    std::vector<ComplexPolynomial> subs;
    subs.reserve(static_cast<size_t>(dim));
    GaussianRational plusI = gaussI();
    for (int i = 0; i < n; ++i) {
        auto x = ComplexPolynomial::variable(dim, i);
        auto y = ComplexPolynomial::variable(dim, i + n);
        subs.push_back(x + y * plusI);
    }
    for (int i = 0; i < n; ++i) {
        auto x = ComplexPolynomial::variable(dim, i);
        auto y = ComplexPolynomial::variable(dim, i + n);
        subs.push_back(x - y * plusI);
    }
    ComplexPolynomial q = p.compose(subs);
    CartesianPolynomial r(dim);
    for (const auto& [e, c] : q.terms()) {
        if (sgn(c.im) != 0)
            throw std::logic_error("complex normal form failed reality check");
        r.addTerm(e, c.re);
    }
    return r;
}

// Complexified canonical bracket: {f,g} = -2i sum_j (f_z g_w - f_w g_z),
// truncated to maxDegree with above-cutoff products skipped.
ComplexPolynomial complexBracket(const ComplexPolynomial& f, const ComplexPolynomial& g,
                                 int maxDegree) {
    return poissonBracketCartesian(f, g, GaussianRational(Rational(0), Rational(-2)), maxDegree);
}

// exp(ad_chi) F = sum_m ad^m F / m!, truncated at maxDegree, where
// ad F = {F, chi}.
template <class Poly, class Bracket>
Poly expLie(const Poly& f, const Poly& chi, int maxDegree, Bracket bracket) {
    Poly result = f.truncated(maxDegree);
    Poly term = result;
    Rational factorial(1);
    for (int m = 1; !term.empty(); ++m) {
        factorial *= Rational(m);
        term = bracket(term, chi, maxDegree);
        if (term.empty()) break;
        Poly scaled = term;
        result += scaled * typename Poly::TermMap::mapped_type(Rational(1) / factorial);
    }
    return result;
}

ComplexPolynomial expLieComplex(const ComplexPolynomial& f, const ComplexPolynomial& chi,
                                int maxDegree) {
    return expLie(f, chi, maxDegree,
                  [](const ComplexPolynomial& a, const ComplexPolynomial& b, int d) {
                      return complexBracket(a, b, d);
                  });
}

CartesianPolynomial expLieReal(const CartesianPolynomial& f, const CartesianPolynomial& chi,
                               int maxDegree) {
    return expLie(f, chi, maxDegree,
                  [](const CartesianPolynomial& a, const CartesianPolynomial& b, int d) {
                      return poissonBracketCartesian(a, b, Rational(1), d);
                  });
}

std::vector<CartesianPolynomial> identityMap(int dim) {
    std::vector<CartesianPolynomial> m;
    m.reserve(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) m.push_back(CartesianPolynomial::variable(dim, i));
    return m;
}

}  // namespace

std::vector<Rational> frequenciesFromQuadraticPart(const CartesianPolynomial& h) {
    if (h.dim() % 2 != 0) throw PipelineError(ErrorCode::BadInput, "odd phase-space dimension");
    int n = h.dim() / 2;
    std::vector<Rational> diag(static_cast<size_t>(h.dim()), Rational(0));
    for (const auto& [e, c] : h.terms()) {
        if (CartesianPolynomial::totalDegree(e) != 2) continue;
        int varA = -1, varB = -1;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 2) varA = varB = static_cast<int>(i);
            if (e[i] == 1) (varA < 0 ? varA : varB) = static_cast<int>(i);
        }
        if (varA != varB)
            throw PipelineError(ErrorCode::BadInput,
                                "cross term in the quadratic part; expected diagonal elliptic form");
        diag[static_cast<size_t>(varA)] = c;
    }
    std::vector<Rational> omega(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (diag[static_cast<size_t>(i)] != diag[static_cast<size_t>(i + n)])
            throw PipelineError(ErrorCode::BadInput,
                                "unpaired quadratic coefficients on pair " + std::to_string(i + 1));
        if (isZero(diag[static_cast<size_t>(i)]))
            throw PipelineError(ErrorCode::BadInput,
                                "zero frequency on pair " + std::to_string(i + 1));
        omega[static_cast<size_t>(i)] = Rational(2) * diag[static_cast<size_t>(i)];
    }
    return omega;
}

NormalFormResult birkhoffNormalize(const CartesianPolynomial& h, const ResonanceStructure& res,
                                   int truncationDegree) {
    int dim = h.dim();
    int n = dim / 2;
    if (n != res.n()) throw PipelineError(ErrorCode::BadInput, "resonance dimension mismatch");
    if (truncationDegree < 2 || truncationDegree > 3 * res.N)
        throw PipelineError(ErrorCode::BadInput, "truncation degree out of range [2, 3N]");

    auto omega = frequenciesFromQuadraticPart(h);
    for (int i = 0; i < n; ++i)
        if (omega[static_cast<size_t>(i)] != res.omega[static_cast<size_t>(i)])
            throw PipelineError(ErrorCode::BadInput,
                                "frequency vector disagrees with the resonance structure");

    const int D = truncationDegree;
    ComplexPolynomial hc = toComplexVariables(h.truncated(D));
    std::vector<CartesianPolynomial> generators;

    for (int d = 3; d <= D; ++d) {
        ComplexPolynomial hd = hc.homogeneousPart(d);
        ComplexPolynomial chi(dim);
        for (const auto& [e, c] : hd.terms()) {
            std::vector<int> m(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i)
                m[static_cast<size_t>(i)] =
                    e[static_cast<size_t>(i)] - e[static_cast<size_t>(i + n)];
            if (multipleOfK(m, res.k)) continue;  // resonant module, keep
            Rational div(0);
            for (int i = 0; i < n; ++i)
                div += omega[static_cast<size_t>(i)] * Rational(m[static_cast<size_t>(i)]);
            if (isZero(div))
                throw PipelineError(ErrorCode::MultipleDirections,
                                    "zero divisor on a non-resonant monomial at degree " +
                                        std::to_string(d));
            // Cancel h_ab against {H2, chi}: chi_ab = i h_ab / <omega, a-b>.
            chi.addTerm(e, gaussI() * c * GaussianRational(Rational(1) / div));
        }
        if (chi.empty()) continue;
        hc = expLieComplex(hc, chi, D);
        // The degree just processed must now be fully resonant.
        ComplexPolynomial processed = hc.homogeneousPart(d);
        for (const auto& [e, c] : processed.terms()) {
            std::vector<int> m(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i)
                m[static_cast<size_t>(i)] =
                    e[static_cast<size_t>(i)] - e[static_cast<size_t>(i + n)];
            if (!multipleOfK(m, res.k))
                throw std::logic_error("homological step left a non-resonant term");
        }
        generators.push_back(toRealVariables(chi));
    }

    NormalFormResult nf;
    nf.n = n;
    nf.truncationDegree = D;
    nf.omega = omega;
    nf.k = res.k;
    nf.normalFormCartesian = toRealVariables(hc).truncated(D);
    nf.normalForm = toActionAngle(nf.normalFormCartesian);

    nf.forwardMap = identityMap(dim);
    nf.inverseMap = identityMap(dim);
    for (const auto& g : generators) {
        std::vector<CartesianPolynomial> flow, flowInv;
        flow.reserve(static_cast<size_t>(dim));
        flowInv.reserve(static_cast<size_t>(dim));
        for (int i = 0; i < dim; ++i) {
            auto xi = CartesianPolynomial::variable(dim, i);
            flow.push_back(expLieReal(xi, g, D));
            flowInv.push_back(expLieReal(xi, -g, D));
        }
        for (auto& comp : nf.forwardMap) comp = comp.compose(flow, D);
        std::vector<CartesianPolynomial> inv;
        inv.reserve(static_cast<size_t>(dim));
        for (const auto& comp : flowInv) inv.push_back(comp.compose(nf.inverseMap, D));
        nf.inverseMap = std::move(inv);
    }

    extractComponents(nf, res);
    return nf;
}

void extractComponents(NormalFormResult& nf, const ResonanceStructure& res) {
    nf.integrableParts.clear();
    nf.resonantParts.clear();
    nf.doubleHarmonicParts = PoissonSeries(nf.n);
    nf.higherHarmonics = PoissonSeries(nf.n);

    for (const auto& term : nf.normalForm.terms()) {
        auto q = multipleOfK(term.angleIndex, res.k);
        if (!q)
            throw PipelineError(ErrorCode::BadInput,
                                "normal-form term outside the resonant module");
        int halfDeg = 0;
        for (int v : term.halfExponents) halfDeg += v;
        int absQ = std::abs(*q);
        if (absQ == 0) {
            if (halfDeg % 2 != 0)
                throw PipelineError(ErrorCode::BadInput,
                                    "angle-free term with half-integer action degree");
            auto [it, unused] = nf.integrableParts.try_emplace(halfDeg / 2, PoissonSeries(nf.n));
            it->second.addTerm(term.halfExponents, term.angleIndex, term.isSin, term.coeff);
        } else if (absQ == 1) {
            int r2 = halfDeg - res.N;
            if (r2 < 0 || r2 % 2 != 0)
                throw PipelineError(ErrorCode::BadInput,
                                    "first-harmonic term outside the H_r action pattern");
            auto [it, unused] = nf.resonantParts.try_emplace(r2 / 2, PoissonSeries(nf.n));
            it->second.addTerm(term.halfExponents, term.angleIndex, term.isSin, term.coeff);
        } else if (absQ == 2) {
            nf.doubleHarmonicParts.addTerm(term.halfExponents, term.angleIndex, term.isSin,
                                           term.coeff);
        } else {
            nf.higherHarmonics.addTerm(term.halfExponents, term.angleIndex, term.isSin,
                                       term.coeff);
        }
    }
}

double symplecticityDefect(const std::vector<CartesianPolynomial>& map, int degree) {
    if (map.empty() || map.size() % 2 != 0)
        throw std::invalid_argument("map must have 2n components");
    int dim = static_cast<int>(map.size());
    int n = dim / 2;
    double defect = 0.0;
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            CartesianPolynomial b = poissonBracketCartesian(map[static_cast<size_t>(i)],
                                                            map[static_cast<size_t>(j)]);
            if (j == i + n) b -= CartesianPolynomial::constant(dim, Rational(1));
            defect = std::max(defect, b.truncated(degree).maxAbsCoefficient());
        }
    }
    return defect;
}

}  // namespace ocl
