#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "ocurve/rational.hpp"

namespace ocl {

// Exact multivariate polynomial with coefficients in a field C.
// Variables are indexed 0..dim-1; for phase-space polynomials in dimension
// 2n the canonical pairs are (x_i, x_{i+n}).
template <class C>
class Polynomial {
public:
    using Exponents = std::vector<int>;
    using TermMap = std::map<Exponents, C>;

    Polynomial() : dim_(0) {}
    explicit Polynomial(int dim) : dim_(dim) {
        if (dim < 0) throw std::invalid_argument("negative dimension");
    }

    static Polynomial constant(int dim, C value) {
        Polynomial p(dim);
        p.addTerm(Exponents(static_cast<size_t>(dim), 0), std::move(value));
        return p;
    }

    static Polynomial variable(int dim, int index, C coeff = C(1)) {
        if (index < 0 || index >= dim) throw std::out_of_range("variable index");
        Polynomial p(dim);
        Exponents e(static_cast<size_t>(dim), 0);
        e[static_cast<size_t>(index)] = 1;
        p.addTerm(std::move(e), std::move(coeff));
        return p;
    }

    int dim() const { return dim_; }
    bool empty() const { return terms_.empty(); }
    size_t termCount() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    void addTerm(Exponents e, C coeff) {
        if (static_cast<int>(e.size()) != dim_) throw std::invalid_argument("exponent arity");
        for (int x : e)
            if (x < 0) throw std::invalid_argument("negative exponent");
        if (coeffIsZero(coeff)) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(std::move(e), std::move(coeff));
        } else {
            it->second += coeff;
            if (coeffIsZero(it->second)) terms_.erase(it);
        }
    }

    C coefficient(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? C(0) : it->second;
    }

    int degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, totalDegree(e));
        return d;
    }

    Polynomial& operator+=(const Polynomial& q) {
        checkDim(q);
        for (const auto& [e, c] : q.terms_) addTerm(e, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& q) {
        checkDim(q);
        for (const auto& [e, c] : q.terms_) addTerm(e, -c);
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(const Polynomial& a) {
        Polynomial r(a.dim_);
        for (const auto& [e, c] : a.terms_) r.terms_.emplace(e, -c);
        return r;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.checkDim(b);
        Polynomial r(a.dim_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(ea);
                for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                r.addTerm(std::move(e), ca * cb);
            }
        return r;
    }

    // Product with terms above maxDegree skipped instead of computed and
    // discarded; equal to (a * b).truncated(maxDegree).
    friend Polynomial multiplyTruncated(const Polynomial& a, const Polynomial& b, int maxDegree) {
        a.checkDim(b);
        Polynomial r(a.dim_);
        for (const auto& [ea, ca] : a.terms_) {
            int da = totalDegree(ea);
            if (da > maxDegree) continue;
            for (const auto& [eb, cb] : b.terms_) {
                if (da + totalDegree(eb) > maxDegree) continue;
                Exponents e(ea);
                for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                r.addTerm(std::move(e), ca * cb);
            }
        }
        return r;
    }

    Polynomial& operator*=(const C& s) {
        if (coeffIsZero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }
    friend Polynomial operator*(Polynomial a, const C& s) { return a *= s; }
    friend Polynomial operator*(const C& s, Polynomial a) { return a *= s; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }

    Polynomial derivative(int var) const {
        if (var < 0 || var >= dim_) throw std::out_of_range("derivative variable");
        Polynomial r(dim_);
        for (const auto& [e, c] : terms_) {
            int p = e[static_cast<size_t>(var)];
            if (p == 0) continue;
            Exponents d(e);
            d[static_cast<size_t>(var)] = p - 1;
            r.addTerm(std::move(d), c * C(p));
        }
        return r;
    }

    // Keeps terms with total degree <= maxDegree.
    Polynomial truncated(int maxDegree) const {
        Polynomial r(dim_);
        for (const auto& [e, c] : terms_)
            if (totalDegree(e) <= maxDegree) r.terms_.emplace(e, c);
        return r;
    }

    Polynomial homogeneousPart(int deg) const {
        Polynomial r(dim_);
        for (const auto& [e, c] : terms_)
            if (totalDegree(e) == deg) r.terms_.emplace(e, c);
        return r;
    }

    // Substitutes args[i] for variable i. All args must share a dimension.
    // With maxDegree >= 0, every intermediate product is truncated to that
    // total degree; since multiplication never lowers a term's degree, the
    // truncated result is exact through maxDegree.
    Polynomial compose(const std::vector<Polynomial>& args, int maxDegree = -1) const {
        if (static_cast<int>(args.size()) != dim_) throw std::invalid_argument("compose arity");
        int outDim = args.empty() ? 0 : args.front().dim_;
        for (const auto& a : args)
            if (a.dim_ != outDim) throw std::invalid_argument("compose dimension mismatch");
        auto mul = [&](const Polynomial& a, const Polynomial& b) {
            return maxDegree >= 0 ? multiplyTruncated(a, b, maxDegree) : a * b;
        };
        // Cache powers of each argument as needed.
        std::vector<std::vector<Polynomial>> powers(args.size());
        auto power = [&](size_t i, int p) -> const Polynomial& {
            auto& cache = powers[i];
            if (cache.empty()) cache.push_back(Polynomial::constant(outDim, C(1)));
            while (static_cast<int>(cache.size()) <= p)
                cache.push_back(mul(cache.back(), args[i]));
            return cache[static_cast<size_t>(p)];
        };
        Polynomial r(outDim);
        for (const auto& [e, c] : terms_) {
            Polynomial term = Polynomial::constant(outDim, c);
            for (size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0) term = mul(term, power(i, e[i]));
            r += term;
        }
        return r;
    }

    double evaluate(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("evaluate arity");
        double sum = 0.0;
        for (const auto& [e, c] : terms_) {
            double t = coeffToDouble(c);
            for (size_t i = 0; i < e.size(); ++i)
                for (int p = 0; p < e[i]; ++p) t *= x[i];
            sum += t;
        }
        return sum;
    }

    double maxAbsCoefficient() const {
        double m = 0.0;
        for (const auto& [e, c] : terms_) m = std::max(m, std::abs(coeffToDouble(c)));
        return m;
    }

    static int totalDegree(const Exponents& e) {
        int d = 0;
        for (int x : e) d += x;
        return d;
    }

private:
    void checkDim(const Polynomial& q) const {
        if (dim_ != q.dim_) throw std::invalid_argument("polynomial dimension mismatch");
    }

    int dim_;
    TermMap terms_;
};

using CartesianPolynomial = Polynomial<Rational>;
using ComplexPolynomial = Polynomial<GaussianRational>;

// Canonical Poisson bracket on R^{2n} with pairs (x_i, x_{i+n}):
// {f,g} = sum_i df/dx_i dg/dx_{i+n} - df/dx_{i+n} dg/dx_i.
// With maxDegree >= 0 the result is truncated to that total degree, with
// above-cutoff products skipped rather than computed.
template <class C>
Polynomial<C> poissonBracketCartesian(const Polynomial<C>& f, const Polynomial<C>& g,
                                      const C& pairFactor = C(1), int maxDegree = -1) {
    if (f.dim() != g.dim()) throw std::invalid_argument("bracket dimension mismatch");
    if (f.dim() % 2 != 0) throw std::invalid_argument("bracket needs even dimension");
    int n = f.dim() / 2;
    Polynomial<C> r(f.dim());
    auto mul = [&](const Polynomial<C>& a, const Polynomial<C>& b) {
        return maxDegree >= 0 ? multiplyTruncated(a, b, maxDegree) : a * b;
    };
    for (int i = 0; i < n; ++i) {
        r += mul(f.derivative(i), g.derivative(i + n));
        r -= mul(f.derivative(i + n), g.derivative(i));
    }
    if (!(pairFactor == C(1))) r *= pairFactor;
    return r;
}

}  // namespace ocl
