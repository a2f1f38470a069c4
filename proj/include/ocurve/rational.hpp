#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ocl {

// Exact rational coefficient type. mpq_class keeps values canonical
// (lowest terms, positive denominator), which is exactly the invariant
// we need for equality tests on resonance conditions.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Parses "p/q" or "p". Throws on malformed input or zero denominator.
inline Rational ratFromString(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            Rational q(text);
            q.canonicalize();
            return q;
        }
        Rational q(text.substr(0, slash) + "/" + text.substr(slash + 1));
        if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed rational: '" + text + "'");
    }
}

inline std::string ratToString(const Rational& q) { return q.get_str(); }

inline double toDouble(const Rational& q) { return q.get_d(); }

inline bool isZero(const Rational& q) { return sgn(q) == 0; }

// q^e for integer e >= 0.
inline Rational ratPow(const Rational& q, unsigned e) {
    Rational r(1);
    Rational base = q;
    while (e) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1u;
    }
    return r;
}

// Element of Q(i), used by the complexified normalization step.
struct GaussianRational {
    Rational re{0};
    Rational im{0};

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool isZero() const { return sgn(re) == 0 && sgn(im) == 0; }

    GaussianRational conj() const { return {re, -im}; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    GaussianRational& operator+=(const GaussianRational& b) {
        re += b.re;
        im += b.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& b) {
        re -= b.re;
        im -= b.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }

    GaussianRational inverse() const {
        Rational n = re * re + im * im;
        if (sgn(n) == 0) throw std::domain_error("inverse of zero Gaussian rational");
        return {re / n, -im / n};
    }
};

inline GaussianRational gaussI() { return {Rational(0), Rational(1)}; }

// Coefficient-concept helpers so Polynomial<C> works for both fields.
inline bool coeffIsZero(const Rational& q) { return sgn(q) == 0; }
inline bool coeffIsZero(const GaussianRational& q) { return q.isZero(); }
inline double coeffToDouble(const Rational& q) { return q.get_d(); }

}  // namespace ocl
