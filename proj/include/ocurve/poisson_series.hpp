#pragma once

#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "ocurve/polynomial.hpp"
#include "ocurve/rational.hpp"

namespace ocl {

// Finite sum of terms
//
//     coeff * prod_a (2 I_a)^(e_a / 2) * {cos, sin}(<theta, m>),
//
// with exact rational coefficients. The action part is kept in sqrt(2I)
// units so that the rewrite x_i = sqrt(2 I_i) cos(theta_i) stays exact;
// in I units the numeric coefficient is coeff * 2^(sum e / 2).
//
// Canonical form: the first nonzero entry of m is positive (the sign is
// absorbed into the harmonic parity), sin terms with m = 0 are dropped,
// and no zero coefficients or duplicate (e, m, harmonic) keys are stored.
// Negative half-exponents can appear in action-derivative series; they are
// never produced by toActionAngle.
class PoissonSeries {
public:
    struct Term {
        std::vector<int> halfExponents;  // e: units of 1/2 in the power of 2*I_a
        std::vector<int> angleIndex;     // m
        bool isSin = false;
        Rational coeff{0};
    };

    PoissonSeries() : n_(0) {}
    explicit PoissonSeries(int n) : n_(n) {
        if (n < 0) throw std::invalid_argument("negative dimension");
    }

    static PoissonSeries constant(int n, Rational c) {
        PoissonSeries s(n);
        s.addTerm(std::vector<int>(static_cast<size_t>(n), 0),
                  std::vector<int>(static_cast<size_t>(n), 0), false, std::move(c));
        return s;
    }

    int dim() const { return n_; }
    bool empty() const { return terms_.empty(); }
    size_t termCount() const { return terms_.size(); }

    void addTerm(std::vector<int> e, std::vector<int> m, bool isSin, Rational coeff) {
        if (static_cast<int>(e.size()) != n_ || static_cast<int>(m.size()) != n_)
            throw std::invalid_argument("term arity");
        if (ocl::isZero(coeff)) return;
        // Normalize the angle index sign.
        int lead = 0;
        for (int v : m) {
            if (v != 0) {
                lead = v;
                break;
            }
        }
        if (lead < 0) {
            for (int& v : m) v = -v;
            if (isSin) coeff = -coeff;
        }
        if (lead == 0 && isSin) return;  // sin(0) == 0
        Key key{std::move(e), std::move(m), isSin};
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(std::move(key), std::move(coeff));
        } else {
            it->second += coeff;
            if (ocl::isZero(it->second)) terms_.erase(it);
        }
    }

    std::vector<Term> terms() const {
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& [k, c] : terms_)
            out.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), c});
        return out;
    }

    Rational coefficient(const std::vector<int>& e, const std::vector<int>& m, bool isSin) const {
        auto it = terms_.find(Key{e, m, isSin});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    PoissonSeries& operator+=(const PoissonSeries& q) {
        checkDim(q);
        for (const auto& [k, c] : q.terms_)
            addTerm(std::get<0>(k), std::get<1>(k), std::get<2>(k), c);
        return *this;
    }
    PoissonSeries& operator-=(const PoissonSeries& q) {
        checkDim(q);
        for (const auto& [k, c] : q.terms_)
            addTerm(std::get<0>(k), std::get<1>(k), std::get<2>(k), -c);
        return *this;
    }
    friend PoissonSeries operator+(PoissonSeries a, const PoissonSeries& b) { return a += b; }
    friend PoissonSeries operator-(PoissonSeries a, const PoissonSeries& b) { return a -= b; }

    PoissonSeries& operator*=(const Rational& s) {
        if (ocl::isZero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }
    friend PoissonSeries operator*(PoissonSeries a, const Rational& s) { return a *= s; }
    friend PoissonSeries operator*(const Rational& s, PoissonSeries a) { return a *= s; }

    friend bool operator==(const PoissonSeries& a, const PoissonSeries& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

    // Product expansion via cos/sin product-to-sum identities.
    friend PoissonSeries operator*(const PoissonSeries& a, const PoissonSeries& b) {
        a.checkDim(b);
        PoissonSeries r(a.n_);
        Rational half = rat(1, 2);
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                const auto& [ea, ma, sa] = ka;
                const auto& [eb, mb, sb] = kb;
                std::vector<int> e(ea);
                for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                std::vector<int> mSum(ma), mDiff(ma);
                for (size_t i = 0; i < mSum.size(); ++i) {
                    mSum[i] += mb[i];
                    mDiff[i] -= mb[i];
                }
                Rational c = ca * cb * half;
                if (!sa && !sb) {  // cos cos = (cos(m-m') + cos(m+m'))/2
                    r.addTerm(e, std::move(mDiff), false, c);
                    r.addTerm(std::move(e), std::move(mSum), false, c);
                } else if (sa && sb) {  // sin sin = (cos(m-m') - cos(m+m'))/2
                    r.addTerm(e, std::move(mDiff), false, c);
                    r.addTerm(std::move(e), std::move(mSum), false, -c);
                } else if (sa && !sb) {  // sin cos = (sin(m+m') + sin(m-m'))/2
                    r.addTerm(e, std::move(mDiff), true, c);
                    r.addTerm(std::move(e), std::move(mSum), true, c);
                } else {  // cos sin = (sin(m+m') - sin(m-m'))/2
                    r.addTerm(e, std::move(mDiff), true, -c);
                    r.addTerm(std::move(e), std::move(mSum), true, c);
                }
            }
        return r;
    }

    // Numeric value at actions I >= 0 and angles theta. Half powers use the
    // principal square root; a negative action is rejected.
    double evaluate(std::span<const double> actions, std::span<const double> angles) const {
        for (double v : actions)
            if (v < 0.0) throw std::domain_error("negative action in evaluate");
        return evaluateUnchecked(actions, angles);
    }

    // Same, but tolerates negative actions in slots where every exponent is
    // an even half-count (integer power). Used by reduced-field evaluation
    // where transverse actions may dip infinitesimally below zero.
    double evaluateUnchecked(std::span<const double> actions,
                             std::span<const double> angles) const {
        if (static_cast<int>(actions.size()) != n_ || static_cast<int>(angles.size()) != n_)
            throw std::invalid_argument("evaluate arity");
        double sum = 0.0;
        for (const auto& [k, c] : terms_) {
            const auto& [e, m, isSin] = k;
            double t = toDouble(c);
            for (size_t i = 0; i < e.size(); ++i) t *= halfPow(2.0 * actions[i], e[i]);
            double phase = 0.0;
            for (size_t i = 0; i < m.size(); ++i) phase += m[i] * angles[i];
            t *= isSin ? std::sin(phase) : std::cos(phase);
            sum += t;
        }
        return sum;
    }

    // Exact value for an angle-free series with integer action powers.
    Rational evaluateExact(const std::vector<Rational>& actions) const {
        if (static_cast<int>(actions.size()) != n_) throw std::invalid_argument("evaluate arity");
        Rational sum(0);
        for (const auto& [k, c] : terms_) {
            const auto& [e, m, isSin] = k;
            for (int mi : m)
                if (mi != 0) throw std::domain_error("exact evaluation needs angle-free series");
            Rational t = c;
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (e[i] % 2 != 0)
                    throw std::domain_error("exact evaluation needs integer action powers");
                Rational base = Rational(2) * actions[i];
                if (e[i] > 0) {
                    t *= ratPow(base, static_cast<unsigned>(e[i] / 2));
                } else {
                    if (ocl::isZero(base)) throw std::domain_error("pole at zero action");
                    t *= ratPow(Rational(1) / base, static_cast<unsigned>(-e[i] / 2));
                }
            }
            sum += t;
        }
        return sum;
    }

    // d/dI_a; may introduce negative half-exponents.
    PoissonSeries derivativeAction(int a) const {
        checkIndex(a);
        PoissonSeries r(n_);
        for (const auto& [k, c] : terms_) {
            const auto& [e, m, isSin] = k;
            if (e[static_cast<size_t>(a)] == 0) continue;
            std::vector<int> d(e);
            d[static_cast<size_t>(a)] -= 2;
            r.addTerm(std::move(d), m, isSin, c * Rational(e[static_cast<size_t>(a)]));
        }
        return r;
    }

    // d/dtheta_a.
    PoissonSeries derivativeAngle(int a) const {
        checkIndex(a);
        PoissonSeries r(n_);
        for (const auto& [k, c] : terms_) {
            const auto& [e, m, isSin] = k;
            int ma = m[static_cast<size_t>(a)];
            if (ma == 0) continue;
            if (isSin)
                r.addTerm(e, m, false, c * Rational(ma));
            else
                r.addTerm(e, m, true, -c * Rational(ma));
        }
        return r;
    }

    // Keeps terms whose angle index satisfies the predicate.
    template <class Pred>
    PoissonSeries filterAngle(Pred pred) const {
        PoissonSeries r(n_);
        for (const auto& [k, c] : terms_) {
            if (pred(std::get<1>(k))) r.addTerm(std::get<0>(k), std::get<1>(k), std::get<2>(k), c);
        }
        return r;
    }

    // Keeps terms with sum(e) == twiceDegree (Cartesian degree = I-degree*2).
    PoissonSeries selectHalfDegree(int twiceDegree) const {
        PoissonSeries r(n_);
        for (const auto& [k, c] : terms_) {
            int s = 0;
            for (int v : std::get<0>(k)) s += v;
            if (s == twiceDegree) r.addTerm(std::get<0>(k), std::get<1>(k), std::get<2>(k), c);
        }
        return r;
    }

    int maxHalfDegree() const {
        int d = 0;
        for (const auto& [k, c] : terms_) {
            int s = 0;
            for (int v : std::get<0>(k)) s += v;
            d = std::max(d, s);
        }
        return d;
    }

    static double halfPow(double base, int halfCount) {
        if (halfCount == 0) return 1.0;
        if (halfCount % 2 == 0) {
            double r = 1.0;
            int p = halfCount / 2;
            double b = p > 0 ? base : 1.0 / base;
            for (int i = 0; i < std::abs(p); ++i) r *= b;
            return r;
        }
        if (base < 0.0) throw std::domain_error("half power of negative value");
        return std::pow(base, 0.5 * halfCount);
    }

private:
    using Key = std::tuple<std::vector<int>, std::vector<int>, bool>;

    void checkDim(const PoissonSeries& q) const {
        if (n_ != q.n_) throw std::invalid_argument("series dimension mismatch");
    }
    void checkIndex(int a) const {
        if (a < 0 || a >= n_) throw std::out_of_range("series index");
    }

    int n_;
    std::map<Key, Rational> terms_;
};

// Exact rewrite of a phase-space polynomial under
// x_i = sqrt(2 I_i) cos(theta_i), x_{i+n} = sqrt(2 I_i) sin(theta_i).
PoissonSeries toActionAngle(const CartesianPolynomial& p);

}  // namespace ocl
