#include "ocurve/poisson_series.hpp"

namespace ocl {

PoissonSeries toActionAngle(const CartesianPolynomial& p) {
    if (p.dim() % 2 != 0) throw std::invalid_argument("phase-space dimension must be even");
    int n = p.dim() / 2;
    auto factor = [n](int index, bool isSin) {
        PoissonSeries s(n);
        std::vector<int> e(static_cast<size_t>(n), 0);
        std::vector<int> m(static_cast<size_t>(n), 0);
        e[static_cast<size_t>(index)] = 1;
        m[static_cast<size_t>(index)] = 1;
        s.addTerm(std::move(e), std::move(m), isSin, Rational(1));
        return s;
    };
    PoissonSeries result(n);
    for (const auto& [exps, coeff] : p.terms()) {
        PoissonSeries term = PoissonSeries::constant(n, coeff);
        for (int i = 0; i < n; ++i) {
            for (int r = 0; r < exps[static_cast<size_t>(i)]; ++r) term = term * factor(i, false);
            for (int r = 0; r < exps[static_cast<size_t>(i + n)]; ++r) term = term * factor(i, true);
        }
        result += term;
    }
    return result;
}

}  // namespace ocl
