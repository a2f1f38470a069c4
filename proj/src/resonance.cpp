#include "ocurve/resonance.hpp"

#include <numeric>

namespace ocl {

namespace {

// Lexicographic enumeration of h in Z_+^n with |h| <= maxOrder.
void enumerate(const std::vector<Rational>& omega, int maxOrder,
               std::vector<int>& h, size_t pos, int used,
               std::vector<std::vector<int>>& out) {
    if (pos == h.size()) {
        if (used == 0) return;
        Rational dot(0);
        for (size_t i = 0; i < h.size(); ++i) dot += omega[i] * Rational(h[i]);
        if (isZero(dot)) out.push_back(h);
        return;
    }
    for (int v = 0; v <= maxOrder - used; ++v) {
        h[pos] = v;
        enumerate(omega, maxOrder, h, pos + 1, used + v, out);
    }
    h[pos] = 0;
}

bool isPositiveMultiple(const std::vector<int>& h, const std::vector<int>& k) {
    // h = q * k for a positive integer q?
    int q = 0;
    for (size_t i = 0; i < k.size(); ++i) {
        if (k[i] == 0) {
            if (h[i] != 0) return false;
            continue;
        }
        if (h[i] % k[i] != 0) return false;
        int qi = h[i] / k[i];
        if (q == 0) q = qi;
        if (qi != q) return false;
    }
    return q >= 1;
}

}  // namespace

std::vector<std::vector<int>> findResonances(const std::vector<Rational>& omega, int maxOrder) {
    if (omega.empty()) throw std::invalid_argument("empty frequency vector");
    bool allZero = true;
    for (const auto& w : omega) allZero = allZero && isZero(w);
    if (allZero) throw std::invalid_argument("zero frequency vector");
    if (maxOrder < 1) throw std::invalid_argument("maxOrder must be >= 1");
    std::vector<std::vector<int>> out;
    std::vector<int> h(omega.size(), 0);
    enumerate(omega, maxOrder, h, 0, 0, out);
    return out;
}

ResonanceStructure checkH1H2(const std::vector<Rational>& omega, int scanBound) {
    if (omega.size() < 2)
        throw PipelineError(ErrorCode::BadInput, "need n >= 2 degrees of freedom");

    // Minimal resonance order.
    std::vector<int> k;
    int N = 0;
    for (int order = 1; order <= scanBound && N == 0; ++order) {
        for (const auto& h : findResonances(omega, order)) {
            int tot = 0;
            for (int v : h) tot += v;
            if (tot == order) {
                k = h;
                N = order;
                break;
            }
        }
    }
    if (N == 0)
        throw PipelineError(ErrorCode::NoResonance,
                            "no resonance up to order " + std::to_string(scanBound));
    if (N < 3)
        throw PipelineError(ErrorCode::OrderTooLow,
                            "minimal resonance has order " + std::to_string(N) + " < 3");

    int M = 3 * N - 1;
    for (const auto& h : findResonances(omega, M)) {
        if (!isPositiveMultiple(h, k))
            throw PipelineError(ErrorCode::MultipleDirections,
                                "independent resonance of order <= " + std::to_string(M));
    }

    ResonanceStructure res;
    res.permutation.resize(omega.size());
    std::iota(res.permutation.begin(), res.permutation.end(), 0);
    if (k.front() == 0) {
        size_t lead = 0;
        while (k[lead] == 0) ++lead;
        std::swap(res.permutation[0], res.permutation[lead]);
    }
    res.omega.resize(omega.size());
    res.k.resize(omega.size());
    for (size_t i = 0; i < omega.size(); ++i) {
        res.omega[i] = omega[static_cast<size_t>(res.permutation[i])];
        res.k[i] = k[static_cast<size_t>(res.permutation[i])];
    }
    res.N = N;
    res.M = M;
    res.oddN = (N % 2 == 1);
    res.e.resize(omega.size());
    for (size_t i = 0; i < omega.size(); ++i) res.e[i] = rat(res.k[i], N);
    return res;
}

}  // namespace ocl
