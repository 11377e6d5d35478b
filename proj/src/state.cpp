#include <fibsim/state.hpp>

#include <cmath>

namespace fibsim {

double norm2(const SparseState& s) {
    double acc = 0;
    for (const auto& [k, v] : s) acc += std::norm(v);
    return acc;
}

double norm(const SparseState& s) { return std::sqrt(norm2(s)); }

cplx inner(const SparseState& bra, const SparseState& ket) {
    const SparseState* small = &bra;
    const SparseState* large = &ket;
    bool swapped = false;
    if (small->size() > large->size()) {
        std::swap(small, large);
        swapped = true;
    }
    cplx acc = 0;
    for (const auto& [k, v] : *small) {
        auto it = large->find(k);
        if (it == large->end()) continue;
        acc += swapped ? std::conj(it->second) * v : std::conj(v) * it->second;
    }
    return acc;
}

void scale(SparseState& s, cplx factor) {
    for (auto& [k, v] : s) v *= factor;
}

void axpy(SparseState& y, cplx factor, const SparseState& x) {
    for (const auto& [k, v] : x) {
        auto [it, inserted] = y.try_emplace(k, 0.0);
        it->second += factor * v;
    }
}

void prune(SparseState& s, double eps) {
    for (auto it = s.begin(); it != s.end();)
        it = (std::abs(it->second) < eps) ? s.erase(it) : std::next(it);
}

double normalize(SparseState& s) {
    double n = norm(s);
    if (n == 0.0) return 0.0;
    scale(s, 1.0 / n);
    return n;
}

void fix_phase(SparseState& s) {
    if (s.empty()) return;
    uint64_t best_key = 0;
    double best_mag = -1.0;
    for (const auto& [k, v] : s) {
        double m = std::abs(v);
        if (m > best_mag + 1e-15 || (std::abs(m - best_mag) <= 1e-15 && k < best_key)) {
            best_mag = m;
            best_key = k;
        }
    }
    cplx a = s.at(best_key);
    scale(s, std::conj(a) / std::abs(a));
}

}  // namespace fibsim
