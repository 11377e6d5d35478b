#pragma once

#include <fibsim/category.hpp>

#include <cstdint>
#include <unordered_map>

namespace fibsim {

struct ConfigHash {
    size_t operator()(uint64_t x) const {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return static_cast<size_t>(x ^ (x >> 31));
    }
};

/// Sparse vector over edge configurations; bit e set means edge e carries tau.
using SparseState = std::unordered_map<uint64_t, cplx, ConfigHash>;

double norm2(const SparseState& s);
double norm(const SparseState& s);
cplx inner(const SparseState& bra, const SparseState& ket);
void scale(SparseState& s, cplx factor);
/// y += factor * x
void axpy(SparseState& y, cplx factor, const SparseState& x);
/// Remove amplitudes below the threshold (absolute value).
void prune(SparseState& s, double eps = 1e-14);
/// Normalize to unit norm; returns the previous norm (0 if the state vanished).
double normalize(SparseState& s);

/// Fix the global phase: make the largest-magnitude amplitude real-positive
/// (ties broken by smallest configuration key).
void fix_phase(SparseState& s);

}  // namespace fibsim
