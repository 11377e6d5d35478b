/// \file category.hpp
/// Algebraic data of the Fibonacci unitary fusion category and its Drinfeld
/// double.  Everything downstream (lattice operators, fusion-basis engine,
/// matrix-element tables) consumes the symbols defined here, so the
/// conventions are frozen in this one place:
///
///  * labels: 0 = vacuum, 1 = tau; branching set {111, tt1, 1tt, t1t, ttt}
///  * d_1 = 1, d_t = phi, total dimension D^2 = 2 + phi
///  * F^{ttm}_{ttn} block = [[1/phi, 1/sqrt(phi)], [1/sqrt(phi), -1/phi]],
///    all other admissible entries equal 1 (unique unitary pentagon solution)
///  * chirality: R^{tt}_1 = e^{4 pi i/5}, R^{tt}_t = e^{-3 pi i/5}
///    (the conjugate solution is the opposite chirality; table files record
///    which convention produced them)
///
/// Doubled labels pair a forward and a reverse chirality component; their
/// F/R data are products of the component data.

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace fibsim {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Fibonacci labels and scalar data
// ---------------------------------------------------------------------------

using Fib = std::uint8_t;
inline constexpr Fib VAC = 0;
inline constexpr Fib TAU = 1;

/// Golden ratio and friends, spelled out to full double precision.
inline constexpr double PHI      = 1.6180339887498948482;   // (1+sqrt 5)/2
inline constexpr double INV_PHI  = 0.6180339887498948482;   // phi - 1
inline constexpr double SQRT_PHI = 1.2720196495140689643;   // phi^{1/2}
inline constexpr double DSQ      = 2.0 + PHI;               // total dim^2
inline constexpr double DTOT     = 1.9021130325903071442;   // sqrt(2+phi)
inline constexpr double INV_SQRT5 = 0.44721359549995793928; // 5^{-1/2}

/// Branching (fusion multiplicity) delta_{abc} for Fibonacci: admissible
/// triples are all except those with exactly one tau.
constexpr int fib_delta(Fib a, Fib b, Fib c) {
    return (static_cast<int>(a) + b + c == 1) ? 0 : 1;
}

constexpr double fib_qdim(Fib a) { return a == VAC ? 1.0 : PHI; }
constexpr double fib_vx(Fib a)   { return a == VAC ? 1.0 : SQRT_PHI; }

/// F^{ijm}_{kln}.  Real-valued for Fibonacci.  Zero unless the four vertex
/// conditions delta_{ijm}, delta_{mkl}, delta_{iln}, delta_{jkn} hold.
double fsym(Fib i, Fib j, Fib m, Fib k, Fib l, Fib n);

/// Symmetrised 6j symbol G^{ijk}_{lmn} = F^{ijk}_{lmn} / (v_k v_n).
double gsym(Fib i, Fib j, Fib k, Fib l, Fib m, Fib n);

/// R^{ab}_c braiding phase (zero when delta_{abc} fails).
cplx rsym(Fib a, Fib b, Fib c);

/// Topological twist theta_a = conj(R^{aa}_1).
cplx fib_twist(Fib a);

// ---------------------------------------------------------------------------
// Doubled (Drinfeld double) labels
// ---------------------------------------------------------------------------

/// Doubled label packed as (forward << 1) | reverse, lexicographic order
/// 11 < 1t < t1 < tt.
using DLabel = std::uint8_t;
inline constexpr DLabel D_11 = 0;
inline constexpr DLabel D_1T = 1;
inline constexpr DLabel D_T1 = 2;
inline constexpr DLabel D_TT = 3;
inline constexpr int N_DLABEL = 4;

constexpr Fib dfwd(DLabel a) { return static_cast<Fib>(a >> 1); }
constexpr Fib drev(DLabel a) { return static_cast<Fib>(a & 1); }
constexpr DLabel make_dlabel(Fib fwd, Fib rev) {
    return static_cast<DLabel>((fwd << 1) | rev);
}

constexpr int ddelta(DLabel a, DLabel b, DLabel c) {
    return fib_delta(dfwd(a), dfwd(b), dfwd(c)) *
           fib_delta(drev(a), drev(b), drev(c));
}
constexpr double dqdim(DLabel a) { return fib_qdim(dfwd(a)) * fib_qdim(drev(a)); }

/// Doubled F: product of the component F symbols.
double dfsym(DLabel i, DLabel j, DLabel m, DLabel k, DLabel l, DLabel n);

/// Doubled R: forward component braids forward, reverse braids with the
/// conjugate phase, R^{ab}_c = R^{a+b+}_{c+} * conj(R^{b- a-}_{c-}).
cplx drsym(DLabel a, DLabel b, DLabel c);

/// Doubled twist theta_{(a+,a-)} = theta_{a+} conj(theta_{a-}).
cplx dtwist(DLabel a);

// ---------------------------------------------------------------------------
// Tailed charges (plaquette syndrome values)
// ---------------------------------------------------------------------------

/// The five (doubled charge, tail label) combinations with
/// delta(fwd, rev, tail) = 1.  Enumeration order is the canonical one used
/// throughout tables and serialized output.
enum class Charge : std::uint8_t {
    Vac  = 0,  // (11, tail 1)
    OneT = 1,  // (1t, tail t)
    TOne = 2,  // (t1, tail t)
    TT1  = 3,  // (tt, tail 1)
    TTt  = 4,  // (tt, tail t)
};
inline constexpr int N_CHARGE = 5;

constexpr DLabel charge_dlabel(Charge c) {
    constexpr DLabel map[N_CHARGE] = {D_11, D_1T, D_T1, D_TT, D_TT};
    return map[static_cast<int>(c)];
}
constexpr Fib charge_tail(Charge c) {
    constexpr Fib map[N_CHARGE] = {VAC, TAU, TAU, VAC, TAU};
    return map[static_cast<int>(c)];
}
/// Inverse of (dlabel, tail) -> charge; returns false if inadmissible.
bool make_charge(DLabel d, Fib tail, Charge& out);

const char* charge_name(Charge c);           // "11", "1t", "t1", "tt1", "ttt"
bool parse_charge(const std::string& s, Charge& out);

// ---------------------------------------------------------------------------
// Tube algebra coefficients
// ---------------------------------------------------------------------------

/// One term  coeff * O_{x y alpha beta}  of a tube-algebra element.
struct TubeTerm {
    Fib x, y, alpha, beta;
    cplx coeff;
};

/// Simple idempotent P^{c} projecting a plaquette onto tailed charge c.
/// The five projectors sum to the identity on the constraint-satisfying
/// subspace.
std::vector<TubeTerm> tube_idempotent(Charge c);

/// Off-diagonal (nilpotent) elements connecting the two tt tail sectors:
/// direction=false maps tail 1 -> tail t, direction=true maps t -> 1.
std::vector<TubeTerm> tube_nilpotent(bool tail_t_to_1);

/// Central idempotents P^{(a+,a-)} = sum of simple ones with that charge.
std::vector<TubeTerm> tube_central_idempotent(DLabel d);

// ---------------------------------------------------------------------------
// Curve-swap matrix
// ---------------------------------------------------------------------------

/// Matrix element of the clockwise exchange of neighbouring curve anyons
/// a_j, a_{j+1} in a caterpillar fusion tree.  Row tree: (b1 aj)b2 aj1 -> b3;
/// the column tree carries the exchanged leaf order: (b1 aj1)b2' aj -> b3.
///   B_{b2 b2'} = sum_c dF^{b1 aj b2}_{aj1 b3 c} dR^{aj aj1}_c
///                      dF^{b1 aj1 b2'}_{aj b3 c}
/// (recouple the adjacent pair into its direct fusion channel c, braid there,
/// recouple back).  counterclockwise = true uses the inverse braiding
/// (conjugate R).
cplx bswap(DLabel b1, DLabel aj, DLabel b2, DLabel aj1, DLabel b3, DLabel b2p,
           bool counterclockwise = false);

// ---------------------------------------------------------------------------
// Axiom verification
// ---------------------------------------------------------------------------

struct AxiomReport {
    double physicality   = 0;  // F vanishes off the admissible set
    double pentagon      = 0;
    double unitarity     = 0;  // row orthonormality of F blocks
    double conj_symmetry = 0;  // F real + index symmetry of the inverse
    double tetrahedral   = 0;
    double normalization = 0;  // F^{ii1}_{jjk} = v_k/(v_i v_j)
    double qdim          = 0;  // d_a from F^{aa1}_{aa1}
    double hexagon       = 0;  // both chirality equations
    double doubled       = 0;  // doubled pentagon/hexagon spot checks
    double max_residual  = 0;
    double elapsed_sec   = 0;
    bool pass(double tol = 1e-12) const { return max_residual < tol; }
};

AxiomReport verify_axioms();

}  // namespace fibsim
