#pragma once

#include <fibsim/category.hpp>
#include <fibsim/lattice.hpp>
#include <fibsim/state.hpp>

#include <random>
#include <vector>

namespace fibsim {

enum class Pauli : uint8_t { X, Y, Z };

/// Single-qubit Pauli on an edge qubit (|0> = vacuum, |1> = tau).
SparseState apply_pauli(const SparseState& s, int edge, Pauli which);

/// Apply the basic tube operator O_{x y alpha beta} to a tailed face:
///   O|j, x> = delta_{x,x'} (v_alpha v_beta / v_y) *
///     sum_k F^{j_1 j_R x}_{alpha beta k_R}
///           (prod_nu F^{m_nu j_nu j_nu+1}_{alpha k_nu+1 k_nu})
///           F^{k_R k_1 y}_{alpha j_1 beta} |k, y>
/// where j are the face's boundary labels, m its legs (vacuum for missing
/// legs), and x, y the tail labels before and after.
SparseState apply_tube_term(const Lattice& lat, int face, const SparseState& s,
                            const TubeTerm& term);

/// Linear combination of tube operators (idempotents, nilpotents, ...).
SparseState apply_tube_terms(const Lattice& lat, int face, const SparseState& s,
                             const std::vector<TubeTerm>& terms);

/// Projector onto a tailed anyon charge in the face.
SparseState apply_charge_projector(const Lattice& lat, int face, const SparseState& s,
                                   Charge c);
/// Projector onto a doubled charge ignoring the tail split (central idempotent).
SparseState apply_central_projector(const Lattice& lat, int face, const SparseState& s,
                                    DLabel a);
/// Tube-algebra nilpotent mapping between the two tau-tau blocks.
SparseState apply_nilpotent(const Lattice& lat, int face, const SparseState& s,
                            bool tail_t_to_1);

/// B_p, the vacuum idempotent.
SparseState apply_plaquette_projector(const Lattice& lat, int face, const SparseState& s);

/// Closed-loop operator O_p^s: pull a loop with label `loop` onto the face
/// boundary without touching the tail (which is treated as a spectator leg):
///   O_p^s |j> = sum_k prod_nu F^{m_nu j_nu+1 j_nu}_{s k_nu k_nu+1} |k>
/// with the product cyclic over all boundary vertices.
SparseState apply_closed_loop(const Lattice& lat, int face, const SparseState& s, Fib loop);

/// Independent plaquette projector (1/D^2) sum_s d_s O_p^s restricted to a
/// vacuum tail; must agree with the tube-algebra vacuum idempotent.
SparseState apply_plaquette_naive(const Lattice& lat, int face, const SparseState& s);

/// Normalized prod_p B_p |all-vacuum>; faces are projected one at a time with
/// intermediate renormalization.
SparseState build_ground_state(const Lattice& lat);

// ---------------------------------------------------------------------------
// Vertex measurement and recovery
// ---------------------------------------------------------------------------

/// The seven qubits around the tail of one hexagon, plus its three vertices.
/// Qubit order: [0] top-left, [1] top-right, [2] bottom-left,
/// [3] bottom-right, [4] upper vertical (Wu), [5] lower vertical (Wl),
/// [6] tail.  Vertices: [0] top (t), [1] middle (m, the tail vertex),
/// [2] bottom (b).
struct Segment {
    std::array<int, 7> q{};
    std::array<int, 3> v{};
};

/// Segment of torus hexagon `hex`.
Segment torus_segment(const Lattice& lat, int hex);
/// Segment of the patch hexagon at axial offset (qh, rh).
Segment patch_segment(const Lattice& lat, int qh, int rh);
/// Segments containing the branching vertices of edge e (deduplicated), on
/// the torus.
std::vector<Segment> torus_segments_of_edge(const Lattice& lat, int e);
/// Torus hexagon whose segment contains branch vertex `vid`.
int torus_segment_hex_of_vertex(const Lattice& lat, int vid);

/// Violation pattern of a segment for one configuration: bit 0 = t violated,
/// bit 1 = m, bit 2 = b.
uint32_t segment_pattern(const Lattice& lat, const Segment& seg, uint64_t config);

/// Apply the recovery unitary U_{V,g} for a segment with measured violation
/// pattern V (bit 0 = t, bit 1 = m, bit 2 = b, nonzero) and tail outcome g.
/// The unitary permutes the three inner qubits (Wu, Wl, tail) conditioned on
/// nothing else; every component of `s` must be compatible with the measured
/// outcome, and every output component is checked to satisfy all three
/// vertex constraints.
SparseState apply_vertex_fix(const Lattice& lat, const Segment& seg, const SparseState& s,
                             uint32_t pattern, Fib g);

/// Violation pattern of the branching constraints for a configuration:
/// bit i set means branch vertex ids[i] is violated.
uint32_t violation_pattern(const Lattice& lat, uint64_t config,
                           const std::vector<int>& vertex_ids);

/// Keep only configurations whose violation pattern over the given vertices
/// equals `pattern` (projective vertex measurement).
SparseState project_violations(const Lattice& lat, const SparseState& s,
                               const std::vector<int>& vertex_ids, uint32_t pattern);

/// Keep only configurations with the given bit value on one edge
/// (projective tail-qubit measurement).
SparseState project_edge(const SparseState& s, int edge, int bit);

/// Uniform-ish random configuration satisfying every vertex constraint,
/// found by randomized backtracking.
uint64_t random_valid_config(const Lattice& lat, std::mt19937_64& rng);

/// Normalized random superposition of `n_configs` distinct valid
/// configurations with Gaussian amplitudes.
SparseState random_string_net_state(const Lattice& lat, std::mt19937_64& rng, int n_configs);

}  // namespace fibsim
