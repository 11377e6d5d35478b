#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <fibsim/category.hpp>
#include <fibsim/lattice.hpp>
#include <fibsim/state.hpp>

namespace fibsim {

/// A mutable trivalent open graph carrying a sparse string-net state.
///
/// Edges own stable bit slots in the configuration words of the attached
/// SparseState, so states move in and out of the morph without re-indexing.
/// Vertices store their incident half-edges (darts, 2*edge + end) in
/// counterclockwise order.  Local moves (2-2 Pachner recouplings, edge splits,
/// stub and loop creation/removal, projective edge measurements) transform
/// graph and state coherently.
class Morph {
public:
    /// Wrap a lattice (torus or patch) around a state; edge slots coincide
    /// with the lattice's edge indices.
    static Morph from_lattice(const Lattice& lat, SparseState s);

    const SparseState& state() const { return state_; }
    SparseState& state() { return state_; }

    // -- introspection ------------------------------------------------------
    bool edge_alive(int e) const {
        return e >= 0 && 2 * e + 1 < (int)dart_vertex_.size() && dart_vertex_[2 * e] >= 0;
    }
    bool vertex_alive(int v) const {
        return v >= 0 && v < (int)vert_.size() && !vert_[v].empty();
    }
    int degree(int v) const { return (int)vert_[v].size(); }
    /// Endpoint vertices of an edge (equal for a self-loop).
    std::array<int, 2> endpoints(int e) const {
        return {dart_vertex_[2 * e], dart_vertex_[2 * e + 1]};
    }
    /// Counterclockwise list of incident darts.
    const std::vector<int>& incident(int v) const { return vert_[v]; }
    /// The vertex a dart emanates from.
    int dart_vertex(int d) const { return dart_vertex_[d]; }
    /// Number of currently allocated edges.
    int n_edges() const;
    /// Walk the face to the left of dart d; returns the cyclic dart sequence
    /// along the boundary (stub edges appear twice, out and back).
    std::vector<int> face_walk(int d) const;
    /// Structural equality: same live vertices (rotations up to cyclic shift)
    /// and same dart-to-vertex assignment.
    bool same_graph(const Morph& other) const;
    /// Human-readable structure listing for debugging.
    std::string dump() const;

    // -- local moves --------------------------------------------------------
    /// 2-2 Pachner move on edge e (both endpoints trivalent, no self-loop).
    /// With ccw rotations (e,a,b) and (e,c,d) at the two endpoints, recouples
    /// to (e,d,a) / (e,b,c) with amplitude F(b,a,m; d,c,n).  Unitary on the
    /// string-net subspace.
    void fmove(int e);
    /// Inverse of fmove(e).
    void fmove_inv(int e);

    /// Insert a degree-2 vertex into e next to endpoints(e)[at_end].  The new
    /// edge (fresh slot, label copied) connects the new vertex to that
    /// endpoint.  Returns {new vertex, new edge}.
    std::array<int, 2> split2(int e, int at_end, int preferred_slot = -1);
    /// Remove a degree-2 vertex whose two edge labels agree on all of the
    /// support, merging the second incident edge into the first.
    void contract2(int v);

    /// Attach a fresh vacuum stub at vertex v, counterclockwise after
    /// incident dart `after`.  Returns the stub edge; its far end is a new
    /// degree-1 tip.
    int add_stub(int v, int after, int preferred_slot = -1);
    /// Remove a dangling stub that is vacuum-labeled on all of the support.
    void remove_stub(int e);

    /// Grow a self-loop at degree-1 tip vertex `tip` with amplitude d_l / D
    /// per loop label l (modular-S image of the vacuum).  Isometry.  `flip`
    /// selects the loop's handedness (the mirror-image embedding).
    int add_loop(int tip, int preferred_slot = -1, bool flip = false);
    /// Adjoint of add_loop: contract a self-loop hanging at a trivalent apex.
    /// Returns the squared-norm defect (0 when the state lies in the
    /// isometry's image).
    double remove_loop(int e);

    /// Project edge e onto label g without renormalizing; returns the branch
    /// weight (squared norm).
    double project_edge(int e, Fib g);
    /// Project a dangling leaf edge onto label g and delete it, tracing the
    /// leaf out.  Returns the branch weight.
    double project_out_leaf(int e, Fib g);
    /// Project edge e onto label g and delete it outright (label-basis trace
    /// of a non-leaf qubit).  The two faces bordering e merge; endpoint
    /// degrees drop by one and endpoints left bare are freed.  Returns the
    /// branch weight.
    double discard_edge(int e, Fib g);

    /// Total squared norm of the attached state.
    double weight() const { return norm2(state_); }

private:
    int alloc_edge(int preferred_slot);
    int alloc_vertex();
    void free_edge(int e);
    void rotate_first(int v, int dart);
    void replace_dart(int v, int old_d, int new_d);
    void check_alive(int e) const;

    // vert_[v]: ccw darts out of v; empty = dead vertex.
    std::vector<std::vector<int>> vert_;
    // dart_vertex_[d]: vertex of dart d, -1 if the edge is dead.
    std::vector<int> dart_vertex_;
    std::vector<int> free_slots_;
    SparseState state_;
};

}  // namespace fibsim
