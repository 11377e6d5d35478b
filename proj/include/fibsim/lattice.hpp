#pragma once

#include <fibsim/category.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fibsim {

// ---------------------------------------------------------------------------
// Tailed trivalent lattices as combinatorial maps
// ---------------------------------------------------------------------------
//
// A lattice is described by its edges and a rotation system: every edge has
// two darts (directed edge-ends), and every vertex stores its incident darts
// in counterclockwise geometric order.  Faces are traced from the rotation
// system, so the same machinery covers the L x L torus and the small sphere
// lattices used for matrix-element extraction.
//
// Qubits live on edges: |0> = vacuum label, |1> = tau.  Vertices of degree 3
// carry the branching constraint delta_{ijk}; vertices of degree 2 force
// equal labels on their two edges (a string passing through); vertices of
// degree 1 (tail ends) are unconstrained.

enum class EdgeKind : uint8_t { NE = 0, NW = 1, WU = 2, WL = 3, TAIL = 4, PLAIN = 5 };

/// Hexagon neighbour directions in axial coordinates (q = column, r = row).
enum class HexDir : uint8_t { E = 0, NE = 1, NW = 2, W = 3, SW = 4, SE = 5 };

struct FaceInfo {
    int id = -1;
    int tail = -1;              ///< tail edge id, -1 if the face has none
    std::vector<int> j;         ///< boundary edge ids in walk order; for tailed
                                ///< faces j[0] is the edge leaving the tail vertex
    std::vector<int> legs;      ///< legs[i] = third edge at the vertex between
                                ///< j[i] and j[i+1 mod r]; -1 for a degree-2
                                ///< vertex (vacuum leg).  The tail vertex sits
                                ///< between j[r-1] and j[0] and is not listed.
};

class Lattice {
public:
    int n_edges() const { return n_edges_; }
    int n_faces() const { return static_cast<int>(faces_.size()); }
    /// Number of branching (degree-3) vertices.
    int n_branch_vertices() const { return n_branch_; }

    const FaceInfo& face(int f) const { return faces_[f]; }
    const std::vector<FaceInfo>& faces() const { return faces_; }

    /// Degree-3 vertices as edge triples (for Q_v) and degree-2 vertices as
    /// edge pairs (label continuity).
    const std::vector<std::array<int, 3>>& branch_vertices() const { return branch_; }
    const std::vector<std::array<int, 2>>& pass_vertices() const { return pass_; }

    /// True if the edge configuration (bit e = 1 meaning label tau) satisfies
    /// every vertex constraint.
    bool config_valid(uint64_t config) const;

    /// Vertex ids (indices into branch_vertices) touching a given edge.
    const std::vector<int>& branch_vertices_of_edge(int e) const { return edge_branch_[e]; }

    /// Rotation system: counterclockwise darts (2e and 2e+1) around each
    /// vertex; empty lists are unused vertex ids.
    const std::vector<std::vector<int>>& vertex_darts() const { return vert_darts_; }
    /// Vertex id a dart emanates from.
    int dart_vertex(int d) const { return dart_vertex_[d]; }

    // --- torus-specific structure (only populated by torus()) ---
    int L() const { return L_; }
    bool is_torus() const { return L_ > 0; }
    int hex_index(int q, int r) const;           ///< wraps coordinates
    int hex_neighbor(int p, HexDir d) const;
    int torus_edge(int p, EdgeKind k) const;     ///< edge id 5*p + kind
    EdgeKind torus_edge_kind(int e) const { return static_cast<EdgeKind>(e % 5); }
    int torus_edge_hex(int e) const { return e / 5; }
    /// Hexagonal graph distance between plaquette centres on the torus.
    int hex_distance(int p1, int p2) const;

    // --- patch-specific structure (only populated by patch()) ---
    /// Face id of the kept hexagon originally at axial offset (q, r); the
    /// error-free hexagon h sits at (0, 0).
    int patch_face(int q, int r) const;
    /// Edge id of the patch edge playing the role of torus edge (q, r, kind).
    int patch_edge(int q, int r, EdgeKind k) const;
    int outer_face() const { return outer_face_; }

    /// L x L torus (L >= 2): 5L^2 edges, 3L^2 branching vertices, L^2 faces.
    static Lattice torus(int L);

    /// Sphere lattice containing the given hexagons (axial coordinates,
    /// non-wrapping) with their tails, every edge bounding them, and one
    /// outer face.  Patch boundary corners become degree-2 vertices.
    static Lattice patch(const std::vector<std::pair<int, int>>& hexes);

private:
    void build_faces();   ///< trace faces from the rotation system

    int n_edges_ = 0;
    int n_branch_ = 0;
    int L_ = 0;

    // rotation system: vertex -> darts in ccw order; dart 2e (end 0) / 2e+1
    std::vector<std::vector<int>> vert_darts_;
    std::vector<int> dart_vertex_;             // dart -> vertex

    std::vector<FaceInfo> faces_;
    std::vector<std::array<int, 3>> branch_;
    std::vector<std::array<int, 2>> pass_;
    std::vector<std::vector<int>> edge_branch_;

    // torus bookkeeping
    // patch bookkeeping
    std::vector<std::pair<int, int>> patch_coords_;   // kept hex axial coords
    std::vector<int> patch_face_ids_;
    std::vector<int> patch_edge_ids_;                 // (hex, kind) -> edge id
    int outer_face_ = -1;
};

/// Axial-coordinate offset of a hexagon neighbour direction.
std::pair<int, int> hex_dir_offset(HexDir d);

}  // namespace fibsim
