#include <fibsim/tube.hpp>

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace fibsim {

namespace {

inline Fib edge_label(uint64_t config, int edge) {
    return static_cast<Fib>((config >> edge) & 1u);
}

inline uint64_t with_edge(uint64_t config, int edge, Fib v) {
    uint64_t mask = uint64_t{1} << edge;
    return v == TAU ? (config | mask) : (config & ~mask);
}

/// Accumulate coeff * O_{x y alpha beta} |s> into out.
void accumulate_tube_term(const Lattice& lat, int face, const SparseState& s,
                          const TubeTerm& term, SparseState& out) {
    const FaceInfo& fi = lat.face(face);
    assert(fi.tail >= 0);
    const int R = static_cast<int>(fi.j.size());
    assert(static_cast<int>(fi.legs.size()) == R - 1);

    const Fib x = term.x, y = term.y, al = term.alpha, be = term.beta;
    const cplx pref = term.coeff * (fib_vx(al) * fib_vx(be) / fib_vx(y));

    std::vector<Fib> jlab(R), mlab(R - 1);
    // DFS stack: chain position nu (0-based index of k_{nu+1}) and running product.
    std::vector<Fib> k(R);

    for (const auto& [cfg, amp] : s) {
        if (edge_label(cfg, fi.tail) != x) continue;
        for (int i = 0; i < R; ++i) jlab[i] = edge_label(cfg, fi.j[i]);
        for (int i = 0; i < R - 1; ++i)
            mlab[i] = fi.legs[i] < 0 ? VAC : edge_label(cfg, fi.legs[i]);

        const cplx base = amp * pref;
        // Chain over k_1..k_R with on-the-fly pruning.  The two boundary
        // factors close the loop through the old and new tail vertices.
        auto emit = [&](double w) {
            double endf = fsym(jlab[0], jlab[R - 1], x, al, be, k[R - 1]) *
                          fsym(k[R - 1], k[0], y, al, be, jlab[0]);
            if (endf == 0.0) return;
            uint64_t ncfg = with_edge(cfg, fi.tail, y);
            for (int i = 0; i < R; ++i) ncfg = with_edge(ncfg, fi.j[i], k[i]);
            out[ncfg] += base * (w * endf);
        };
        auto dfs = [&](auto&& self, int nu, double w) -> void {
            if (nu == R) {
                emit(w);
                return;
            }
            for (Fib kn : {VAC, TAU}) {
                double f = fsym(mlab[nu - 1], jlab[nu - 1], jlab[nu], al, kn, k[nu - 1]);
                if (f == 0.0) continue;
                k[nu] = kn;
                self(self, nu + 1, w * f);
            }
        };
        for (Fib k1 : {VAC, TAU}) {
            k[0] = k1;
            dfs(dfs, 1, 1.0);
        }
    }
}

}  // namespace

SparseState apply_pauli(const SparseState& s, int edge, Pauli which) {
    SparseState out;
    out.reserve(s.size());
    const uint64_t mask = uint64_t{1} << edge;
    switch (which) {
        case Pauli::X:
            for (const auto& [cfg, amp] : s) out[cfg ^ mask] += amp;
            break;
        case Pauli::Y:
            for (const auto& [cfg, amp] : s)
                out[cfg ^ mask] += (cfg & mask) ? cplx(0, -1) * amp : cplx(0, 1) * amp;
            break;
        case Pauli::Z:
            for (const auto& [cfg, amp] : s)
                out[cfg] += (cfg & mask) ? -amp : amp;
            break;
    }
    return out;
}

SparseState apply_tube_term(const Lattice& lat, int face, const SparseState& s,
                            const TubeTerm& term) {
    SparseState out;
    accumulate_tube_term(lat, face, s, term, out);
    prune(out);
    return out;
}

SparseState apply_tube_terms(const Lattice& lat, int face, const SparseState& s,
                             const std::vector<TubeTerm>& terms) {
    SparseState out;
    for (const TubeTerm& t : terms) accumulate_tube_term(lat, face, s, t, out);
    prune(out);
    return out;
}

SparseState apply_charge_projector(const Lattice& lat, int face, const SparseState& s,
                                   Charge c) {
    return apply_tube_terms(lat, face, s, tube_idempotent(c));
}

SparseState apply_central_projector(const Lattice& lat, int face, const SparseState& s,
                                    DLabel a) {
    return apply_tube_terms(lat, face, s, tube_central_idempotent(a));
}

SparseState apply_nilpotent(const Lattice& lat, int face, const SparseState& s,
                            bool tail_t_to_1) {
    return apply_tube_terms(lat, face, s, tube_nilpotent(tail_t_to_1));
}

SparseState apply_plaquette_projector(const Lattice& lat, int face, const SparseState& s) {
    return apply_charge_projector(lat, face, s, Charge::Vac);
}

SparseState apply_closed_loop(const Lattice& lat, int face, const SparseState& s, Fib loop) {
    const FaceInfo& fi = lat.face(face);
    assert(fi.tail >= 0);
    const int R = static_cast<int>(fi.j.size());
    SparseState out;
    std::vector<Fib> jlab(R), mlab(R), k(R);
    for (const auto& [cfg, amp] : s) {
        for (int i = 0; i < R; ++i) jlab[i] = edge_label(cfg, fi.j[i]);
        for (int i = 0; i < R - 1; ++i)
            mlab[i] = fi.legs[i] < 0 ? VAC : edge_label(cfg, fi.legs[i]);
        mlab[R - 1] = edge_label(cfg, fi.tail);  // tail acts as a spectator leg
        auto dfs = [&](auto&& self, int i, double w) -> void {
            if (i == R) {
                double closing = fsym(mlab[R - 1], jlab[0], jlab[R - 1], loop, k[R - 1], k[0]);
                if (closing == 0.0) return;
                uint64_t ncfg = cfg;
                for (int t = 0; t < R; ++t) ncfg = with_edge(ncfg, fi.j[t], k[t]);
                out[ncfg] += amp * (w * closing);
                return;
            }
            for (Fib kn : {VAC, TAU}) {
                double f = fsym(mlab[i - 1], jlab[i], jlab[i - 1], loop, k[i - 1], kn);
                if (f == 0.0) continue;
                k[i] = kn;
                self(self, i + 1, w * f);
            }
        };
        for (Fib k1 : {VAC, TAU}) {
            k[0] = k1;
            dfs(dfs, 1, 1.0);
        }
    }
    prune(out);
    return out;
}

SparseState apply_plaquette_naive(const Lattice& lat, int face, const SparseState& s) {
    SparseState in = project_edge(s, lat.face(face).tail, 0);
    SparseState out = apply_closed_loop(lat, face, in, VAC);
    axpy(out, PHI, apply_closed_loop(lat, face, in, TAU));
    scale(out, 1.0 / DSQ);
    prune(out);
    return out;
}

SparseState build_ground_state(const Lattice& lat) {
    SparseState s;
    s[0] = 1.0;
    for (int f = 0; f < lat.n_faces(); ++f) {
        if (lat.face(f).tail < 0) continue;
        s = apply_plaquette_projector(lat, f, s);
        double n = normalize(s);
        assert(n > 0.0);
        (void)n;
        prune(s);
    }
    return s;
}

uint32_t violation_pattern(const Lattice& lat, uint64_t config,
                           const std::vector<int>& vertex_ids) {
    const auto& bv = lat.branch_vertices();
    uint32_t pat = 0;
    for (size_t i = 0; i < vertex_ids.size(); ++i) {
        const auto& tri = bv[vertex_ids[i]];
        int ntau = 0;
        for (int e : tri) ntau += (config >> e) & 1u;
        if (ntau == 1) pat |= uint32_t{1} << i;
    }
    return pat;
}

SparseState project_violations(const Lattice& lat, const SparseState& s,
                               const std::vector<int>& vertex_ids, uint32_t pattern) {
    SparseState out;
    for (const auto& [cfg, amp] : s)
        if (violation_pattern(lat, cfg, vertex_ids) == pattern) out[cfg] = amp;
    return out;
}

SparseState project_edge(const SparseState& s, int edge, int bit) {
    SparseState out;
    for (const auto& [cfg, amp] : s)
        if (static_cast<int>((cfg >> edge) & 1u) == bit) out[cfg] = amp;
    return out;
}

uint64_t random_valid_config(const Lattice& lat, std::mt19937_64& rng) {
    const int E = lat.n_edges();
    std::vector<int> perm(E), pos(E);
    for (int i = 0; i < E; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < E; ++i) pos[perm[i]] = i;

    // Constraints indexed by the last assigned edge position.
    struct Cons {
        std::array<int, 3> e;  // e[2] < 0 for pass-through pairs
    };
    std::vector<std::vector<Cons>> at(E);
    for (const auto& tri : lat.branch_vertices()) {
        int t = std::max({pos[tri[0]], pos[tri[1]], pos[tri[2]]});
        at[t].push_back({{tri[0], tri[1], tri[2]}});
    }
    for (const auto& pr : lat.pass_vertices()) {
        int t = std::max(pos[pr[0]], pos[pr[1]]);
        at[t].push_back({{pr[0], pr[1], -1}});
    }

    std::vector<int> bits(E, 0);
    auto ok = [&](int t) {
        for (const Cons& c : at[t]) {
            if (c.e[2] < 0) {
                if (bits[c.e[0]] != bits[c.e[1]]) return false;
            } else {
                if (bits[c.e[0]] + bits[c.e[1]] + bits[c.e[2]] == 1) return false;
            }
        }
        return true;
    };
    auto dfs = [&](auto&& self, int t) -> bool {
        if (t == E) return true;
        int first = static_cast<int>(rng() & 1u);
        for (int b : {first, 1 - first}) {
            bits[perm[t]] = b;
            if (ok(t) && self(self, t + 1)) return true;
        }
        return false;
    };
    bool found = dfs(dfs, 0);
    assert(found);
    (void)found;
    uint64_t cfg = 0;
    for (int e = 0; e < E; ++e)
        if (bits[e]) cfg |= uint64_t{1} << e;
    return cfg;
}

SparseState random_string_net_state(const Lattice& lat, std::mt19937_64& rng, int n_configs) {
    SparseState s;
    std::normal_distribution<double> g;
    int attempts = 0;
    while (static_cast<int>(s.size()) < n_configs && attempts < 100 * n_configs) {
        ++attempts;
        uint64_t cfg = random_valid_config(lat, rng);
        if (s.count(cfg)) continue;
        s[cfg] = cplx(g(rng), g(rng));
    }
    normalize(s);
    return s;
}

// ---------------------------------------------------------------------------
// Vertex measurement and recovery
// ---------------------------------------------------------------------------

namespace {

int find_branch_vertex(const Lattice& lat, int e1, int e2, int e3) {
    std::array<int, 3> want{e1, e2, e3};
    std::sort(want.begin(), want.end());
    for (int vid : lat.branch_vertices_of_edge(e1)) {
        std::array<int, 3> tri = lat.branch_vertices()[vid];
        std::sort(tri.begin(), tri.end());
        if (tri == want) return vid;
    }
    assert(false && "branch vertex not found");
    return -1;
}

Segment make_segment(const Lattice& lat, const std::array<int, 7>& q) {
    Segment seg;
    seg.q = q;
    seg.v[0] = find_branch_vertex(lat, q[0], q[1], q[4]);  // t: TL, TR, Wu
    seg.v[1] = find_branch_vertex(lat, q[4], q[6], q[5]);  // m: Wu, tail, Wl
    seg.v[2] = find_branch_vertex(lat, q[5], q[2], q[3]);  // b: Wl, BL, BR
    return seg;
}

// Recovery permutations of the inner qubits (Wu, Wl, tail) for each measured
// violation pattern (bit 0 = t, bit 1 = m, bit 2 = b) and tail outcome g.
// The outer four qubits never change; injectivity per (pattern, g) makes each
// entry extendable to a unitary.  Outputs restore all three vertex
// constraints for every configuration compatible with the measured outcome.
struct UVEntry {
    uint8_t pattern, g, u, l, uo, lo, go;
};
constexpr UVEntry UV_TABLE[] = {
    // V = {m}
    {0b010, 0, 1, 0, 1, 0, 1},
    {0b010, 0, 0, 1, 0, 1, 1},
    {0b010, 1, 0, 0, 0, 0, 0},
    // V = {t}
    {0b001, 0, 0, 0, 1, 0, 1},
    {0b001, 0, 1, 1, 0, 1, 1},
    {0b001, 1, 0, 1, 1, 1, 1},
    {0b001, 1, 1, 0, 0, 0, 0},
    {0b001, 1, 1, 1, 0, 1, 1},
    // V = {b} (mirror of {t}: swap u <-> l)
    {0b100, 0, 0, 0, 0, 1, 1},
    {0b100, 0, 1, 1, 1, 0, 1},
    {0b100, 1, 1, 0, 1, 1, 1},
    {0b100, 1, 0, 1, 0, 0, 0},
    {0b100, 1, 1, 1, 1, 0, 1},
    // V = {t, m}
    {0b011, 0, 1, 0, 0, 0, 0},
    {0b011, 0, 0, 1, 1, 1, 1},
    {0b011, 1, 0, 0, 1, 0, 1},
    // V = {m, b} (mirror of {t, m})
    {0b110, 0, 0, 1, 0, 0, 0},
    {0b110, 0, 1, 0, 1, 1, 1},
    {0b110, 1, 0, 0, 0, 1, 1},
    // V = {t, b}
    {0b101, 0, 0, 0, 1, 1, 1},
    {0b101, 0, 1, 1, 0, 0, 0},
    {0b101, 1, 1, 1, 0, 0, 0},
    {0b101, 1, 1, 0, 0, 1, 1},
    {0b101, 1, 0, 1, 1, 0, 1},
    {0b101, 1, 0, 0, 1, 1, 1},
    // V = {t, m, b}
    {0b111, 0, 0, 1, 1, 0, 1},
    {0b111, 0, 1, 0, 0, 1, 1},
    {0b111, 1, 0, 0, 1, 1, 1},
};

}  // namespace

Segment torus_segment(const Lattice& lat, int hex) {
    const int w = lat.hex_neighbor(hex, HexDir::W);
    const int sw = lat.hex_neighbor(hex, HexDir::SW);
    return make_segment(lat, {lat.torus_edge(w, EdgeKind::NE), lat.torus_edge(hex, EdgeKind::NW),
                              lat.torus_edge(sw, EdgeKind::NW), lat.torus_edge(sw, EdgeKind::NE),
                              lat.torus_edge(hex, EdgeKind::WU), lat.torus_edge(hex, EdgeKind::WL),
                              lat.torus_edge(hex, EdgeKind::TAIL)});
}

Segment patch_segment(const Lattice& lat, int qh, int rh) {
    return make_segment(
        lat, {lat.patch_edge(qh - 1, rh, EdgeKind::NE), lat.patch_edge(qh, rh, EdgeKind::NW),
              lat.patch_edge(qh - 1, rh + 1, EdgeKind::NW), lat.patch_edge(qh - 1, rh + 1, EdgeKind::NE),
              lat.patch_edge(qh, rh, EdgeKind::WU), lat.patch_edge(qh, rh, EdgeKind::WL),
              lat.patch_edge(qh, rh, EdgeKind::TAIL)});
}

int torus_segment_hex_of_vertex(const Lattice& lat, int vid) {
    const auto& tri = lat.branch_vertices()[vid];
    // The tail vertex belongs to the tail's own hexagon; the upper vertex of a
    // segment contains its Wu edge; the lower one contains its Wl edge.
    for (int e : tri)
        if (lat.torus_edge_kind(e) == EdgeKind::TAIL) return lat.torus_edge_hex(e);
    for (int e : tri)
        if (lat.torus_edge_kind(e) == EdgeKind::WU) return lat.torus_edge_hex(e);
    for (int e : tri)
        if (lat.torus_edge_kind(e) == EdgeKind::WL) return lat.torus_edge_hex(e);
    assert(false && "vertex belongs to no segment");
    return -1;
}

std::vector<Segment> torus_segments_of_edge(const Lattice& lat, int e) {
    std::vector<int> hexes;
    for (int vid : lat.branch_vertices_of_edge(e)) {
        int h = torus_segment_hex_of_vertex(lat, vid);
        if (std::find(hexes.begin(), hexes.end(), h) == hexes.end()) hexes.push_back(h);
    }
    std::vector<Segment> out;
    for (int h : hexes) out.push_back(torus_segment(lat, h));
    return out;
}

uint32_t segment_pattern(const Lattice& lat, const Segment& seg, uint64_t config) {
    uint32_t pat = 0;
    for (int i = 0; i < 3; ++i) {
        const auto& tri = lat.branch_vertices()[seg.v[i]];
        int sum = static_cast<int>((config >> tri[0]) & 1) + static_cast<int>((config >> tri[1]) & 1) +
                  static_cast<int>((config >> tri[2]) & 1);
        if (sum == 1) pat |= 1u << i;
    }
    return pat;
}

SparseState apply_vertex_fix(const Lattice& lat, const Segment& seg, const SparseState& s,
                             uint32_t pattern, Fib g) {
    assert(pattern != 0 && pattern < 8);
    const uint64_t mu = uint64_t{1} << seg.q[4];
    const uint64_t ml = uint64_t{1} << seg.q[5];
    const uint64_t mg = uint64_t{1} << seg.q[6];
    SparseState out;
    out.reserve(s.size());
    for (const auto& [cfg, amp] : s) {
        const uint8_t u = (cfg & mu) ? 1 : 0;
        const uint8_t l = (cfg & ml) ? 1 : 0;
        const uint8_t gg = (cfg & mg) ? 1 : 0;
        (void)gg;
        assert(gg == g);
        assert(segment_pattern(lat, seg, cfg) == pattern);
        const UVEntry* hit = nullptr;
        for (const UVEntry& e : UV_TABLE)
            if (e.pattern == pattern && e.g == g && e.u == u && e.l == l) {
                hit = &e;
                break;
            }
        if (!hit) throw std::logic_error("apply_vertex_fix: unmatched segment configuration");
        uint64_t ncfg = cfg & ~(mu | ml | mg);
        if (hit->uo) ncfg |= mu;
        if (hit->lo) ncfg |= ml;
        if (hit->go) ncfg |= mg;
        assert(segment_pattern(lat, seg, ncfg) == 0);
        out[ncfg] += amp;
    }
    return out;
}

}  // namespace fibsim
