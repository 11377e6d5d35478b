#include <fibsim/lattice.hpp>

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>
#include <tuple>

namespace fibsim {

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

std::pair<int, int> hex_dir_offset(HexDir d) {
    switch (d) {
        case HexDir::E:  return {+1, 0};
        case HexDir::NE: return {+1, -1};
        case HexDir::NW: return {0, -1};
        case HexDir::W:  return {-1, 0};
        case HexDir::SW: return {-1, +1};
        case HexDir::SE: return {0, +1};
    }
    return {0, 0};
}

int Lattice::hex_index(int q, int r) const {
    return mod(r, L_) * L_ + mod(q, L_);
}

int Lattice::hex_neighbor(int p, HexDir d) const {
    auto [dq, dr] = hex_dir_offset(d);
    return hex_index(p % L_ + dq, p / L_ + dr);
}

int Lattice::torus_edge(int p, EdgeKind k) const {
    return 5 * p + static_cast<int>(k);
}

int Lattice::hex_distance(int p1, int p2) const {
    int dq = p2 % L_ - p1 % L_;
    int dr = p2 / L_ - p1 / L_;
    int best = 1 << 30;
    for (int wq = -1; wq <= 1; ++wq)
        for (int wr = -1; wr <= 1; ++wr) {
            int q = dq + wq * L_, r = dr + wr * L_;
            int d = (std::abs(q) + std::abs(r) + std::abs(q + r)) / 2;
            best = std::min(best, d);
        }
    return best;
}

int Lattice::patch_face(int q, int r) const {
    for (size_t i = 0; i < patch_coords_.size(); ++i)
        if (patch_coords_[i] == std::make_pair(q, r)) return patch_face_ids_[i];
    throw std::out_of_range("patch_face: hexagon not in patch");
}

int Lattice::patch_edge(int q, int r, EdgeKind k) const {
    for (size_t i = 0; i < patch_coords_.size(); ++i)
        if (patch_coords_[i] == std::make_pair(q, r))
            return patch_edge_ids_[5 * i + static_cast<int>(k)];
    throw std::out_of_range("patch_edge: hexagon not in patch");
}

bool Lattice::config_valid(uint64_t config) const {
    for (const auto& v : branch_) {
        int s = static_cast<int>((config >> v[0]) & 1) +
                static_cast<int>((config >> v[1]) & 1) +
                static_cast<int>((config >> v[2]) & 1);
        if (s == 1) return false;
    }
    for (const auto& v : pass_)
        if (((config >> v[0]) & 1) != ((config >> v[1]) & 1)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Face tracing
// ---------------------------------------------------------------------------

void Lattice::build_faces() {
    const int n_darts = 2 * n_edges_;
    dart_vertex_.assign(n_darts, -1);
    for (size_t v = 0; v < vert_darts_.size(); ++v)
        for (int d : vert_darts_[v]) dart_vertex_[d] = static_cast<int>(v);
    for (int d = 0; d < n_darts; ++d)
        if (dart_vertex_[d] < 0) throw std::logic_error("dart without vertex");

    // position of each dart within its vertex rotation
    std::vector<int> dart_pos(n_darts, -1);
    for (const auto& rot : vert_darts_)
        for (size_t i = 0; i < rot.size(); ++i) dart_pos[rot[i]] = static_cast<int>(i);

    // next dart along a face walk (counterclockwise interior walk for the
    // chosen rotation convention): previous-in-rotation of the opposite dart
    auto next_in_face = [&](int d) {
        int op = d ^ 1;
        const auto& rot = vert_darts_[dart_vertex_[op]];
        int i = dart_pos[op];
        return rot[(i + rot.size() - 1) % rot.size()];
    };

    faces_.clear();
    std::vector<char> seen(n_darts, 0);
    for (int d0 = 0; d0 < n_darts; ++d0) {
        if (seen[d0]) continue;
        std::vector<int> walk;
        int d = d0;
        do {
            seen[d] = 1;
            walk.push_back(d);
            d = next_in_face(d);
        } while (d != d0);

        // start the walk away from degree-1 vertices so that a tail spur
        // never straddles the cyclic wrap below
        auto good_start = std::find_if(walk.begin(), walk.end(), [&](int dd) {
            return vert_darts_[dart_vertex_[dd]].size() != 1;
        });
        if (good_start != walk.end())
            std::rotate(walk.begin(), good_start, walk.end());

        FaceInfo fi;
        fi.id = static_cast<int>(faces_.size());

        // remove tail spurs: an edge traversed out-and-back through a
        // degree-1 endpoint
        std::vector<int> body;
        int n = static_cast<int>(walk.size());
        int tail_vertex = -1;
        for (int i = 0; i < n; ++i) {
            int di = walk[i], dn = walk[(i + 1) % n];
            if ((di >> 1) == (dn >> 1) && vert_darts_[dart_vertex_[dn]].size() == 1) {
                if (fi.tail >= 0) throw std::logic_error("face with two tails");
                fi.tail = di >> 1;
                tail_vertex = dart_vertex_[di];
                ++i;  // skip the return dart as well
            } else {
                body.push_back(di);
            }
        }
        if (body.empty()) continue;  // isolated spur (cannot happen for valid input)

        // rotate so the walk starts right after the tail vertex
        if (fi.tail >= 0) {
            auto it = std::find_if(body.begin(), body.end(), [&](int dd) {
                return dart_vertex_[dd] == tail_vertex;
            });
            if (it == body.end()) throw std::logic_error("tail vertex not on face walk");
            std::rotate(body.begin(), it, body.end());
        }

        int r = static_cast<int>(body.size());
        for (int i = 0; i < r; ++i) fi.j.push_back(body[i] >> 1);
        // legs: third edge at the vertex between j[i] and j[i+1]; the tail
        // vertex (between j[r-1] and j[0]) is excluded for tailed faces
        int n_legs = (fi.tail >= 0) ? r - 1 : r;
        for (int i = 0; i < n_legs; ++i) {
            int v = dart_vertex_[body[(i + 1) % r]];
            const auto& rot = vert_darts_[v];
            int leg = -1;
            for (int dd : rot) {
                int e = dd >> 1;
                if (e != fi.j[i] && e != fi.j[(i + 1) % r]) leg = e;
            }
            fi.legs.push_back(leg);
        }
        faces_.push_back(std::move(fi));
    }

    // vertex constraint lists
    branch_.clear();
    pass_.clear();
    for (const auto& rot : vert_darts_) {
        if (rot.size() == 3)
            branch_.push_back({rot[0] >> 1, rot[1] >> 1, rot[2] >> 1});
        else if (rot.size() == 2)
            pass_.push_back({rot[0] >> 1, rot[1] >> 1});
    }
    n_branch_ = static_cast<int>(branch_.size());
    edge_branch_.assign(n_edges_, {});
    for (size_t b = 0; b < branch_.size(); ++b)
        for (int e : branch_[b]) edge_branch_[e].push_back(static_cast<int>(b));
}

// ---------------------------------------------------------------------------
// Torus constructor
// ---------------------------------------------------------------------------

Lattice Lattice::torus(int L) {
    if (L < 2) throw std::invalid_argument("torus: L must be >= 2");
    Lattice lat;
    lat.L_ = L;
    lat.n_edges_ = 5 * L * L;

    auto hexat = [&](int q, int r) { return mod(r, L) * L + mod(q, L); };
    auto E = [&](int p, EdgeKind k) { return 5 * p + static_cast<int>(k); };
    auto nb = [&](int p, HexDir d) {
        auto [dq, dr] = hex_dir_offset(d);
        return hexat(p % L + dq, p / L + dr);
    };

    // vertex ids: 4p + {0:N, 1:S, 2:TV, 3:FREE}
    lat.vert_darts_.assign(4 * L * L, {});
    // edge endpoint convention (end 0 listed first):
    //   NE(h): N(h) -> S(NE(h));  NW(h): N(h) -> S(NW(h))
    //   WU(h): S(NW(h)) -> TV(h); WL(h): TV(h) -> N(SW(h))
    //   TAIL(h): TV(h) -> FREE(h)
    for (int p = 0; p < L * L; ++p) {
        int vN = 4 * p, vS = 4 * p + 1, vTV = 4 * p + 2, vF = 4 * p + 3;
        // ccw rotations derived from the pointy-top hexagon geometry
        lat.vert_darts_[vN] = {
            2 * E(nb(p, HexDir::NE), EdgeKind::WL) + 1,  // upward
            2 * E(p, EdgeKind::NW),                      // down-left
            2 * E(p, EdgeKind::NE),                      // down-right
        };
        lat.vert_darts_[vS] = {
            2 * E(nb(p, HexDir::SE), EdgeKind::NW) + 1,  // up-right
            2 * E(nb(p, HexDir::SW), EdgeKind::NE) + 1,  // up-left
            2 * E(nb(p, HexDir::SE), EdgeKind::WU),      // downward
        };
        lat.vert_darts_[vTV] = {
            2 * E(p, EdgeKind::TAIL),                    // east, into the face
            2 * E(p, EdgeKind::WU) + 1,                  // up
            2 * E(p, EdgeKind::WL),                      // down
        };
        lat.vert_darts_[vF] = {2 * E(p, EdgeKind::TAIL) + 1};
    }

    lat.build_faces();

    // reorder faces so that face p is the hexagon with tail(p)
    std::vector<FaceInfo> ordered(lat.faces_.size());
    std::vector<char> used(lat.faces_.size(), 0);
    for (const auto& f : lat.faces_) {
        if (f.tail < 0) throw std::logic_error("torus face without tail");
        int p = f.tail / 5;
        ordered[p] = f;
        ordered[p].id = p;
        used[p] = 1;
    }
    for (char u : used)
        if (!u) throw std::logic_error("torus face ordering failed");
    lat.faces_ = std::move(ordered);
    return lat;
}

// ---------------------------------------------------------------------------
// Patch constructor
// ---------------------------------------------------------------------------

Lattice Lattice::patch(const std::vector<std::pair<int, int>>& hexes) {
    Lattice lat;
    lat.patch_coords_ = hexes;
    auto kept = [&](int q, int r) {
        return std::find(hexes.begin(), hexes.end(), std::make_pair(q, r)) != hexes.end();
    };

    // edge keys: (q, r, kind) with kind PLAIN meaning the unsplit W side of
    // hex (q, r) when that hex is not part of the patch
    std::map<std::tuple<int, int, EdgeKind>, int> edge_id;
    auto get_edge = [&](int q, int r, EdgeKind k) {
        auto key = std::make_tuple(q, r, k);
        auto it = edge_id.find(key);
        if (it != edge_id.end()) return it->second;
        int id = static_cast<int>(edge_id.size());
        edge_id.emplace(key, id);
        return id;
    };

    for (auto [q, r] : hexes) {
        get_edge(q, r, EdgeKind::NE);
        get_edge(q, r, EdgeKind::NW);
        get_edge(q, r, EdgeKind::WU);
        get_edge(q, r, EdgeKind::WL);
        get_edge(q, r, EdgeKind::TAIL);
        get_edge(q, r + 1, EdgeKind::NW);                      // SE side
        get_edge(q - 1, r + 1, EdgeKind::NE);                  // SW side
        if (kept(q + 1, r)) {
            // E side provided by the neighbour's split W side
        } else {
            get_edge(q + 1, r, EdgeKind::PLAIN);               // unsplit E side
        }
    }
    lat.n_edges_ = static_cast<int>(edge_id.size());

    // vertex keys: (type, q, r) with type 0:N, 1:S, 2:TV, 3:FREE
    std::map<std::tuple<int, int, int>, std::array<int, 3>> slots;
    auto put = [&](int type, int q, int r, int slot, int dart) {
        auto key = std::make_tuple(type, q, r);
        auto it = slots.find(key);
        if (it == slots.end())
            it = slots.emplace(key, std::array<int, 3>{-1, -1, -1}).first;
        if (it->second[slot] != -1) throw std::logic_error("patch: slot collision");
        it->second[slot] = dart;
    };
    // ccw slot orders (fixed subsequences of the torus rotations):
    //   N(h):  [W side of NE(h) lower part, NW(h), NE(h)]
    //   S(h):  [NW(SE(h)), NE(SW(h)), W side of SE(h) upper part]
    //   TV(h): [TAIL(h), WU(h), WL(h)]
    for (const auto& [key, id] : edge_id) {
        auto [q, r, k] = key;
        switch (k) {
            case EdgeKind::NE:
                put(0, q, r, 2, 2 * id);
                put(1, q + 1, r - 1, 1, 2 * id + 1);
                break;
            case EdgeKind::NW:
                put(0, q, r, 1, 2 * id);
                put(1, q, r - 1, 0, 2 * id + 1);
                break;
            case EdgeKind::WU:
                put(1, q, r - 1, 2, 2 * id);
                put(2, q, r, 1, 2 * id + 1);
                break;
            case EdgeKind::WL:
                put(2, q, r, 2, 2 * id);
                put(0, q - 1, r + 1, 0, 2 * id + 1);
                break;
            case EdgeKind::TAIL:
                put(2, q, r, 0, 2 * id);
                put(3, q, r, 0, 2 * id + 1);
                break;
            case EdgeKind::PLAIN:
                put(1, q, r - 1, 2, 2 * id);
                put(0, q - 1, r + 1, 0, 2 * id + 1);
                break;
        }
    }

    lat.vert_darts_.clear();
    for (const auto& [key, sl] : slots) {
        std::vector<int> rot;
        for (int d : sl)
            if (d != -1) rot.push_back(d);
        if (rot.empty()) continue;
        lat.vert_darts_.push_back(std::move(rot));
    }

    lat.build_faces();

    // identify kept hexagon faces via their tails and the outer face
    lat.patch_face_ids_.assign(hexes.size(), -1);
    lat.patch_edge_ids_.assign(5 * hexes.size(), -1);
    for (size_t i = 0; i < hexes.size(); ++i) {
        auto [q, r] = hexes[i];
        for (int k = 0; k < 5; ++k)
            lat.patch_edge_ids_[5 * i + k] =
                edge_id.at(std::make_tuple(q, r, static_cast<EdgeKind>(k)));
        int tail = lat.patch_edge_ids_[5 * i + 4];
        for (const auto& f : lat.faces_)
            if (f.tail == tail) lat.patch_face_ids_[i] = f.id;
        if (lat.patch_face_ids_[i] < 0) throw std::logic_error("patch: hex face not found");
    }
    lat.outer_face_ = -1;
    for (const auto& f : lat.faces_) {
        if (f.tail >= 0) continue;
        if (lat.outer_face_ >= 0) throw std::logic_error("patch: several outer faces");
        lat.outer_face_ = f.id;
    }
    if (lat.outer_face_ < 0) throw std::logic_error("patch: no outer face");
    return lat;
}

}  // namespace fibsim
