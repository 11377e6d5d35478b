#include <fibsim/morph.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fibsim {

namespace {

Fib bit_of(uint64_t cfg, int e) { return static_cast<Fib>((cfg >> e) & 1); }

uint64_t with_bit(uint64_t cfg, int e, Fib g) {
    return (cfg & ~(uint64_t(1) << e)) | (uint64_t(g) << e);
}

}  // namespace

Morph Morph::from_lattice(const Lattice& lat, SparseState s) {
    Morph m;
    m.vert_ = lat.vertex_darts();
    m.dart_vertex_.assign(2 * lat.n_edges(), -1);
    for (size_t v = 0; v < m.vert_.size(); ++v)
        for (int d : m.vert_[v]) m.dart_vertex_[d] = static_cast<int>(v);
    for (int d = 0; d < (int)m.dart_vertex_.size(); ++d)
        if (m.dart_vertex_[d] < 0) throw std::logic_error("morph: dart without vertex");
    for (int e = lat.n_edges(); e < 64; ++e) m.free_slots_.push_back(e);
    m.state_ = std::move(s);
    return m;
}

int Morph::n_edges() const {
    int n = 0;
    for (int e = 0; 2 * e < (int)dart_vertex_.size(); ++e)
        if (dart_vertex_[2 * e] >= 0) ++n;
    return n;
}

std::vector<int> Morph::face_walk(int d0) const {
    std::vector<int> walk;
    int d = d0;
    do {
        walk.push_back(d);
        int op = d ^ 1;
        const auto& rot = vert_[dart_vertex_[op]];
        auto it = std::find(rot.begin(), rot.end(), op);
        if (it == rot.end()) throw std::logic_error("morph: broken rotation");
        size_t i = static_cast<size_t>(it - rot.begin());
        d = rot[(i + rot.size() - 1) % rot.size()];
        if (walk.size() > dart_vertex_.size()) throw std::logic_error("morph: runaway face walk");
    } while (d != d0);
    return walk;
}

bool Morph::same_graph(const Morph& other) const {
    size_t nv = std::max(vert_.size(), other.vert_.size());
    for (size_t v = 0; v < nv; ++v) {
        bool a = v < vert_.size() && !vert_[v].empty();
        bool b = v < other.vert_.size() && !other.vert_[v].empty();
        if (a != b) return false;
        if (!a) continue;
        const auto& ra = vert_[v];
        const auto& rb = other.vert_[v];
        if (ra.size() != rb.size()) return false;
        // cyclic comparison
        size_t n = ra.size();
        bool match = false;
        for (size_t s = 0; s < n && !match; ++s) {
            match = true;
            for (size_t i = 0; i < n; ++i)
                if (ra[i] != rb[(i + s) % n]) { match = false; break; }
        }
        if (!match) return false;
    }
    size_t nd = std::max(dart_vertex_.size(), other.dart_vertex_.size());
    for (size_t d = 0; d < nd; ++d) {
        int a = d < dart_vertex_.size() ? dart_vertex_[d] : -1;
        int b = d < other.dart_vertex_.size() ? other.dart_vertex_[d] : -1;
        if (a != b) return false;
    }
    return true;
}

std::string Morph::dump() const {
    std::ostringstream os;
    for (size_t v = 0; v < vert_.size(); ++v) {
        if (vert_[v].empty()) continue;
        os << "v" << v << ":";
        for (int d : vert_[v]) os << " " << (d >> 1) << (d & 1 ? "'" : "");
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// allocation helpers
// ---------------------------------------------------------------------------

int Morph::alloc_edge(int preferred_slot) {
    int e;
    if (preferred_slot >= 0) {
        auto it = std::find(free_slots_.begin(), free_slots_.end(), preferred_slot);
        if (it == free_slots_.end()) throw std::logic_error("morph: requested slot busy");
        free_slots_.erase(it);
        e = preferred_slot;
    } else {
        if (free_slots_.empty()) throw std::logic_error("morph: out of edge slots");
        e = free_slots_.back();
        free_slots_.pop_back();
    }
    if (2 * e + 1 >= (int)dart_vertex_.size()) dart_vertex_.resize(2 * e + 2, -1);
    return e;
}

int Morph::alloc_vertex() {
    for (size_t v = 0; v < vert_.size(); ++v)
        if (vert_[v].empty()) return static_cast<int>(v);
    vert_.emplace_back();
    return static_cast<int>(vert_.size() - 1);
}

void Morph::free_edge(int e) {
    dart_vertex_[2 * e] = dart_vertex_[2 * e + 1] = -1;
    free_slots_.push_back(e);
}

void Morph::rotate_first(int v, int dart) {
    auto& rot = vert_[v];
    auto it = std::find(rot.begin(), rot.end(), dart);
    if (it == rot.end()) throw std::logic_error("morph: dart not at vertex");
    std::rotate(rot.begin(), it, rot.end());
}

void Morph::replace_dart(int v, int old_d, int new_d) {
    auto& rot = vert_[v];
    auto it = std::find(rot.begin(), rot.end(), old_d);
    if (it == rot.end()) throw std::logic_error("morph: dart not at vertex");
    *it = new_d;
    dart_vertex_[new_d] = v;
}

void Morph::check_alive(int e) const {
    if (!edge_alive(e)) throw std::logic_error("morph: dead edge");
}

// ---------------------------------------------------------------------------
// recoupling moves
// ---------------------------------------------------------------------------

void Morph::fmove(int e) {
    check_alive(e);
    int u = dart_vertex_[2 * e], v = dart_vertex_[2 * e + 1];
    if (u == v) throw std::logic_error("fmove: self-loop");
    if (degree(u) != 3 || degree(v) != 3) throw std::logic_error("fmove: endpoint not trivalent");
    rotate_first(u, 2 * e);
    rotate_first(v, 2 * e + 1);
    int da = vert_[u][1], db = vert_[u][2];
    int dc = vert_[v][1], dd = vert_[v][2];
    int ea = da >> 1, eb = db >> 1, ec = dc >> 1, ed = dd >> 1;

    SparseState out;
    out.reserve(2 * state_.size());
    for (const auto& [cfg, amp] : state_) {
        Fib la = bit_of(cfg, ea), lb = bit_of(cfg, eb);
        Fib lc = bit_of(cfg, ec), ld = bit_of(cfg, ed);
        Fib m = bit_of(cfg, e);
        for (Fib n : {VAC, TAU}) {
            double f = fsym(lb, la, m, ld, lc, n);
            if (f == 0.0) continue;
            out[with_bit(cfg, e, n)] += amp * f;
        }
    }
    prune(out);
    state_ = std::move(out);

    vert_[u] = {2 * e, dd, da};
    vert_[v] = {2 * e + 1, db, dc};
    dart_vertex_[dd] = u;
    dart_vertex_[db] = v;
}

void Morph::fmove_inv(int e) {
    check_alive(e);
    int u = dart_vertex_[2 * e], v = dart_vertex_[2 * e + 1];
    if (u == v) throw std::logic_error("fmove_inv: self-loop");
    if (degree(u) != 3 || degree(v) != 3)
        throw std::logic_error("fmove_inv: endpoint not trivalent");
    rotate_first(u, 2 * e);
    rotate_first(v, 2 * e + 1);
    int dp = vert_[u][1], dq = vert_[u][2];
    int dr = vert_[v][1], ds = vert_[v][2];
    int ep = dp >> 1, eq = dq >> 1, er = dr >> 1, es = ds >> 1;

    SparseState out;
    out.reserve(2 * state_.size());
    for (const auto& [cfg, amp] : state_) {
        Fib lp = bit_of(cfg, ep), lq = bit_of(cfg, eq);
        Fib lr = bit_of(cfg, er), ls = bit_of(cfg, es);
        Fib n = bit_of(cfg, e);
        for (Fib m : {VAC, TAU}) {
            double f = fsym(lr, lq, m, lp, ls, n);
            if (f == 0.0) continue;
            out[with_bit(cfg, e, m)] += amp * f;
        }
    }
    prune(out);
    state_ = std::move(out);

    vert_[u] = {2 * e, dq, dr};
    vert_[v] = {2 * e + 1, ds, dp};
    dart_vertex_[dr] = u;
    dart_vertex_[dp] = v;
}

// ---------------------------------------------------------------------------
// splits, stubs, loops
// ---------------------------------------------------------------------------

std::array<int, 2> Morph::split2(int e, int at_end, int preferred_slot) {
    check_alive(e);
    int de = 2 * e + at_end;
    int ep = dart_vertex_[de];
    int e2 = alloc_edge(preferred_slot);
    int v2 = alloc_vertex();
    replace_dart(ep, de, 2 * e2 + 1);
    vert_[v2] = {de, 2 * e2};
    dart_vertex_[de] = v2;
    dart_vertex_[2 * e2] = v2;

    SparseState out;
    out.reserve(state_.size());
    for (const auto& [cfg, amp] : state_)
        out[with_bit(cfg, e2, bit_of(cfg, e))] += amp;
    state_ = std::move(out);
    return {v2, e2};
}

void Morph::contract2(int v) {
    if (!vertex_alive(v) || degree(v) != 2) throw std::logic_error("contract2: not degree 2");
    int d1 = vert_[v][0], d2 = vert_[v][1];
    int e1 = d1 >> 1, e2 = d2 >> 1;
    if (e1 == e2) throw std::logic_error("contract2: free loop");
    for (const auto& [cfg, amp] : state_) {
        (void)amp;
        if (bit_of(cfg, e1) != bit_of(cfg, e2))
            throw std::logic_error("contract2: labels differ on support");
    }
    int d2o = d2 ^ 1;
    int w = dart_vertex_[d2o];
    replace_dart(w, d2o, d1);
    vert_[v].clear();
    free_edge(e2);

    SparseState out;
    out.reserve(state_.size());
    for (const auto& [cfg, amp] : state_) out[with_bit(cfg, e2, VAC)] += amp;
    state_ = std::move(out);
}

int Morph::add_stub(int v, int after, int preferred_slot) {
    if (!vertex_alive(v)) throw std::logic_error("add_stub: dead vertex");
    int s = alloc_edge(preferred_slot);
    int tip = alloc_vertex();
    auto& rot = vert_[v];
    auto it = std::find(rot.begin(), rot.end(), after);
    if (it == rot.end()) throw std::logic_error("add_stub: dart not at vertex");
    rot.insert(it + 1, 2 * s);
    dart_vertex_[2 * s] = v;
    vert_[tip] = {2 * s + 1};
    dart_vertex_[2 * s + 1] = tip;
    return s;
}

void Morph::remove_stub(int e) {
    check_alive(e);
    int dtip, dbase;
    if (degree(dart_vertex_[2 * e + 1]) == 1) {
        dtip = 2 * e + 1;
        dbase = 2 * e;
    } else if (degree(dart_vertex_[2 * e]) == 1) {
        dtip = 2 * e;
        dbase = 2 * e + 1;
    } else {
        throw std::logic_error("remove_stub: no degree-1 end");
    }
    for (const auto& [cfg, amp] : state_) {
        (void)amp;
        if (bit_of(cfg, e) != VAC) throw std::logic_error("remove_stub: stub not vacuum");
    }
    int v = dart_vertex_[dbase];
    auto& rot = vert_[v];
    rot.erase(std::find(rot.begin(), rot.end(), dbase));
    vert_[dart_vertex_[dtip]].clear();
    free_edge(e);
}

int Morph::add_loop(int tip, int preferred_slot, bool flip) {
    if (!vertex_alive(tip) || degree(tip) != 1) throw std::logic_error("add_loop: not a tip");
    int l = alloc_edge(preferred_slot);
    vert_[tip].push_back(2 * l + (flip ? 1 : 0));
    vert_[tip].push_back(2 * l + (flip ? 0 : 1));
    dart_vertex_[2 * l] = tip;
    dart_vertex_[2 * l + 1] = tip;

    const double D = std::sqrt(2.0 + PHI);
    SparseState out;
    out.reserve(2 * state_.size());
    for (const auto& [cfg, amp] : state_) {
        out[with_bit(cfg, l, VAC)] += amp * (1.0 / D);
        out[with_bit(cfg, l, TAU)] += amp * (PHI / D);
    }
    state_ = std::move(out);
    return l;
}

double Morph::remove_loop(int e) {
    check_alive(e);
    int t = dart_vertex_[2 * e];
    if (dart_vertex_[2 * e + 1] != t) throw std::logic_error("remove_loop: not a self-loop");
    if (degree(t) != 3) throw std::logic_error("remove_loop: apex not trivalent");

    const double D = std::sqrt(2.0 + PHI);
    double in_norm = norm2(state_);
    SparseState out;
    out.reserve(state_.size());
    for (const auto& [cfg, amp] : state_) {
        double d = bit_of(cfg, e) == TAU ? PHI : 1.0;
        out[with_bit(cfg, e, VAC)] += amp * (d / D);
    }
    prune(out);
    state_ = std::move(out);

    auto& rot = vert_[t];
    rot.erase(std::remove_if(rot.begin(), rot.end(), [&](int d) { return (d >> 1) == e; }),
              rot.end());
    free_edge(e);
    double defect = in_norm - norm2(state_);
    return defect > 0 ? defect : 0.0;
}

// ---------------------------------------------------------------------------
// measurements
// ---------------------------------------------------------------------------

double Morph::project_edge(int e, Fib g) {
    check_alive(e);
    SparseState out;
    out.reserve(state_.size());
    for (const auto& [cfg, amp] : state_)
        if (bit_of(cfg, e) == g) out[cfg] = amp;
    state_ = std::move(out);
    return norm2(state_);
}

double Morph::discard_edge(int e, Fib g) {
    check_alive(e);
    SparseState out;
    out.reserve(state_.size());
    for (const auto& [cfg, amp] : state_)
        if (bit_of(cfg, e) == g) out[with_bit(cfg, e, VAC)] = amp;
    state_ = std::move(out);

    for (int side = 0; side < 2; ++side) {
        int d = 2 * e + side;
        int v = dart_vertex_[d];
        auto& rot = vert_[v];
        rot.erase(std::find(rot.begin(), rot.end(), d));
        // the two darts of a self-loop share a vertex; only clear once empty
    }
    free_edge(e);
    return norm2(state_);
}

double Morph::project_out_leaf(int e, Fib g) {
    check_alive(e);
    int dtip, dbase;
    if (degree(dart_vertex_[2 * e + 1]) == 1) {
        dtip = 2 * e + 1;
        dbase = 2 * e;
    } else if (degree(dart_vertex_[2 * e]) == 1) {
        dtip = 2 * e;
        dbase = 2 * e + 1;
    } else {
        throw std::logic_error("project_out_leaf: no degree-1 end");
    }
    SparseState out;
    out.reserve(state_.size());
    for (const auto& [cfg, amp] : state_)
        if (bit_of(cfg, e) == g) out[with_bit(cfg, e, VAC)] = amp;
    state_ = std::move(out);

    int v = dart_vertex_[dbase];
    auto& rot = vert_[v];
    rot.erase(std::find(rot.begin(), rot.end(), dbase));
    vert_[dart_vertex_[dtip]].clear();
    free_edge(e);
    return norm2(state_);
}

}  // namespace fibsim
