#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "kpq/drawing.hpp"
#include "kpq/surface.hpp"

namespace kpq {

/// A connected graph with an embedding scheme: a cyclic rotation of darts at
/// every node and a +-1 signal per segment. Darts are encoded seg*2+dir with
/// dir 0 running first -> second. This is the shared substrate for drawings
/// (via their flattening) and for ad-hoc schemes like the dipole oracle.
struct scheme_graph {
    int nodes = 0;
    std::vector<std::pair<int, int>> segments;
    std::vector<std::vector<int>> rotation;  // per node: outgoing darts in cyclic order
    std::vector<std::int8_t> sign;           // per segment

    int tail(int dart) const {
        const auto& s = segments[dart >> 1];
        return (dart & 1) ? s.second : s.first;
    }
    int head(int dart) const {
        const auto& s = segments[dart >> 1];
        return (dart & 1) ? s.first : s.second;
    }
};

/// Face structure recovered from an embedding scheme. Faces are closed walks
/// over trace states; a state packs (dart << 1) | side. Exactly one walk per
/// face is reported (each face is traced twice, once per direction; the two
/// directions are paired off and one representative kept).
struct face_trace {
    std::vector<std::vector<int>> faces;
    int euler_characteristic = 0;
    bool realized_orientable = false;

    int face_count() const { return static_cast<int>(faces.size()); }
    std::vector<int> face_sizes() const {
        std::vector<int> out;
        out.reserve(faces.size());
        for (const auto& f : faces) out.push_back(static_cast<int>(f.size()));
        return out;
    }
};

/// True iff the signal is switching-equivalent to all-positive, i.e. every
/// cycle of the graph has positive sign product. Decides orientability of the
/// realized surface.
inline bool balanced(const scheme_graph& g) {
    const int n = g.nodes;
    std::vector<std::vector<std::pair<int, std::int8_t>>> adj(n);
    for (std::size_t s = 0; s < g.segments.size(); ++s) {
        adj[g.segments[s].first].push_back({g.segments[s].second, g.sign[s]});
        adj[g.segments[s].second].push_back({g.segments[s].first, g.sign[s]});
    }
    std::vector<std::int8_t> mark(n, 0);
    std::vector<int> stack;
    for (int root = 0; root < n; ++root) {
        if (mark[root]) continue;
        mark[root] = 1;
        stack.push_back(root);
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (auto [y, s] : adj[x]) {
                std::int8_t want = static_cast<std::int8_t>(mark[x] * s);
                if (mark[y] == 0) {
                    mark[y] = want;
                    stack.push_back(y);
                } else if (mark[y] != want) {
                    return false;
                }
            }
        }
    }
    return true;
}

namespace detail {

inline bool scheme_connected(const scheme_graph& g) {
    if (g.nodes <= 1) return true;
    std::vector<char> seen(g.nodes, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    std::vector<std::vector<int>> adj(g.nodes);
    for (const auto& s : g.segments) {
        adj[s.first].push_back(s.second);
        adj[s.second].push_back(s.first);
    }
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : adj[x])
            if (!seen[y]) {
                seen[y] = 1;
                ++count;
                stack.push_back(y);
            }
    }
    return count == g.nodes;
}

}  // namespace detail

/// Traces the faces of the cellular embedding determined by the scheme.
///
/// States are (dart, side) pairs. Stepping from state (d, s): traverse d to
/// its head, flipping the side over a negative segment; then leave along the
/// rotation successor (side +) or predecessor (side -) of the reversed dart.
/// The 4E states decompose into orbits; reversing a walk maps orbits onto
/// orbits via R(d, s) = (rev d, !(s ^ [sign<0])), pairing them perfectly, so
/// the face count is orbits/2 and every directed segment side is consumed by
/// exactly one reported face.
inline face_trace trace(const scheme_graph& g) {
    const int nseg = static_cast<int>(g.segments.size());
    if (!detail::scheme_connected(g)) throw error("trace: scheme graph is not connected");

    std::vector<int> pos(static_cast<std::size_t>(nseg) * 2, -1);
    for (int n = 0; n < g.nodes; ++n) {
        for (std::size_t idx = 0; idx < g.rotation[n].size(); ++idx) {
            int d = g.rotation[n][idx];
            if (d < 0 || d >= 2 * nseg || g.tail(d) != n || pos[d] != -1)
                throw error("trace: malformed rotation system");
            pos[d] = static_cast<int>(idx);
        }
    }
    for (int d = 0; d < 2 * nseg; ++d)
        if (pos[d] == -1) throw error("trace: dart missing from its rotation");

    auto neg = [&](int seg) { return g.sign[seg] < 0 ? 1 : 0; };
    auto next_state = [&](int state) {
        int d = state >> 1, s = state & 1;
        int seg = d >> 1;
        int s2 = s ^ neg(seg);
        int rd = d ^ 1;  // outgoing at the head
        int node = g.tail(rd);
        const auto& rot = g.rotation[node];
        int deg = static_cast<int>(rot.size());
        int at = pos[rd];
        int nd = (s2 == 0) ? rot[(at + 1) % deg] : rot[(at + deg - 1) % deg];
        return (nd << 1) | s2;
    };
    auto reverse_state = [&](int state) {
        int d = state >> 1, s = state & 1;
        int seg = d >> 1;
        return ((d ^ 1) << 1) | ((s ^ neg(seg)) ^ 1);
    };

    const int nstates = 4 * nseg;
    std::vector<int> orbit_of(nstates, -1);
    std::vector<std::vector<int>> orbits;
    for (int s0 = 0; s0 < nstates; ++s0) {
        if (orbit_of[s0] >= 0) continue;
        int id = static_cast<int>(orbits.size());
        std::vector<int> walk;
        int s = s0;
        do {
            orbit_of[s] = id;
            walk.push_back(s);
            s = next_state(s);
        } while (s != s0);
        orbits.push_back(std::move(walk));
    }

    // Pair each orbit with its reversal; keep the representative whose first
    // state is smaller. A mismatch here would mean the trace rules are broken.
    face_trace out;
    std::vector<int> partner(orbits.size(), -1);
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        int r = orbit_of[reverse_state(orbits[i][0])];
        partner[i] = r;
    }
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        if (partner[i] < 0 || static_cast<std::size_t>(partner[partner[i]]) != i ||
            static_cast<std::size_t>(partner[i]) == i)
            throw error("trace: face reversal pairing failed");
        if (static_cast<std::size_t>(partner[i]) > i) out.faces.push_back(orbits[i]);
    }

    out.euler_characteristic = g.nodes - nseg + static_cast<int>(out.faces.size());
    out.realized_orientable = balanced(g);
    return out;
}

/// Embedding scheme of a flattening from raw drawing parts. Rotations at
/// real vertices come from rot_a / rot_b (a-vertices emit first segments,
/// b-vertices emit last segments reversed); rotations at crossing vertices
/// come from the orientation bits. Reuses the storage of `g` when given one.
inline void fill_scheme_graph(scheme_graph& g, const flattening& fl,
                              const std::vector<crossing_pair>& crossings,
                              const std::vector<std::vector<int>>& edge_order,
                              const std::vector<std::vector<int>>& rot_a,
                              const std::vector<std::vector<int>>& rot_b,
                              const std::vector<std::uint8_t>& cross_orient,
                              const std::vector<std::vector<std::int8_t>>& seg_signs) {
    const int p = fl.p, q = fl.q;
    g.nodes = fl.vertices;
    g.segments = fl.segments;
    g.sign.assign(fl.segments.size(), 1);
    for (std::size_t e = 0; e < fl.edge_segments.size(); ++e)
        for (std::size_t t = 0; t < fl.edge_segments[e].size(); ++t)
            g.sign[fl.edge_segments[e][t]] = seg_signs[e][t];

    g.rotation.assign(g.nodes, {});
    for (int i = 0; i < p; ++i)
        for (int j : rot_a[i])
            g.rotation[fl.node_a(i)].push_back(fl.edge_segments[i * q + j].front() * 2);
    for (int j = 0; j < q; ++j)
        for (int i : rot_b[j])
            g.rotation[fl.node_b(j)].push_back(fl.edge_segments[i * q + j].back() * 2 + 1);

    auto position_of = [&](const std::vector<int>& order, int c) {
        for (std::size_t t = 0; t < order.size(); ++t)
            if (order[t] == c) return static_cast<int>(t);
        throw error("fill_scheme_graph: crossing missing from edge order");
    };
    for (int c = 0; c < fl.crossing_count; ++c) {
        const auto& cr = crossings[c];
        int eid = cr.e.a * q + cr.e.b, fid = cr.f.a * q + cr.f.b;
        int te = position_of(edge_order[eid], c);
        int tf = position_of(edge_order[fid], c);
        int e_lo = fl.edge_segments[eid][te] * 2 + 1;       // toward e's a-side end
        int e_hi = fl.edge_segments[eid][te + 1] * 2;       // toward e's b-side end
        int f_lo = fl.edge_segments[fid][tf] * 2 + 1;
        int f_hi = fl.edge_segments[fid][tf + 1] * 2;
        auto& rot = g.rotation[fl.node_x(c)];
        if (cross_orient[c] == 0)
            rot = {e_lo, f_lo, e_hi, f_hi};
        else
            rot = {e_lo, f_hi, e_hi, f_lo};
    }
}

inline scheme_graph make_scheme_graph(const drawing& d, const flattening& fl) {
    scheme_graph g;
    fill_scheme_graph(g, fl, d.crossings, d.edge_order, d.rot_a, d.rot_b, d.cross_orient,
                      d.seg_signs);
    return g;
}

inline face_trace trace_faces(const drawing& d) {
    flattening fl = flatten(d);
    return trace(make_scheme_graph(d, fl));
}

/// The surface of the cellular embedding of the flattening determined by the
/// drawing's scheme (every face capped off with a disk).
inline surface realized_surface(const drawing& d) {
    face_trace t = trace_faces(d);
    int chi = t.euler_characteristic;
    if (t.realized_orientable) {
        if ((2 - chi) % 2 != 0) throw error("realized_surface: odd Euler genus on orientable scheme");
        return make_surface(true, (2 - chi) / 2);
    }
    return make_surface(false, 2 - chi);
}

/// True iff the drawing embeds in sigma: handles/crosscaps can be attached to
/// faces of the realized cellular surface to reach sigma.
inline bool embeds_in(const drawing& d, const surface& sigma) {
    return attachable(realized_surface(d), sigma);
}

}  // namespace kpq
