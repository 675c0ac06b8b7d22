#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "kpq/surface.hpp"

namespace kpq {

/// An edge of K_{p,q}: a-side index x b-side index, both 0-based.
struct edge_ref {
    int a = -1;
    int b = -1;
    friend auto operator<=>(const edge_ref&, const edge_ref&) = default;
};

/// An unordered pair of independent edges that cross, stored normalized (e < f).
struct crossing_pair {
    edge_ref e;
    edge_ref f;
    friend auto operator<=>(const crossing_pair&, const crossing_pair&) = default;

    bool involves(edge_ref g) const { return e == g || f == g; }
    edge_ref other(edge_ref g) const { return e == g ? f : e; }
};

inline crossing_pair make_crossing(edge_ref x, edge_ref y) {
    if (y < x) std::swap(x, y);
    return {x, y};
}

/// Combinatorial descriptor of a good drawing of K_{p,q} in a surface.
///
/// The data is exactly what pins the drawing down up to homeomorphism:
///   - crossings: which independent edge pairs cross (each at most once);
///   - edge_order: for every edge, its crossings ordered from the a-side end;
///   - rot_a / rot_b: cyclic rotation at each real vertex (neighbor indices);
///   - cross_orient: one of the two alternation classes per crossing. With the
///     pair {e,f} normalized e < f and e_lo / e_hi denoting the darts at the
///     crossing vertex pointing toward e's a-side / b-side end, bit 0 means
///     the rotation there is (e_lo, f_lo, e_hi, f_hi) and bit 1 means
///     (e_lo, f_hi, e_hi, f_lo);
///   - seg_signs: a +-1 signal per flattening segment (segment t of an edge
///     crossed k times lies between crossings t-1 and t, 0 <= t <= k).
///
/// Drawings are plain values; every operation below is a pure function, safe
/// to call concurrently.
struct drawing {
    int p = 0;
    int q = 0;
    surface target = surface::sphere();
    std::vector<std::string> a_names;
    std::vector<std::string> b_names;
    std::vector<crossing_pair> crossings;
    std::vector<std::vector<int>> edge_order;           // p*q entries, crossing indices
    std::vector<std::vector<int>> rot_a;                // per a-vertex: cyclic list of b-indices
    std::vector<std::vector<int>> rot_b;                // per b-vertex: cyclic list of a-indices
    std::vector<std::uint8_t> cross_orient;             // per crossing: 0 or 1
    std::vector<std::vector<std::int8_t>> seg_signs;    // p*q entries, edge_order[e].size()+1 each

    friend bool operator==(const drawing&, const drawing&) = default;

    int edge_count() const { return p * q; }
    int edge_id(edge_ref e) const { return e.a * q + e.b; }
    edge_ref edge_at(int id) const { return {id / q, id % q}; }

    std::string edge_name(edge_ref e) const { return a_names[e.a] + "-" + b_names[e.b]; }

    int a_index(std::string_view name) const {
        for (int i = 0; i < p; ++i)
            if (a_names[i] == name) return i;
        return -1;
    }
    int b_index(std::string_view name) const {
        for (int j = 0; j < q; ++j)
            if (b_names[j] == name) return j;
        return -1;
    }
};

/// Crossing-free drawing of K_{p,q} with default names a1..ap, b1..bq and
/// identity rotations. A convenient starting point for tests and builders.
inline drawing make_drawing(int p, int q, surface target = surface::sphere()) {
    if (p < 1 || q < 1) throw error("K_{p,q} needs p, q >= 1");
    drawing d;
    d.p = p;
    d.q = q;
    d.target = target;
    for (int i = 0; i < p; ++i) d.a_names.push_back("a" + std::to_string(i + 1));
    for (int j = 0; j < q; ++j) d.b_names.push_back("b" + std::to_string(j + 1));
    d.edge_order.assign(static_cast<std::size_t>(p) * q, {});
    d.seg_signs.assign(static_cast<std::size_t>(p) * q, std::vector<std::int8_t>{1});
    d.rot_a.resize(p);
    d.rot_b.resize(q);
    for (int i = 0; i < p; ++i) {
        d.rot_a[i].resize(q);
        std::iota(d.rot_a[i].begin(), d.rot_a[i].end(), 0);
    }
    for (int j = 0; j < q; ++j) {
        d.rot_b[j].resize(p);
        std::iota(d.rot_b[j].begin(), d.rot_b[j].end(), 0);
    }
    return d;
}

namespace detail {

inline bool valid_name(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c == '-' || c == '#' || c == ' ') return false;
    return true;
}

inline bool is_cyclic_perm_of_range(const std::vector<int>& rot, int n) {
    if (static_cast<int>(rot.size()) != n) return false;
    std::vector<char> seen(n, 0);
    for (int v : rot) {
        if (v < 0 || v >= n || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

}  // namespace detail

/// Checks the goodness conditions and internal consistency of a drawing.
/// Returns a list of violations; empty means the drawing is good:
///   (i)  no pair of edges crosses more than once,
///   (ii) adjacent edges never cross,
///   (iii) no triple points (structural: each crossing is its own vertex),
/// plus: every crossing appears exactly once in both of its edges' orders,
/// rotations are cyclic permutations of the neighbors, orientation bits and
/// signs are well-formed.
inline std::vector<std::string> validate_good(const drawing& d) {
    std::vector<std::string> out;
    auto fail = [&](std::string msg) { out.push_back(std::move(msg)); };

    if (d.p < 1 || d.q < 1) {
        fail("bad-context: p and q must be >= 1");
        return out;
    }
    if (static_cast<int>(d.a_names.size()) != d.p || static_cast<int>(d.b_names.size()) != d.q) {
        fail("bad-context: name lists do not match p, q");
        return out;
    }
    {
        std::vector<std::string> all(d.a_names);
        all.insert(all.end(), d.b_names.begin(), d.b_names.end());
        for (const auto& n : all)
            if (!detail::valid_name(n)) fail("bad-name: '" + n + "'");
        std::sort(all.begin(), all.end());
        if (std::adjacent_find(all.begin(), all.end()) != all.end())
            fail("bad-context: duplicate vertex name");
    }

    const int ne = d.edge_count();
    const int nx = static_cast<int>(d.crossings.size());
    if (static_cast<int>(d.edge_order.size()) != ne || static_cast<int>(d.seg_signs.size()) != ne ||
        static_cast<int>(d.rot_a.size()) != d.p || static_cast<int>(d.rot_b.size()) != d.q ||
        static_cast<int>(d.cross_orient.size()) != nx) {
        fail("bad-shape: field sizes inconsistent with p, q, crossings");
        return out;
    }

    for (int i = 0; i < d.p; ++i)
        if (!detail::is_cyclic_perm_of_range(d.rot_a[i], d.q))
            fail("bad-rotation: " + d.a_names[i]);
    for (int j = 0; j < d.q; ++j)
        if (!detail::is_cyclic_perm_of_range(d.rot_b[j], d.p))
            fail("bad-rotation: " + d.b_names[j]);

    bool edges_ok = true;
    for (int c = 0; c < nx; ++c) {
        const auto& cr = d.crossings[c];
        auto in_range = [&](edge_ref e) {
            return e.a >= 0 && e.a < d.p && e.b >= 0 && e.b < d.q;
        };
        if (!in_range(cr.e) || !in_range(cr.f)) {
            fail("bad-crossing: edge out of range at crossing " + std::to_string(c));
            edges_ok = false;
            continue;
        }
        if (cr.e == cr.f) {
            fail("self-cross: crossing " + std::to_string(c));
            continue;
        }
        if (cr.e.a == cr.f.a || cr.e.b == cr.f.b)
            fail("adjacent-edges-cross: " + d.edge_name(cr.e) + " x " + d.edge_name(cr.f));
        if (d.cross_orient[c] > 1)
            fail("bad-orientation-bit: crossing " + std::to_string(c));
    }
    if (!edges_ok) return out;

    {
        auto sorted = d.crossings;
        for (auto& cr : sorted) cr = make_crossing(cr.e, cr.f);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            fail("pair-crosses-twice");
    }

    // Every crossing must show up exactly once in the order of each of its
    // two edges and nowhere else.
    std::vector<std::vector<int>> expected(ne);
    for (int c = 0; c < nx; ++c) {
        expected[d.edge_id(d.crossings[c].e)].push_back(c);
        expected[d.edge_id(d.crossings[c].f)].push_back(c);
    }
    for (int e = 0; e < ne; ++e) {
        auto got = d.edge_order[e];
        std::sort(got.begin(), got.end());
        std::sort(expected[e].begin(), expected[e].end());
        if (got != expected[e])
            fail("order-mismatch: " + d.edge_name(d.edge_at(e)));
        if (d.seg_signs[e].size() != d.edge_order[e].size() + 1)
            fail("bad-signs: " + d.edge_name(d.edge_at(e)));
        for (auto s : d.seg_signs[e])
            if (s != 1 && s != -1) fail("bad-sign-value: " + d.edge_name(d.edge_at(e)));
    }
    return out;
}

inline void require_good(const drawing& d) {
    auto v = validate_good(d);
    if (!v.empty()) {
        std::string msg = "drawing is not good:";
        for (const auto& s : v) msg += " [" + s + "]";
        throw error(msg);
    }
}

/// Number of crossings of the drawing.
inline int crn(const drawing& d) { return static_cast<int>(d.crossings.size()); }

/// Number of crossings between edges incident with q-side vertex u and edges
/// incident with q-side vertex v. Every crossing joins edges with distinct
/// b-endpoints, so it is counted by exactly one q-side pair.
inline int crn_pair(const drawing& d, std::string_view u, std::string_view v) {
    int ju = d.b_index(u), jv = d.b_index(v);
    if (ju < 0 || jv < 0) throw error("crn_pair: not q-side vertices");
    if (ju == jv) throw error("crn_pair: vertices must be distinct");
    int n = 0;
    for (const auto& cr : d.crossings) {
        int x = cr.e.b, y = cr.f.b;
        if ((x == ju && y == jv) || (x == jv && y == ju)) ++n;
    }
    return n;
}

inline int crn_pair_idx(const drawing& d, int ju, int jv) {
    int n = 0;
    for (const auto& cr : d.crossings) {
        int x = cr.e.b, y = cr.f.b;
        if ((x == ju && y == jv) || (x == jv && y == ju)) ++n;
    }
    return n;
}

/// Total crossings on star(u) for a q-side vertex, i.e. sum of crn_pair over
/// all partners (no crossing can join two edges of the same star).
inline int star_load(const drawing& d, int ju) {
    int n = 0;
    for (const auto& cr : d.crossings)
        if (cr.e.b == ju || cr.f.b == ju) ++n;
    return n;
}

/// Deletes a q-side vertex: drops its star, all crossings on the star, and
/// splices the crossing orders and segment signs of the surviving edges
/// (merged segments multiply their signs). Returns a drawing of K_{p,q-1}.
inline drawing delete_vertex(const drawing& d, std::string_view uname) {
    if (d.q < 2) throw error("delete_vertex: q must be at least 2");
    int ju = d.b_index(uname);
    if (ju < 0) throw error("delete_vertex: no q-side vertex named '" + std::string(uname) + "'");

    drawing out;
    out.p = d.p;
    out.q = d.q - 1;
    out.target = d.target;
    out.a_names = d.a_names;
    out.b_names = d.b_names;
    out.b_names.erase(out.b_names.begin() + ju);

    auto new_b = [&](int j) { return j < ju ? j : j - 1; };

    std::vector<int> cross_map(d.crossings.size(), -1);
    for (std::size_t c = 0; c < d.crossings.size(); ++c) {
        const auto& cr = d.crossings[c];
        if (cr.e.b == ju || cr.f.b == ju) continue;
        cross_map[c] = static_cast<int>(out.crossings.size());
        out.crossings.push_back(make_crossing({cr.e.a, new_b(cr.e.b)}, {cr.f.a, new_b(cr.f.b)}));
        out.cross_orient.push_back(d.cross_orient[c]);
    }

    out.edge_order.assign(static_cast<std::size_t>(out.p) * out.q, {});
    out.seg_signs.assign(static_cast<std::size_t>(out.p) * out.q, {});
    for (int i = 0; i < d.p; ++i) {
        for (int j = 0; j < d.q; ++j) {
            if (j == ju) continue;
            int oe = d.edge_id({i, j});
            int nev = out.edge_id({i, new_b(j)});
            const auto& order = d.edge_order[oe];
            const auto& signs = d.seg_signs[oe];
            std::vector<int> norder;
            std::vector<std::int8_t> nsigns;
            std::int8_t cur = signs[0];
            for (std::size_t t = 0; t < order.size(); ++t) {
                if (cross_map[order[t]] >= 0) {
                    norder.push_back(cross_map[order[t]]);
                    nsigns.push_back(cur);
                    cur = signs[t + 1];
                } else {
                    cur = static_cast<std::int8_t>(cur * signs[t + 1]);
                }
            }
            nsigns.push_back(cur);
            out.edge_order[nev] = std::move(norder);
            out.seg_signs[nev] = std::move(nsigns);
        }
    }

    out.rot_a.resize(d.p);
    for (int i = 0; i < d.p; ++i)
        for (int j : d.rot_a[i])
            if (j != ju) out.rot_a[i].push_back(new_b(j));
    out.rot_b.reserve(out.q);
    for (int j = 0; j < d.q; ++j)
        if (j != ju) out.rot_b.push_back(d.rot_b[j]);
    return out;
}

/// The flattening: the graph obtained by replacing every crossing with a
/// degree-4 vertex. Nodes are numbered a-side, then b-side, then one node per
/// crossing; segments of each edge are consecutive and run a-side -> b-side.
struct flattening {
    int p = 0;
    int q = 0;
    int crossing_count = 0;
    int vertices = 0;
    std::vector<std::pair<int, int>> segments;    // (node toward a-end, node toward b-end)
    std::vector<std::vector<int>> edge_segments;  // edge id -> its segment ids, a-side first

    int node_a(int i) const { return i; }
    int node_b(int j) const { return p + j; }
    int node_x(int c) const { return p + q + c; }
    int edge_count() const { return static_cast<int>(segments.size()); }
};

/// Builds the flattening from an edge-order table (crossings per edge, a-side
/// first). |V| = p + q + X and |E| = p*q + 2X.
inline flattening make_flattening(int p, int q, const std::vector<crossing_pair>& crossings,
                                  const std::vector<std::vector<int>>& edge_order) {
    flattening fl;
    fl.p = p;
    fl.q = q;
    fl.crossing_count = static_cast<int>(crossings.size());
    fl.vertices = p + q + fl.crossing_count;
    fl.edge_segments.resize(static_cast<std::size_t>(p) * q);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < q; ++j) {
            int e = i * q + j;
            int prev = fl.node_a(i);
            for (int c : edge_order[e]) {
                fl.edge_segments[e].push_back(static_cast<int>(fl.segments.size()));
                fl.segments.emplace_back(prev, fl.node_x(c));
                prev = fl.node_x(c);
            }
            fl.edge_segments[e].push_back(static_cast<int>(fl.segments.size()));
            fl.segments.emplace_back(prev, fl.node_b(j));
        }
    }
    return fl;
}

inline flattening flatten(const drawing& d) {
    require_good(d);
    return make_flattening(d.p, d.q, d.crossings, d.edge_order);
}

}  // namespace kpq
