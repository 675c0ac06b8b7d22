#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kpq/drawing.hpp"
#include "kpq/duplication.hpp"

namespace kpq {

/// Z(p) = floor(p/2) floor((p-1)/2): the unavoidable crossing cost between the
/// stars of a vertex and its duplicate.
inline int zp(int p) {
    if (p < 0) throw error("zp: p must be non-negative");
    return (p / 2) * ((p - 1) / 2);
}

/// True iff the 4-cycle of K_{p,q} induced by {i, j, u, v} crosses itself:
/// in a good drawing only the two independent pairs {iu, jv} and {iv, ju}
/// can cross.
inline bool four_cycle_selfcross(const drawing& d, std::string_view u, std::string_view v,
                                 std::string_view i, std::string_view j) {
    int ju = d.b_index(u), jv = d.b_index(v);
    int ai = d.a_index(i), aj = d.a_index(j);
    if (ju < 0 || jv < 0 || ai < 0 || aj < 0)
        throw error("four_cycle_selfcross: u, v must be q-side and i, j p-side vertices");
    if (ju == jv || ai == aj) throw error("four_cycle_selfcross: degenerate 4-cycle");
    crossing_pair c1 = make_crossing({ai, ju}, {aj, jv});
    crossing_pair c2 = make_crossing({ai, jv}, {aj, ju});
    for (const auto& cr : d.crossings) {
        crossing_pair n = make_crossing(cr.e, cr.f);
        if (n == c1 || n == c2) return true;
    }
    return false;
}

/// One bit per unordered p-side pair, set iff the 4-cycle
/// through {i, j, u, v} self-crosses. Pairs are indexed i < j in row-major
/// triangular order.
struct color_function {
    int p = 0;
    std::vector<std::uint8_t> bits;  // C(p,2) entries

    static int pair_index(int i, int j, int p) {
        if (j < i) std::swap(i, j);
        return i * p - i * (i + 1) / 2 + (j - i - 1);
    }
    bool at(int i, int j) const { return bits[pair_index(i, j, p)] != 0; }
    int popcount() const {
        int n = 0;
        for (auto b : bits) n += b;
        return n;
    }
    friend auto operator<=>(const color_function&, const color_function&) = default;
};

inline color_function color_fn(const drawing& d, std::string_view u, std::string_view v) {
    color_function f;
    f.p = d.p;
    f.bits.assign(static_cast<std::size_t>(d.p) * (d.p - 1) / 2, 0);
    for (int i = 0; i < d.p; ++i)
        for (int j = i + 1; j < d.p; ++j)
            if (four_cycle_selfcross(d, u, v, d.a_names[i], d.a_names[j]))
                f.bits[color_function::pair_index(i, j, d.p)] = 1;
    return f;
}

/// Simple graph on the p-side.
struct pside_graph {
    int p = 0;
    std::vector<std::uint8_t> adj;  // p*p symmetric 0/1

    bool has_edge(int i, int j) const { return adj[static_cast<std::size_t>(i) * p + j] != 0; }
    void set_edge(int i, int j) {
        adj[static_cast<std::size_t>(i) * p + j] = 1;
        adj[static_cast<std::size_t>(j) * p + i] = 1;
    }
    int edge_count() const {
        int n = 0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j) n += has_edge(i, j);
        return n;
    }
    std::optional<std::array<int, 3>> find_triangle() const {
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j)
                if (has_edge(i, j))
                    for (int k = j + 1; k < p; ++k)
                        if (has_edge(i, k) && has_edge(j, k)) return std::array<int, 3>{i, j, k};
        return std::nullopt;
    }
};

/// The noncrossing graph on the p-side: join i and j iff no 4-cycle {i, j, u, v}
/// self-crosses for any u, v in S.
inline pside_graph noncrossing_graph(const drawing& d, const std::vector<std::string>& s_set) {
    if (s_set.size() < 2) throw error("noncrossing_graph: need |S| >= 2");
    std::vector<int> js;
    for (const auto& name : s_set) {
        int j = d.b_index(name);
        if (j < 0) throw error("noncrossing_graph: '" + name + "' is not a q-side vertex");
        js.push_back(j);
    }
    pside_graph g;
    g.p = d.p;
    g.adj.assign(static_cast<std::size_t>(d.p) * d.p, 0);
    for (int i = 0; i < d.p; ++i) {
        for (int j = i + 1; j < d.p; ++j) {
            bool clean = true;
            for (std::size_t x = 0; x < js.size() && clean; ++x)
                for (std::size_t y = x + 1; y < js.size() && clean; ++y)
                    if (four_cycle_selfcross(d, d.b_names[js[x]], d.b_names[js[y]], d.a_names[i],
                                             d.a_names[j]))
                        clean = false;
            if (clean) g.set_edge(i, j);
        }
    }
    return g;
}

class triangle_found : public error {
  public:
    std::array<int, 3> triangle;
    explicit triangle_found(std::array<int, 3> t)
        : error("noncrossing graph has a triangle {" + std::to_string(t[0]) + "," +
                std::to_string(t[1]) + "," + std::to_string(t[2]) +
                "}: a crossing-free K_{3,|S|} subdrawing"),
          triangle(t) {}
};

/// C(p,2) - |E| for a triangle-free graph; by Turan's bound this is at least
/// C(p,2) - floor(p^2/4) = Z(p). A triangle is reported loudly: it signals a
/// crossing-free K_{3,|S|} subdrawing.
inline int turan_deficit(const pside_graph& g) {
    if (auto t = g.find_triangle()) throw triangle_found(*t);
    return g.p * (g.p - 1) / 2 - g.edge_count();
}

/// Some q-side pair with crn_pair >= threshold, or nothing. Deterministic:
/// the lexicographically smallest pair among those maximizing crn_pair.
inline std::optional<std::pair<std::string, std::string>> heavy_pair(const drawing& d,
                                                                     int threshold) {
    int best = -1, bu = -1, bv = -1;
    for (int u = 0; u < d.q; ++u)
        for (int v = u + 1; v < d.q; ++v) {
            int c = crn_pair_idx(d, u, v);
            if (c > best) {
                best = c;
                bu = u;
                bv = v;
            }
        }
    if (best < threshold || bu < 0) return std::nullopt;
    return std::make_pair(d.b_names[bu], d.b_names[bv]);
}

/// One deletion step of the reduction loop.
struct deletion_record {
    std::string u;       // deleted vertex
    std::string v;       // its heavy partner at deletion time
    int pair_crossings;  // crn_pair(u, v) just before deleting
    int crn_after;       // crossings remaining after the deletion
};

/// Trace of the successive-deletion / duplicate-reinsertion loop.
struct reduction_trace {
    drawing original;
    drawing base;
    std::optional<drawing> rebuilt;
    std::vector<deletion_record> deleted;
    int crn_original = 0;
    int crn_base = 0;
    int crn_rebuilt = -1;
    bool reached_floor = false;  // false: stopped early, no heavy pair left
    bool inequality_ok = true;   // crn_rebuilt <= crn_original once rebuilt
};

/// Repeatedly finds a q-side pair with crn_pair >= Z(p) and deletes its first
/// member, recording (u_i, v_i), until q reaches floor_q or no such pair
/// exists. Early stop is a first-class outcome, not an error.
inline reduction_trace reduce_to_base(const drawing& d, int floor_q) {
    require_good(d);
    if (floor_q < 1) throw error("reduce_to_base: floor must be >= 1");
    reduction_trace tr;
    tr.original = d;
    tr.crn_original = crn(d);
    drawing cur = d;
    const int threshold = zp(d.p);
    while (cur.q > floor_q) {
        auto hp = heavy_pair(cur, threshold);
        if (!hp) break;
        deletion_record rec;
        rec.u = hp->first;
        rec.v = hp->second;
        rec.pair_crossings = crn_pair(cur, rec.u, rec.v);
        cur = delete_vertex(cur, rec.u);
        rec.crn_after = crn(cur);
        tr.deleted.push_back(std::move(rec));
    }
    tr.reached_floor = (cur.q <= floor_q);
    tr.crn_base = crn(cur);
    tr.base = std::move(cur);
    return tr;
}

/// Runs the full reduce-and-rebuild loop: reduce, then reinsert the deleted vertices in
/// reverse order, each as a duplicate of its recorded partner. The duplicate
/// contributes the partner's current star load plus Z(p) crossings where the
/// deleted vertex contributed at least Z(p). The inequality
/// crn_rebuilt <= crn_original is checked and surfaced, never assumed.
inline reduction_trace rebuild_and_compare(const drawing& d, int floor_q) {
    reduction_trace tr = reduce_to_base(d, floor_q);
    drawing cur = tr.base;
    for (auto it = tr.deleted.rbegin(); it != tr.deleted.rend(); ++it) {
        // Copied crossings equal the partner's star load whatever the gap;
        // gap 0 is the deterministic choice.
        cur = duplicate(cur, {it->v, 0, it->u});
    }
    tr.crn_rebuilt = crn(cur);
    tr.inequality_ok = tr.crn_rebuilt <= tr.crn_original;
    tr.rebuilt = std::move(cur);
    return tr;
}

/// Largest q-side clique on which every pair carries the same color function,
/// by exhaustive subset search (the degenerate direction of the Ramsey step).
struct mono_clique {
    std::vector<std::string> members;
    color_function color;
};

inline mono_clique largest_monochromatic_clique(const drawing& d) {
    if (d.q > 12) throw error("largest_monochromatic_clique: q too large for exhaustive search");
    std::vector<std::vector<color_function>> colors(d.q, std::vector<color_function>(d.q));
    for (int u = 0; u < d.q; ++u)
        for (int v = u + 1; v < d.q; ++v)
            colors[u][v] = color_fn(d, d.b_names[u], d.b_names[v]);

    mono_clique best;
    for (long mask = 1; mask < (1L << d.q); ++mask) {
        std::vector<int> members;
        for (int j = 0; j < d.q; ++j)
            if ((mask >> j) & 1) members.push_back(j);
        if (members.size() < 2 || members.size() <= best.members.size()) continue;
        const color_function& c0 = colors[members[0]][members[1]];
        bool mono = true;
        for (std::size_t x = 0; x < members.size() && mono; ++x)
            for (std::size_t y = x + 1; y < members.size() && mono; ++y)
                if (!(colors[members[x]][members[y]] == c0)) mono = false;
        if (mono) {
            best.members.clear();
            for (int j : members) best.members.push_back(d.b_names[j]);
            best.color = c0;
        }
    }
    return best;
}

}  // namespace kpq
