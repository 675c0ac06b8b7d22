#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "kpq/drawing.hpp"

namespace kpq {

namespace detail {

/// Byte sink that tracks a lexicographic comparison against the best key so
/// far, so losing candidates are abandoned after the first worse byte. All
/// candidate keys of one drawing have equal length, which makes the
/// positionwise comparison sound.
struct key_writer {
    std::string buf;
    const std::string* best = nullptr;  // null: no incumbent / already strictly better
    bool dead = false;

    void put(int v) {
        if (dead) return;
        unsigned char byte = static_cast<unsigned char>(v);
        buf.push_back(static_cast<char>(byte));
        if (best != nullptr) {
            std::size_t i = buf.size() - 1;
            unsigned char ref = static_cast<unsigned char>((*best)[i]);
            if (byte > ref)
                dead = true;
            else if (byte < ref)
                best = nullptr;
        }
    }
};

struct canon_ctx {
    const drawing* d;
    std::vector<int> sa;        // a relabel: old index -> new label
    std::vector<int> sb;        // b relabel
    bool reflect = false;

    // scratch, rebuilt per candidate
    std::vector<int> cross_rank;          // old crossing id -> new id
    std::vector<crossing_pair> relabeled; // new id -> relabeled pair
    std::vector<std::int8_t> switch_sign; // per flattening node, +1/-1
};

inline void emit_candidate(canon_ctx& c, key_writer& w) {
    const drawing& d = *c.d;
    const int p = d.p, q = d.q;
    const int nx = static_cast<int>(d.crossings.size());

    // Relabel crossings and sort them.
    c.relabeled.resize(nx);
    std::vector<int> order(nx);
    for (int i = 0; i < nx; ++i) {
        const auto& cr = d.crossings[i];
        c.relabeled[i] = make_crossing({c.sa[cr.e.a], c.sb[cr.e.b]}, {c.sa[cr.f.a], c.sb[cr.f.b]});
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return c.relabeled[x] < c.relabeled[y]; });
    c.cross_rank.assign(nx, 0);
    for (int r = 0; r < nx; ++r) c.cross_rank[order[r]] = r;

    w.put(p);
    w.put(q);
    w.put(nx);
    for (int r = 0; r < nx; ++r) {
        const auto& cr = c.relabeled[order[r]];
        w.put(cr.e.a);
        w.put(cr.e.b);
        w.put(cr.f.a);
        w.put(cr.f.b);
    }
    if (w.dead) return;

    // Old edge id for a new-label edge, and its order/sign data.
    std::vector<int> inv_a(p), inv_b(q);
    for (int i = 0; i < p; ++i) inv_a[c.sa[i]] = i;
    for (int j = 0; j < q; ++j) inv_b[c.sb[j]] = j;

    for (int na = 0; na < p && !w.dead; ++na) {
        for (int nb = 0; nb < q; ++nb) {
            int oe = d.edge_id({inv_a[na], inv_b[nb]});
            w.put(static_cast<int>(d.edge_order[oe].size()));
            for (int cid : d.edge_order[oe]) w.put(c.cross_rank[cid]);
        }
    }
    if (w.dead) return;

    // Switching normalization over the flattening: BFS from node 0 in new
    // labels, neighbors in (label, segment) order; the unique switching with
    // all tree segments positive and the root kept fixed.
    const int nnodes = p + q + nx;
    auto node_a = [&](int i) { return i; };
    auto node_b = [&](int j) { return p + j; };
    auto node_x = [&](int r) { return p + q + r; };

    // Segments in canonical order: per new-label edge, a-side first.
    struct seg_rec {
        int x, y;          // nodes, a-side first
        std::int8_t sign;
    };
    std::vector<seg_rec> segs;
    std::vector<std::pair<int, int>> edge_seg_span(static_cast<std::size_t>(p) * q);
    segs.reserve(static_cast<std::size_t>(p) * q + 2 * nx);
    for (int na = 0; na < p; ++na) {
        for (int nb = 0; nb < q; ++nb) {
            int oe = d.edge_id({inv_a[na], inv_b[nb]});
            int first = static_cast<int>(segs.size());
            int prev = node_a(na);
            for (std::size_t t = 0; t < d.edge_order[oe].size(); ++t) {
                int xn = node_x(c.cross_rank[d.edge_order[oe][t]]);
                segs.push_back({prev, xn, d.seg_signs[oe][t]});
                prev = xn;
            }
            segs.push_back({prev, node_b(nb), d.seg_signs[oe].back()});
            edge_seg_span[static_cast<std::size_t>(na) * q + nb] = {first,
                                                                    static_cast<int>(segs.size())};
        }
    }

    std::vector<std::vector<std::pair<int, int>>> adj(nnodes);  // (neighbor, seg index)
    for (std::size_t s = 0; s < segs.size(); ++s) {
        adj[segs[s].x].push_back({segs[s].y, static_cast<int>(s)});
        adj[segs[s].y].push_back({segs[s].x, static_cast<int>(s)});
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());

    c.switch_sign.assign(nnodes, 0);
    std::vector<int> queue{0};
    c.switch_sign[0] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
        int x = queue[h];
        for (auto [y, s] : adj[x]) {
            if (c.switch_sign[y] != 0) continue;
            c.switch_sign[y] = static_cast<std::int8_t>(c.switch_sign[x] * segs[s].sign);
            queue.push_back(y);
        }
    }

    // Orientation bits, adjusted for role swap under relabeling, switching at
    // the crossing node, and global reflection.
    for (int r = 0; r < nx; ++r) {
        int old_id = order[r];
        const auto& oldc = d.crossings[old_id];
        edge_ref old_e_new{c.sa[oldc.e.a], c.sb[oldc.e.b]};
        bool swapped = !(old_e_new == c.relabeled[old_id].e);
        int bit = d.cross_orient[old_id];
        if (swapped) bit ^= 1;
        if (c.switch_sign[node_x(r)] < 0) bit ^= 1;
        if (c.reflect) bit ^= 1;
        w.put(bit);
    }
    if (w.dead) return;

    // Rotations at real vertices: switched/reflected reversal, then rotated
    // so the smallest neighbor label comes first (cyclic anchor is not data).
    auto emit_rotation = [&](const std::vector<int>& rot_old, const std::vector<int>& relab,
                             bool reversed) {
        int n = static_cast<int>(rot_old.size());
        std::vector<int> word(n);
        for (int t = 0; t < n; ++t) {
            int src = reversed ? (n - 1 - t) : t;
            word[t] = relab[rot_old[src]];
        }
        int at = static_cast<int>(std::min_element(word.begin(), word.end()) - word.begin());
        for (int t = 0; t < n; ++t) w.put(word[(at + t) % n]);
    };
    for (int na = 0; na < p && !w.dead; ++na) {
        bool rev = (c.switch_sign[node_a(na)] < 0) ^ c.reflect;
        emit_rotation(d.rot_a[inv_a[na]], c.sb, rev);
    }
    for (int nb = 0; nb < q && !w.dead; ++nb) {
        bool rev = (c.switch_sign[node_b(nb)] < 0) ^ c.reflect;
        emit_rotation(d.rot_b[inv_b[nb]], c.sa, rev);
    }
    if (w.dead) return;

    // Switched segment signs, canonical order.
    for (const auto& s : segs) {
        int v = s.sign * c.switch_sign[s.x] * c.switch_sign[s.y];
        w.put(v > 0 ? 1 : 0);
    }
}

}  // namespace detail

/// Canonical key of a drawing: the lexicographically smallest serialization
/// over side-preserving relabelings, global rotation reversal (reflection),
/// and sign switching (normalized via a labeled BFS spanning tree, which
/// leaves exactly the two mirror representatives per relabeling). Equal keys
/// imply the drawings are isomorphic under those moves. Exponential in p, q
/// in the worst case; fine at desk scale, used for enumeration dedup.
inline std::string canonical_form(const drawing& d) {
    std::vector<int> sa(d.p), sb(d.q);
    std::iota(sa.begin(), sa.end(), 0);
    std::iota(sb.begin(), sb.end(), 0);

    std::string best;
    bool have_best = false;
    detail::canon_ctx ctx;
    ctx.d = &d;

    std::vector<int> perm_a(sa), perm_b(sb);
    std::sort(perm_a.begin(), perm_a.end());
    do {
        std::sort(perm_b.begin(), perm_b.end());
        do {
            for (int refl = 0; refl < 2; ++refl) {
                ctx.sa = perm_a;
                ctx.sb = perm_b;
                ctx.reflect = (refl == 1);
                detail::key_writer w;
                w.best = have_best ? &best : nullptr;
                detail::emit_candidate(ctx, w);
                if (w.dead) continue;
                if (!have_best || w.buf < best) {
                    best = std::move(w.buf);
                    have_best = true;
                }
            }
        } while (std::next_permutation(perm_b.begin(), perm_b.end()));
    } while (std::next_permutation(perm_a.begin(), perm_a.end()));
    return best;
}

}  // namespace kpq
