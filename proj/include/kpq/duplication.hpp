#pragma once

#include <array>
#include <climits>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "kpq/drawing.hpp"
#include "kpq/face_trace.hpp"

namespace kpq {

/// One duplication: copy q-side vertex `target` into the face gap at position
/// `gap` of its rotation, naming the copy `new_name`.
struct duplication_step {
    std::string target;
    int gap = 0;
    std::string new_name;
};

/// A base drawing plus an ordered list of duplications.
struct extension_script {
    drawing base;
    std::vector<duplication_step> steps;
};

class script_error : public error {
  public:
    int step_index;
    script_error(int idx, const std::string& what) : error(what), step_index(idx) {}
};

namespace detail {

struct half {
    edge_ref e;
    bool hi = false;  // toward the edge's b-side end
    friend bool operator==(const half&, const half&) = default;
};

/// The stored cyclic rotation word at crossing vertex c, as four darts.
inline std::array<half, 4> crossing_word(const drawing& d, int c) {
    const auto& cr = d.crossings[c];
    if (d.cross_orient[c] == 0)
        return {half{cr.e, false}, half{cr.f, false}, half{cr.e, true}, half{cr.f, true}};
    return {half{cr.e, false}, half{cr.f, true}, half{cr.e, true}, half{cr.f, false}};
}

/// Reads the orientation bit off a cyclic alternation word for the pair {x,y}.
inline std::uint8_t bit_from_word(const std::array<half, 4>& w, edge_ref x, edge_ref y) {
    edge_ref pe = x, qe = y;
    if (qe < pe) std::swap(pe, qe);
    int pos = -1;
    for (int t = 0; t < 4; ++t)
        if (w[t].e == pe && !w[t].hi) pos = t;
    if (pos < 0) throw error("bit_from_word: malformed crossing word");
    const half& nxt = w[(pos + 1) % 4];
    if (!(nxt.e == qe)) throw error("bit_from_word: word does not alternate");
    return nxt.hi ? 1 : 0;
}

}  // namespace detail

/// Duplicates a q-side vertex u: the copy v is drawn inside a small disk
/// around u, each edge vw routed parallel to uw so that vw crosses exactly
/// the edges uw crosses, plus the unavoidable star(u)-star(v) crossings.
///
/// With u's rotation e_1..e_p read from the gap, edge v-w_i sweeps across
/// {e_1..e_{i-1}} or {e_{i+1}..e_p}, whichever is smaller (ties to the
/// lower-index side), for a total of exactly Z(p) = sum_i min(i-1, p-i)
/// mutual crossings. v inherits u's rotation. The copied crossings sit
/// immediately next to the originals along the crossed edges, on the side the
/// parallel strand actually runs (the strand keeps a fixed side of uw, so the
/// before/after placement follows from each crossing's alternation word and
/// the signal parity accumulated along uw). Inside the disk the nested arcs
/// meet each star edge in increasing sweep order.
inline drawing duplicate(const drawing& d, const duplication_step& step) {
    require_good(d);
    int ju = d.b_index(step.target);
    if (ju < 0) throw error("duplicate: '" + step.target + "' is not a q-side vertex");
    if (step.gap < 0 || step.gap >= d.p) throw error("duplicate: gap index out of range");
    if (!detail::valid_name(step.new_name)) throw error("duplicate: bad vertex name");
    if (d.a_index(step.new_name) >= 0 || d.b_index(step.new_name) >= 0)
        throw error("duplicate: vertex name '" + step.new_name + "' already in use");

    const int p = d.p, q = d.q, jv = q;
    std::vector<int> xk(p);
    for (int k = 0; k < p; ++k) xk[k] = d.rot_b[ju][(step.gap + k) % p];
    auto ek = [&](int k) { return edge_ref{xk[k], ju}; };
    auto nk = [&](int k) { return edge_ref{xk[k], jv}; };
    auto low = [&](int k) { return k <= p - 1 - k; };

    struct pending {
        crossing_pair pair;
        std::uint8_t bit;
    };
    std::vector<pending> pend;
    struct insert_rec {
        int at_crossing;
        bool after;
        int new_id;
    };
    std::vector<std::vector<insert_rec>> inserts(d.edge_count());
    std::vector<std::vector<int>> star_append(p);  // per strand position j, new ids on E_j
    std::vector<std::vector<int>> strand_order(p);

    int next_id = crn(d);

    // Strand side at the p-side anchor, expressed in local frames; true = the
    // rotation-successor side. Low arcs hug the clockwise side of e_k at the
    // disk, so the side at x_k is that, corrected by the signal parity of e_k.
    std::vector<bool> sigma0(p);
    for (int k = 0; k < p; ++k) {
        int eid = d.edge_id(ek(k));
        int negs = 0;
        for (auto s : d.seg_signs[eid])
            if (s < 0) ++negs;
        sigma0[k] = low(k) ^ (negs % 2 == 1);
    }

    // Copied crossings, one per crossing of each star(u) edge.
    for (int k = 0; k < p; ++k) {
        int eid = d.edge_id(ek(k));
        bool sigma = sigma0[k];
        const auto& order = d.edge_order[eid];
        const auto& signs = d.seg_signs[eid];
        for (std::size_t t = 0; t < order.size(); ++t) {
            sigma ^= (signs[t] < 0);
            int c = order[t];
            edge_ref h = d.crossings[c].other(ek(k));
            auto w = detail::crossing_word(d, c);
            int pos = -1;
            for (int s = 0; s < 4; ++s)
                if (w[s].e == ek(k) && !w[s].hi) pos = s;
            if (pos < 0) throw error("duplicate: crossing word lookup failed");
            detail::half crossed = sigma ? w[(pos + 3) % 4] : w[(pos + 1) % 4];
            auto w2 = w;
            for (auto& hh : w2)
                if (hh.e == ek(k)) hh.e = nk(k);
            pend.push_back({make_crossing(nk(k), h), detail::bit_from_word(w2, nk(k), h)});
            inserts[d.edge_id(h)].push_back({c, crossed.hi, next_id});
            strand_order[k].push_back(next_id);
            ++next_id;
        }
    }

    // Mutual star(u)-star(v) crossings inside the disk.
    std::vector<std::vector<std::pair<int, int>>> ss_for(p);  // per j: (|k-j|, id)
    for (int k = 0; k < p; ++k) {
        std::vector<int> targets;
        if (low(k))
            for (int j = k - 1; j >= 0; --j) targets.push_back(j);
        else
            for (int j = k + 1; j < p; ++j) targets.push_back(j);
        for (int j : targets) {
            std::array<detail::half, 4> w;
            if (low(k))
                w = {detail::half{nk(k), false}, detail::half{ek(j), true},
                     detail::half{nk(k), true}, detail::half{ek(j), false}};
            else
                w = {detail::half{nk(k), false}, detail::half{ek(j), false},
                     detail::half{nk(k), true}, detail::half{ek(j), true}};
            pend.push_back({make_crossing(nk(k), ek(j)), detail::bit_from_word(w, nk(k), ek(j))});
            strand_order[k].push_back(next_id);
            ss_for[j].push_back({std::abs(k - j), next_id});
            ++next_id;
        }
    }
    for (int j = 0; j < p; ++j) {
        std::sort(ss_for[j].begin(), ss_for[j].end());
        for (auto [dist, id] : ss_for[j]) star_append[j].push_back(id);
    }

    drawing out;
    out.p = p;
    out.q = q + 1;
    out.target = d.target;
    out.a_names = d.a_names;
    out.b_names = d.b_names;
    out.b_names.push_back(step.new_name);
    out.crossings = d.crossings;
    out.cross_orient = d.cross_orient;
    for (const auto& pe : pend) {
        out.crossings.push_back(pe.pair);
        out.cross_orient.push_back(pe.bit);
    }

    out.edge_order.assign(static_cast<std::size_t>(p) * (q + 1), {});
    out.seg_signs.assign(static_cast<std::size_t>(p) * (q + 1), {});

    std::vector<int> strand_pos_of_a(p, -1);  // a-index -> k
    for (int k = 0; k < p; ++k) strand_pos_of_a[xk[k]] = k;

    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < q; ++j) {
            int oe = d.edge_id({i, j});
            int ne = out.edge_id({i, j});
            const auto& order = d.edge_order[oe];
            const auto& signs = d.seg_signs[oe];
            int before_of = -1, after_of = -1;  // per crossing, filled below
            std::vector<int> norder;
            std::vector<std::int8_t> nsigns;
            std::int8_t cur = signs[0];
            for (std::size_t t = 0; t < order.size(); ++t) {
                before_of = after_of = -1;
                for (const auto& ins : inserts[oe])
                    if (ins.at_crossing == order[t]) (ins.after ? after_of : before_of) = ins.new_id;
                if (before_of >= 0) {
                    norder.push_back(before_of);
                    nsigns.push_back(cur);
                    cur = 1;
                }
                norder.push_back(order[t]);
                nsigns.push_back(cur);
                cur = signs[t + 1];
                if (after_of >= 0) {
                    norder.push_back(after_of);
                    nsigns.push_back(1);
                }
            }
            if (j == ju && strand_pos_of_a[i] >= 0) {
                for (int id : star_append[strand_pos_of_a[i]]) {
                    norder.push_back(id);
                    nsigns.push_back(cur);
                    cur = 1;
                }
            }
            nsigns.push_back(cur);
            out.edge_order[ne] = std::move(norder);
            out.seg_signs[ne] = std::move(nsigns);
        }
    }
    // Strand edges v-x_k: the copies in path order, then the disk arcs; signs
    // mirror the host edge, with +1 inside the disk.
    for (int k = 0; k < p; ++k) {
        int ne = out.edge_id({xk[k], jv});
        int oe = d.edge_id(ek(k));
        out.edge_order[ne] = strand_order[k];
        const auto& hsigns = d.seg_signs[oe];
        std::vector<std::int8_t> nsigns(hsigns.begin(), hsigns.end());
        nsigns.resize(strand_order[k].size() + 1, 1);
        out.seg_signs[ne] = std::move(nsigns);
    }

    out.rot_a = d.rot_a;
    for (int k = 0; k < p; ++k) {
        auto& rot = out.rot_a[xk[k]];
        int at = -1;
        for (std::size_t t = 0; t < rot.size(); ++t)
            if (rot[t] == ju) at = static_cast<int>(t);
        rot.insert(rot.begin() + at + (sigma0[k] ? 1 : 0), jv);
    }
    out.rot_b = d.rot_b;
    out.rot_b.push_back(xk);
    return out;
}

/// Folds duplicate over the script's steps; the first failing step aborts
/// with its index.
inline drawing run_script(const extension_script& s) {
    drawing cur = s.base;
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
        try {
            cur = duplicate(cur, s.steps[i]);
        } catch (const script_error&) {
            throw;
        } catch (const error& e) {
            throw script_error(static_cast<int>(i),
                               "script step " + std::to_string(i) + " failed: " + e.what());
        }
    }
    return cur;
}

/// Crossing-free spherical drawing of K_{p,2}: b1 carries (a1..ap), b2 the
/// reverse, every a_i sees (b1, b2).
inline drawing planar_base(int p) {
    if (p < 1) throw error("planar_base: p must be >= 1");
    drawing d = make_drawing(p, 2);
    std::reverse(d.rot_b[1].begin(), d.rot_b[1].end());
    return d;
}

/// Z(p,q) = floor(p/2) floor((p-1)/2) floor(q/2) floor((q-1)/2).
inline long zarankiewicz_number(int p, int q) {
    return static_cast<long>(p / 2) * ((p - 1) / 2) * (q / 2) * ((q - 1) / 2);
}

/// Builds the Zarankiewicz-style drawing of K_{p,q} by repeated duplication
/// from the planar K_{p,2}, always duplicating a q-side vertex whose star
/// carries the fewest crossings (ties to the lowest index, gap 0). The
/// crossing count Z(p,q) is asserted as the generator's contract.
inline drawing zarankiewicz_drawing(int p, int q) {
    if (p < 1) throw error("zarankiewicz_drawing: p must be >= 1");
    if (q < 2) throw error("zarankiewicz_drawing: q must be >= 2");
    drawing cur = planar_base(p);
    for (int qq = 2; qq < q; ++qq) {
        int best = 0, best_load = INT_MAX;
        for (int j = 0; j < cur.q; ++j) {
            int l = star_load(cur, j);
            if (l < best_load) {
                best_load = l;
                best = j;
            }
        }
        cur = duplicate(cur, {cur.b_names[best], 0, "b" + std::to_string(qq + 1)});
    }
    if (crn(cur) != zarankiewicz_number(p, q))
        throw error("zarankiewicz_drawing: generator contract violated");
    return cur;
}

/// Exhaustive minimum crossing count over combinatorial spherical drawings of
/// the two-vertex m-edge dipole in which both endpoints carry the same
/// clockwise rotation of the edges. Adjacent edges may cross here (every pair
/// of dipole edges is adjacent); each pair still crosses at most once and no
/// edge crosses itself. A spherical scheme is balanced, so its all-positive
/// representative with both rotation words equal is what gets enumerated:
/// crossing-pair sets, per-edge orders and crossing orientations, accepted on
/// chi = 2. Returns the smallest |X| <= max_k found, or nullopt (exhausted).
inline std::optional<int> dipole_min_crossings(int m, int max_k) {
    if (m < 2 || m > 5) throw error("dipole_min_crossings: m must be between 2 and 5");
    if (max_k < 0) throw error("dipole_min_crossings: max_k must be non-negative");

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) pairs.push_back({i, j});
    const int np = static_cast<int>(pairs.size());

    for (int k = 0; k <= max_k; ++k) {
        if (k > np) break;
        std::vector<int> comb(k);
        for (int i = 0; i < k; ++i) comb[i] = i;
        while (true) {
            std::vector<std::vector<int>> order(m);
            for (int t = 0; t < k; ++t) {
                order[pairs[comb[t]].first].push_back(t);
                order[pairs[comb[t]].second].push_back(t);
            }

            auto try_orders = [&](auto&& self, int e) -> bool {
                if (e == m) {
                    scheme_graph g;
                    g.nodes = 2 + k;
                    std::vector<std::vector<int>> esegs(m);
                    for (int ee = 0; ee < m; ++ee) {
                        int prev = 0;
                        for (int t : order[ee]) {
                            esegs[ee].push_back(static_cast<int>(g.segments.size()));
                            g.segments.push_back({prev, 2 + t});
                            prev = 2 + t;
                        }
                        esegs[ee].push_back(static_cast<int>(g.segments.size()));
                        g.segments.push_back({prev, 1});
                    }
                    g.sign.assign(g.segments.size(), 1);
                    g.rotation.assign(g.nodes, {});
                    for (int ee = 0; ee < m; ++ee) g.rotation[0].push_back(esegs[ee].front() * 2);
                    for (int ee = 0; ee < m; ++ee) g.rotation[1].push_back(esegs[ee].back() * 2 + 1);

                    std::vector<std::array<int, 2>> cpos(k, {-1, -1});
                    for (int ee = 0; ee < m; ++ee)
                        for (std::size_t t = 0; t < order[ee].size(); ++t) {
                            auto& cp = cpos[order[ee][t]];
                            (cp[0] < 0 ? cp[0] : cp[1]) = static_cast<int>(t);
                        }
                    for (long bits = 0; bits < (1L << k); ++bits) {
                        for (int t = 0; t < k; ++t) {
                            int pe = pairs[comb[t]].first, qe = pairs[comb[t]].second;
                            int e_lo = esegs[pe][cpos[t][0]] * 2 + 1;
                            int e_hi = esegs[pe][cpos[t][0] + 1] * 2;
                            int f_lo = esegs[qe][cpos[t][1]] * 2 + 1;
                            int f_hi = esegs[qe][cpos[t][1] + 1] * 2;
                            if ((bits >> t) & 1)
                                g.rotation[2 + t] = {e_lo, f_hi, e_hi, f_lo};
                            else
                                g.rotation[2 + t] = {e_lo, f_lo, e_hi, f_hi};
                        }
                        if (trace(g).euler_characteristic == 2) return true;
                    }
                    return false;
                }
                if (order[e].size() < 2) return self(self, e + 1);
                std::sort(order[e].begin(), order[e].end());
                do {
                    if (self(self, e + 1)) return true;
                } while (std::next_permutation(order[e].begin(), order[e].end()));
                return false;
            };
            if (try_orders(try_orders, 0)) return k;

            int t = k - 1;
            while (t >= 0 && comb[t] == np - k + t) --t;
            if (t < 0) break;
            ++comb[t];
            for (int s = t + 1; s < k; ++s) comb[s] = comb[s - 1] + 1;
        }
    }
    return std::nullopt;
}

}  // namespace kpq
