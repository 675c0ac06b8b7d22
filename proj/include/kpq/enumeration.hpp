#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>
#include <vector>

#include "kpq/canonical.hpp"
#include "kpq/drawing.hpp"
#include "kpq/face_trace.hpp"

namespace kpq {

struct enumeration_budget {
    int max_crossings = 6;
    double max_seconds = 60.0;
    int workers = 1;
};

enum class search_status { complete, budget_exhausted };

struct count_result {
    std::optional<int> value;
    search_status status = search_status::complete;
};

/// A crossing set together with the per-edge crossing orders: what remains of
/// a drawing after forgetting rotations, orientations and signals.
struct crossing_config {
    std::vector<crossing_pair> crossings;
    std::vector<std::vector<int>> edge_order;  // p*q entries, ids into crossings
};

/// Streams every set of k unordered independent edge pairs (goodness i and ii
/// baked in), each with every interleaving of the per-edge crossing orders.
/// The callback returns false to stop; the function returns false if stopped.
inline bool enumerate_crossing_configs(int p, int q, int k,
                                       const std::function<bool(const crossing_config&)>& cb) {
    if (k < 0) throw error("enumerate_crossing_configs: k must be >= 0");
    std::vector<crossing_pair> pairs;
    for (int e = 0; e < p * q; ++e) {
        for (int f = e + 1; f < p * q; ++f) {
            edge_ref ee{e / q, e % q}, ff{f / q, f % q};
            if (ee.a != ff.a && ee.b != ff.b) pairs.push_back(make_crossing(ee, ff));
        }
    }
    const int np = static_cast<int>(pairs.size());
    if (k > np) return true;

    crossing_config cfg;
    cfg.edge_order.assign(static_cast<std::size_t>(p) * q, {});
    std::vector<int> comb(k);
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
        cfg.crossings.clear();
        for (int t : comb) cfg.crossings.push_back(pairs[t]);
        for (auto& v : cfg.edge_order) v.clear();
        std::vector<int> touched;
        for (int t = 0; t < k; ++t) {
            int eid = cfg.crossings[t].e.a * q + cfg.crossings[t].e.b;
            int fid = cfg.crossings[t].f.a * q + cfg.crossings[t].f.b;
            cfg.edge_order[eid].push_back(t);
            cfg.edge_order[fid].push_back(t);
            touched.push_back(eid);
            touched.push_back(fid);
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        std::vector<int> multi;
        for (int e : touched)
            if (cfg.edge_order[e].size() > 1) multi.push_back(e);

        auto rec = [&](auto&& self, std::size_t at) -> bool {
            if (at == multi.size()) return cb(cfg);
            auto& ord = cfg.edge_order[multi[at]];
            std::sort(ord.begin(), ord.end());
            do {
                if (!self(self, at + 1)) return false;
            } while (std::next_permutation(ord.begin(), ord.end()));
            return true;
        };
        if (!rec(rec, 0)) return false;

        if (k == 0) break;
        int t = k - 1;
        while (t >= 0 && comb[t] == np - k + t) --t;
        if (t < 0) break;
        ++comb[t];
        for (int s = t + 1; s < k; ++s) comb[s] = comb[s - 1] + 1;
    }
    return true;
}

/// Rotations, crossing orientations and a signal assignment for a flattening.
/// Handed to scheme callbacks by reference; copy to retain.
struct scheme_assignment {
    std::vector<std::vector<int>> rot_a;
    std::vector<std::vector<int>> rot_b;
    std::vector<std::uint8_t> bits;
    std::vector<std::vector<std::int8_t>> seg_signs;
};

enum class pin_mode { none, first_q, max_degree };

namespace detail {

/// Cotree segments of the flattening under a BFS spanning tree, as
/// (edge, segment position) pairs. Tree segments stay +1 after switching
/// normalization; only cotree signals are worth enumerating.
inline std::vector<std::pair<int, int>> cotree_positions(const flattening& fl) {
    std::vector<std::vector<std::pair<int, int>>> adj(fl.vertices);  // (node, seg)
    for (std::size_t s = 0; s < fl.segments.size(); ++s) {
        adj[fl.segments[s].first].push_back({fl.segments[s].second, static_cast<int>(s)});
        adj[fl.segments[s].second].push_back({fl.segments[s].first, static_cast<int>(s)});
    }
    std::vector<char> seen(fl.vertices, 0);
    std::vector<char> in_tree(fl.segments.size(), 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h)
        for (auto [y, s] : adj[queue[h]])
            if (!seen[y]) {
                seen[y] = 1;
                in_tree[s] = 1;
                queue.push_back(y);
            }
    std::vector<std::pair<int, int>> out;
    for (std::size_t e = 0; e < fl.edge_segments.size(); ++e)
        for (std::size_t t = 0; t < fl.edge_segments[e].size(); ++t)
            if (!in_tree[fl.edge_segments[e][t]]) out.push_back({static_cast<int>(e), static_cast<int>(t)});
    return out;
}

}  // namespace detail

/// Streams every embedding scheme of the flattening: all rotation systems at
/// the real vertices (one vertex's rotation may be pinned to soak up a
/// relabeling factor), both alternation classes per crossing, and -- unless
/// orientable_only -- every cotree signal pattern after spanning-tree
/// normalization. Callback returns false to stop early.
inline bool enumerate_schemes(const flattening& fl, bool orientable_only, pin_mode pin,
                              const std::function<bool(const scheme_assignment&)>& cb) {
    const int p = fl.p, q = fl.q, k = fl.crossing_count;

    scheme_assignment s;
    s.rot_a.resize(p);
    s.rot_b.resize(q);
    for (int i = 0; i < p; ++i) {
        s.rot_a[i].resize(q);
        std::iota(s.rot_a[i].begin(), s.rot_a[i].end(), 0);
    }
    for (int j = 0; j < q; ++j) {
        s.rot_b[j].resize(p);
        std::iota(s.rot_b[j].begin(), s.rot_b[j].end(), 0);
    }
    s.bits.assign(k, 0);
    s.seg_signs.resize(fl.edge_segments.size());
    for (std::size_t e = 0; e < fl.edge_segments.size(); ++e)
        s.seg_signs[e].assign(fl.edge_segments[e].size(), 1);

    int pin_a = -1, pin_b = -1;
    if (pin == pin_mode::first_q)
        pin_b = 0;
    else if (pin == pin_mode::max_degree)
        (q >= p ? pin_a : pin_b) = 0;

    std::vector<std::pair<int, int>> cotree;
    if (!orientable_only) {
        cotree = detail::cotree_positions(fl);
        if (cotree.size() > 24) throw error("enumerate_schemes: signal space too large");
    }
    if (k > 24) throw error("enumerate_schemes: too many crossings");

    auto emit = [&]() -> bool {
        for (long bm = 0; bm < (1L << k); ++bm) {
            for (int t = 0; t < k; ++t) s.bits[t] = static_cast<std::uint8_t>((bm >> t) & 1);
            if (orientable_only) {
                if (!cb(s)) return false;
            } else {
                for (long sm = 0; sm < (1L << cotree.size()); ++sm) {
                    for (std::size_t t = 0; t < cotree.size(); ++t)
                        s.seg_signs[cotree[t].first][cotree[t].second] =
                            ((sm >> t) & 1) ? -1 : 1;
                    if (!cb(s)) return false;
                }
            }
        }
        return true;
    };

    // Rotations as sequences with the first neighbor fixed: cyclic orders,
    // not their rotations, are what gets enumerated.
    auto rec = [&](auto&& self, int v) -> bool {
        if (v == p + q) return emit();
        bool is_a = v < p;
        int idx = is_a ? v : v - p;
        if ((is_a && idx == pin_a) || (!is_a && idx == pin_b)) return self(self, v + 1);
        auto& rot = is_a ? s.rot_a[idx] : s.rot_b[idx];
        if (rot.size() < 3) return self(self, v + 1);
        std::sort(rot.begin() + 1, rot.end());
        do {
            if (!self(self, v + 1)) return false;
        } while (std::next_permutation(rot.begin() + 1, rot.end()));
        std::sort(rot.begin() + 1, rot.end());
        return true;
    };
    return rec(rec, 0);
}

namespace detail {

inline std::string config_key(int p, int q, const crossing_config& cfg, const std::vector<int>& sa,
                              const std::vector<int>& sb) {
    const int nx = static_cast<int>(cfg.crossings.size());
    std::vector<crossing_pair> relabeled(nx);
    std::vector<int> order(nx), rank(nx);
    for (int t = 0; t < nx; ++t) {
        const auto& cr = cfg.crossings[t];
        relabeled[t] =
            make_crossing({sa[cr.e.a], sb[cr.e.b]}, {sa[cr.f.a], sb[cr.f.b]});
        order[t] = t;
    }
    std::sort(order.begin(), order.end(), [&](int x, int y) { return relabeled[x] < relabeled[y]; });
    for (int r = 0; r < nx; ++r) rank[order[r]] = r;

    std::vector<int> inv_a(p), inv_b(q);
    for (int i = 0; i < p; ++i) inv_a[sa[i]] = i;
    for (int j = 0; j < q; ++j) inv_b[sb[j]] = j;

    std::string out;
    for (int r = 0; r < nx; ++r) {
        const auto& cr = relabeled[order[r]];
        out.push_back(static_cast<char>(cr.e.a));
        out.push_back(static_cast<char>(cr.e.b));
        out.push_back(static_cast<char>(cr.f.a));
        out.push_back(static_cast<char>(cr.f.b));
    }
    for (int na = 0; na < p; ++na)
        for (int nb = 0; nb < q; ++nb) {
            const auto& ord = cfg.edge_order[inv_a[na] * q + inv_b[nb]];
            out.push_back(static_cast<char>(ord.size()));
            for (int c : ord) out.push_back(static_cast<char>(rank[c]));
        }
    return out;
}

/// A config survives iff it is the lexicographic minimum of its orbit under
/// side-preserving relabelings. One representative per orbit survives.
inline bool config_is_canonical(int p, int q, const crossing_config& cfg) {
    std::vector<int> sa(p), sb(q);
    std::iota(sa.begin(), sa.end(), 0);
    std::iota(sb.begin(), sb.end(), 0);
    std::string id_key = config_key(p, q, cfg, sa, sb);
    std::vector<int> pa(sa), pb(sb);
    do {
        do {
            if (config_key(p, q, cfg, pa, pb) < id_key) return false;
        } while (std::next_permutation(pb.begin(), pb.end()));
    } while (std::next_permutation(pa.begin(), pa.end()));
    return true;
}

}  // namespace detail

/// The configs that survive the symmetry quotient: one lexicographically
/// minimal representative per orbit under side-preserving relabelings.
inline std::vector<crossing_config> canonical_crossing_configs(int p, int q, int k) {
    std::vector<crossing_config> out;
    enumerate_crossing_configs(p, q, k, [&](const crossing_config& cfg) {
        if (detail::config_is_canonical(p, q, cfg)) out.push_back(cfg);
        return true;
    });
    return out;
}

namespace detail {

using clock_type = std::chrono::steady_clock;

struct deadline {
    clock_type::time_point at;
    bool expired() const { return clock_type::now() >= at; }
};

inline deadline make_deadline(double seconds) {
    return {clock_type::now() + std::chrono::duration_cast<clock_type::duration>(
                                    std::chrono::duration<double>(seconds))};
}

}  // namespace detail

/// Builds a full drawing out of a config and a scheme assignment.
inline drawing assemble_drawing(int p, int q, const surface& target, const crossing_config& cfg,
                                const scheme_assignment& s) {
    drawing d = make_drawing(p, q, target);
    d.crossings = cfg.crossings;
    d.edge_order = cfg.edge_order;
    d.rot_a = s.rot_a;
    d.rot_b = s.rot_b;
    d.cross_orient = s.bits;
    d.seg_signs = s.seg_signs;
    return d;
}

/// Exact crossing number of K_{p,q} in sigma by exhaustion: smallest k within
/// the budget for which some config plus scheme realizes a drawing embeddable
/// in sigma. Search runs k ascending, configs quotiented by side relabelings,
/// schemes unpinned (pinning is only sound without the config quotient).
inline count_result crossing_number(int p, int q, const surface& sigma,
                                    const enumeration_budget& budget = {}) {
    if (p < 1 || q < 1) throw error("crossing_number: p, q must be >= 1");
    auto dl = detail::make_deadline(budget.max_seconds);
    const bool orientable_only = sigma.orientable;

    for (int k = 0; k <= budget.max_crossings; ++k) {
        auto configs = canonical_crossing_configs(p, q, k);
        std::atomic<bool> found{false};
        std::atomic<bool> out_of_time{false};
        std::atomic<std::size_t> next{0};

        auto work = [&]() {
            std::size_t i;
            scheme_graph g;
            while (!found.load(std::memory_order_relaxed) &&
                   !out_of_time.load(std::memory_order_relaxed) &&
                   (i = next.fetch_add(1)) < configs.size()) {
                if (dl.expired()) {
                    out_of_time.store(true, std::memory_order_relaxed);
                    break;
                }
                const auto& cfg = configs[i];
                flattening fl = make_flattening(p, q, cfg.crossings, cfg.edge_order);
                long counter = 0;
                enumerate_schemes(
                    fl, orientable_only, k == 0 ? pin_mode::max_degree : pin_mode::none,
                    [&](const scheme_assignment& s) {
                        if ((++counter & 1023) == 0) {
                            if (dl.expired()) {
                                out_of_time.store(true, std::memory_order_relaxed);
                                return false;
                            }
                            if (found.load(std::memory_order_relaxed)) return false;
                        }
                        fill_scheme_graph(g, fl, cfg.crossings, cfg.edge_order, s.rot_a, s.rot_b,
                                          s.bits, s.seg_signs);
                        face_trace t = trace(g);
                        surface real = t.realized_orientable
                                           ? make_surface(true, (2 - t.euler_characteristic) / 2)
                                           : make_surface(false, 2 - t.euler_characteristic);
                        if (attachable(real, sigma)) {
                            found.store(true, std::memory_order_relaxed);
                            return false;
                        }
                        return true;
                    });
            }
        };

        int n_workers = std::max(1, budget.workers);
        if (n_workers == 1 || configs.size() <= 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
            for (auto& th : pool) th.join();
        }
        if (found.load()) return {k, search_status::complete};
        if (out_of_time.load() || dl.expired()) return {std::nullopt, search_status::budget_exhausted};
    }
    return {std::nullopt, search_status::budget_exhausted};
}

struct enumeration_result {
    std::vector<drawing> classes;  // sorted by canonical key
    search_status status = search_status::complete;
};

/// One representative drawing per canonical key among drawings of K_{p,q}
/// with exactly k crossings that embed in sigma. Deterministic: results are
/// reduced by sorting on the canonical key, so the outcome is independent of
/// worker count and traversal order. max_classes truncation requires a single
/// worker (the cut would otherwise depend on scheduling).
inline enumeration_result enumerate_good_drawings(int p, int q, const surface& sigma, int k,
                                                  const enumeration_budget& budget = {},
                                                  std::size_t max_classes = SIZE_MAX) {
    if (max_classes != SIZE_MAX && budget.workers > 1)
        throw error("enumerate_good_drawings: max_classes needs workers == 1");
    auto dl = detail::make_deadline(budget.max_seconds);
    const bool orientable_only = sigma.orientable;
    auto configs = canonical_crossing_configs(p, q, k);

    std::map<std::string, drawing> classes;
    std::mutex mtx;
    std::atomic<bool> out_of_time{false};
    std::atomic<bool> enough{false};
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        std::size_t i;
        scheme_graph g;
        while (!out_of_time.load(std::memory_order_relaxed) &&
               !enough.load(std::memory_order_relaxed) && (i = next.fetch_add(1)) < configs.size()) {
            if (dl.expired()) {
                out_of_time.store(true, std::memory_order_relaxed);
                break;
            }
            const auto& cfg = configs[i];
            flattening fl = make_flattening(p, q, cfg.crossings, cfg.edge_order);
            long counter = 0;
            enumerate_schemes(fl, orientable_only, pin_mode::none, [&](const scheme_assignment& s) {
                if ((++counter & 1023) == 0 && dl.expired()) {
                    out_of_time.store(true, std::memory_order_relaxed);
                    return false;
                }
                fill_scheme_graph(g, fl, cfg.crossings, cfg.edge_order, s.rot_a, s.rot_b, s.bits,
                                  s.seg_signs);
                face_trace t = trace(g);
                surface real = t.realized_orientable
                                   ? make_surface(true, (2 - t.euler_characteristic) / 2)
                                   : make_surface(false, 2 - t.euler_characteristic);
                if (!attachable(real, sigma)) return true;
                drawing d = assemble_drawing(p, q, sigma, cfg, s);
                std::string key = canonical_form(d);
                std::lock_guard<std::mutex> lock(mtx);
                classes.emplace(std::move(key), std::move(d));
                if (classes.size() >= max_classes) {
                    enough.store(true, std::memory_order_relaxed);
                    return false;
                }
                return true;
            });
        }
    };

    int n_workers = std::max(1, budget.workers);
    if (n_workers == 1 || configs.size() <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    enumeration_result out;
    out.status = out_of_time.load() ? search_status::budget_exhausted : search_status::complete;
    for (auto& [key, d] : classes) out.classes.push_back(std::move(d));
    return out;
}

/// Minimum genus (orientable) or crosscap number (non-orientable) of K_{m,n}
/// by exhausting embedding schemes of the graph itself. For the non-orientable
/// answer, orientable schemes still count through a crosscap attachment
/// (demigenus <= 2 genus + 1), matching the attachability relation.
inline count_result genus_search(int m, int n, bool non_orientable,
                                 const enumeration_budget& budget = {}) {
    if (m < 2 || n < 2) throw error("genus_search: m, n must be >= 2");
    if (non_orientable && (m < 3 || n < 3))
        throw error("genus_search: demigenus search needs m, n >= 3");
    auto dl = detail::make_deadline(budget.max_seconds);

    crossing_config empty;
    empty.edge_order.assign(static_cast<std::size_t>(m) * n, {});
    flattening fl = make_flattening(m, n, {}, empty.edge_order);

    const int eg_bound = bipartite_euler_bound(m + n, m * n);
    int floor_value = non_orientable ? std::max(eg_bound, 1) : (eg_bound + 1) / 2;

    std::optional<int> best;
    bool timed_out = false;
    scheme_graph g;
    long counter = 0;
    enumerate_schemes(fl, !non_orientable, pin_mode::max_degree, [&](const scheme_assignment& s) {
        if ((++counter & 1023) == 0 && dl.expired()) {
            timed_out = true;
            return false;
        }
        fill_scheme_graph(g, fl, empty.crossings, empty.edge_order, s.rot_a, s.rot_b, s.bits,
                          s.seg_signs);
        face_trace t = trace(g);
        int value;
        if (non_orientable)
            value = (2 - t.euler_characteristic) + (t.realized_orientable ? 1 : 0);
        else
            value = (2 - t.euler_characteristic) / 2;
        if (!best || value < *best) best = value;
        if (best && *best <= floor_value) return false;  // cannot improve further
        return true;
    });

    if (timed_out && !(best && *best <= floor_value))
        return {std::nullopt, search_status::budget_exhausted};
    return {best, search_status::complete};
}

}  // namespace kpq
