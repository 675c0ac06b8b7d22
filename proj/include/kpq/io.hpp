#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "kpq/drawing.hpp"
#include "kpq/duplication.hpp"
#include "kpq/theorems.hpp"

namespace kpq {

using ordered_json = nlohmann::ordered_json;

/// Canonical JSON form of a drawing. Field and key order is fixed, edges are
/// listed in index order, only edges with crossings appear in edge_orders and
/// only negative signals in signs, so re-serialization is byte-stable.
inline ordered_json drawing_to_json(const drawing& d) {
    ordered_json j;
    j["p"] = d.p;
    j["q"] = d.q;
    j["surface"] = d.target.to_string();
    j["a_names"] = d.a_names;
    j["b_names"] = d.b_names;
    ordered_json crossings = ordered_json::array();
    for (const auto& cr : d.crossings) {
        ordered_json c;
        c["e"] = {d.a_names[cr.e.a], d.b_names[cr.e.b]};
        c["f"] = {d.a_names[cr.f.a], d.b_names[cr.f.b]};
        crossings.push_back(std::move(c));
    }
    j["crossings"] = std::move(crossings);
    ordered_json orders = ordered_json::object();
    for (int i = 0; i < d.p; ++i)
        for (int jj = 0; jj < d.q; ++jj) {
            int e = d.edge_id({i, jj});
            if (!d.edge_order[e].empty()) orders[d.edge_name({i, jj})] = d.edge_order[e];
        }
    j["edge_orders"] = std::move(orders);
    ordered_json rot = ordered_json::object();
    for (int i = 0; i < d.p; ++i) {
        ordered_json lst = ordered_json::array();
        for (int jj : d.rot_a[i]) lst.push_back(d.b_names[jj]);
        rot[d.a_names[i]] = std::move(lst);
    }
    for (int jj = 0; jj < d.q; ++jj) {
        ordered_json lst = ordered_json::array();
        for (int i : d.rot_b[jj]) lst.push_back(d.a_names[i]);
        rot[d.b_names[jj]] = std::move(lst);
    }
    j["rotations"] = std::move(rot);
    j["crossing_orientations"] = d.cross_orient;
    ordered_json signs = ordered_json::object();
    for (int i = 0; i < d.p; ++i)
        for (int jj = 0; jj < d.q; ++jj) {
            int e = d.edge_id({i, jj});
            for (std::size_t t = 0; t < d.seg_signs[e].size(); ++t)
                if (d.seg_signs[e][t] < 0)
                    signs[d.edge_name({i, jj}) + "#" + std::to_string(t)] = -1;
        }
    j["signs"] = std::move(signs);
    return j;
}

inline std::string serialize_drawing(const drawing& d) { return drawing_to_json(d).dump(2) + "\n"; }

namespace detail {

inline std::pair<int, int> parse_edge_name(const drawing& d, const std::string& name) {
    auto dash = name.find('-');
    if (dash == std::string::npos) throw error("bad edge name '" + name + "'");
    int i = d.a_index(name.substr(0, dash));
    int j = d.b_index(name.substr(dash + 1));
    if (i < 0 || j < 0) throw error("edge name '" + name + "' does not match the vertex names");
    return {i, j};
}

}  // namespace detail

inline drawing drawing_from_json(const ordered_json& j) {
    drawing d;
    d.p = j.at("p").get<int>();
    d.q = j.at("q").get<int>();
    if (d.p < 1 || d.q < 1) throw error("drawing file: p, q must be >= 1");
    d.target = parse_surface(j.at("surface").get<std::string>());
    if (j.contains("a_names"))
        d.a_names = j.at("a_names").get<std::vector<std::string>>();
    else
        for (int i = 0; i < d.p; ++i) d.a_names.push_back("a" + std::to_string(i + 1));
    if (j.contains("b_names"))
        d.b_names = j.at("b_names").get<std::vector<std::string>>();
    else
        for (int i = 0; i < d.q; ++i) d.b_names.push_back("b" + std::to_string(i + 1));
    if (static_cast<int>(d.a_names.size()) != d.p || static_cast<int>(d.b_names.size()) != d.q)
        throw error("drawing file: name lists do not match p, q");

    auto vertex_pair = [&](const ordered_json& arr) -> edge_ref {
        if (!arr.is_array() || arr.size() != 2) throw error("drawing file: bad crossing edge");
        int a = d.a_index(arr[0].get<std::string>());
        int b = d.b_index(arr[1].get<std::string>());
        if (a < 0 || b < 0) throw error("drawing file: crossing names unknown");
        return {a, b};
    };
    for (const auto& c : j.at("crossings")) {
        d.crossings.push_back({vertex_pair(c.at("e")), vertex_pair(c.at("f"))});
    }

    d.edge_order.assign(static_cast<std::size_t>(d.p) * d.q, {});
    if (j.contains("edge_orders"))
        for (auto it = j.at("edge_orders").begin(); it != j.at("edge_orders").end(); ++it) {
            auto [i, jj] = detail::parse_edge_name(d, it.key());
            d.edge_order[d.edge_id({i, jj})] = it.value().get<std::vector<int>>();
        }

    const auto& rot = j.at("rotations");
    d.rot_a.resize(d.p);
    d.rot_b.resize(d.q);
    for (int i = 0; i < d.p; ++i) {
        if (!rot.contains(d.a_names[i])) throw error("drawing file: missing rotation " + d.a_names[i]);
        for (const auto& nb : rot.at(d.a_names[i])) {
            int jj = d.b_index(nb.get<std::string>());
            if (jj < 0) throw error("drawing file: unknown neighbor in rotation of " + d.a_names[i]);
            d.rot_a[i].push_back(jj);
        }
    }
    for (int jj = 0; jj < d.q; ++jj) {
        if (!rot.contains(d.b_names[jj]))
            throw error("drawing file: missing rotation " + d.b_names[jj]);
        for (const auto& nb : rot.at(d.b_names[jj])) {
            int i = d.a_index(nb.get<std::string>());
            if (i < 0) throw error("drawing file: unknown neighbor in rotation of " + d.b_names[jj]);
            d.rot_b[jj].push_back(i);
        }
    }

    d.cross_orient.assign(d.crossings.size(), 0);
    if (j.contains("crossing_orientations")) {
        auto bits = j.at("crossing_orientations").get<std::vector<int>>();
        if (bits.size() != d.crossings.size())
            throw error("drawing file: crossing_orientations length mismatch");
        for (std::size_t t = 0; t < bits.size(); ++t) {
            if (bits[t] != 0 && bits[t] != 1) throw error("drawing file: orientation bits are 0/1");
            d.cross_orient[t] = static_cast<std::uint8_t>(bits[t]);
        }
    }

    d.seg_signs.resize(static_cast<std::size_t>(d.p) * d.q);
    for (int e = 0; e < d.edge_count(); ++e)
        d.seg_signs[e].assign(d.edge_order[e].size() + 1, 1);
    if (j.contains("signs"))
        for (auto it = j.at("signs").begin(); it != j.at("signs").end(); ++it) {
            const std::string& key = it.key();
            auto hash = key.find('#');
            if (hash == std::string::npos) throw error("drawing file: bad sign key '" + key + "'");
            auto [i, jj] = detail::parse_edge_name(d, key.substr(0, hash));
            int seg = std::stoi(key.substr(hash + 1));
            int e = d.edge_id({i, jj});
            if (seg < 0 || seg >= static_cast<int>(d.seg_signs[e].size()))
                throw error("drawing file: sign segment out of range in '" + key + "'");
            int v = it.value().get<int>();
            if (v != 1 && v != -1) throw error("drawing file: signs are +-1");
            d.seg_signs[e][seg] = static_cast<std::int8_t>(v);
        }
    return d;
}

inline drawing parse_drawing(const std::string& text) {
    try {
        return drawing_from_json(ordered_json::parse(text));
    } catch (const error&) {
        throw;
    } catch (const std::exception& e) {
        throw error(std::string("drawing file: ") + e.what());
    }
}

inline ordered_json script_to_json(const extension_script& s) {
    ordered_json j;
    j["base"] = drawing_to_json(s.base);
    ordered_json steps = ordered_json::array();
    for (const auto& st : s.steps) {
        ordered_json one;
        one["target"] = st.target;
        one["gap"] = st.gap;
        one["name"] = st.new_name;
        steps.push_back(std::move(one));
    }
    j["steps"] = std::move(steps);
    return j;
}

inline extension_script script_from_json(const ordered_json& j) {
    extension_script s;
    s.base = drawing_from_json(j.at("base"));
    for (const auto& st : j.at("steps"))
        s.steps.push_back({st.at("target").get<std::string>(), st.at("gap").get<int>(),
                           st.at("name").get<std::string>()});
    return s;
}

inline ordered_json trace_report_to_json(const reduction_trace& tr) {
    ordered_json j;
    j["crn_original"] = tr.crn_original;
    j["crn_base"] = tr.crn_base;
    j["reached_floor"] = tr.reached_floor;
    ordered_json dels = ordered_json::array();
    for (const auto& rec : tr.deleted) {
        ordered_json one;
        one["u"] = rec.u;
        one["v"] = rec.v;
        one["crn_pair"] = rec.pair_crossings;
        one["crn_after"] = rec.crn_after;
        dels.push_back(std::move(one));
    }
    j["deletions"] = std::move(dels);
    if (tr.rebuilt) {
        j["crn_rebuilt"] = tr.crn_rebuilt;
        j["verdict"] = tr.inequality_ok ? "ok" : "violation";
    }
    return j;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write '" + path + "'");
    out << content;
    if (!out) throw error("write to '" + path + "' failed");
}

inline drawing load_drawing(const std::string& path) { return parse_drawing(read_file(path)); }
inline void save_drawing(const std::string& path, const drawing& d) {
    write_file(path, serialize_drawing(d));
}

}  // namespace kpq
