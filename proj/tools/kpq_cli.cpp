// Command-line surface for the K_{p,q} drawing engine: batch generation,
// verification, exhaustive search, genus computation and the reduce/rebuild
// loop. Every command writes one JSON report to standard output with a stable
// field order; drawings and scripts go to files.
//
// Exit codes: 0 success, 1 verification or inequality failure, 2 usage or
// input error, 3 budget exhausted (result unknown).

#include <chrono>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kpq/kpq.hpp"

namespace fs = std::filesystem;
using namespace kpq;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_violation = 1;
constexpr int exit_usage = 2;
constexpr int exit_unknown = 3;

struct reporter {
    ordered_json j;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit reporter(const std::string& command) { j["command"] = command; }

    int finish(const std::string& status, int code) {
        j["status"] = status;
        j["timing_ms"] = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                               std::chrono::steady_clock::now() - t0)
                                               .count());
        std::cout << j.dump(2) << std::endl;
        return code;
    }
};

ordered_json budget_json(const enumeration_budget& b) {
    ordered_json j;
    j["max_crossings"] = b.max_crossings;
    j["timeout_s"] = b.max_seconds;
    j["workers"] = b.workers;
    return j;
}

int cmd_gen(int p, int q, const std::string& out) {
    reporter rep("gen");
    rep.j["inputs"] = {{"p", p}, {"q", q}};
    drawing d = zarankiewicz_drawing(p, q);
    rep.j["headline"] = {{"crossings", crn(d)},
                         {"zarankiewicz", zarankiewicz_number(p, q)},
                         {"realized_surface", realized_surface(d).to_string()}};
    if (!out.empty()) {
        save_drawing(out, d);
        rep.j["outputs"] = {{"drawing", out}};
    } else {
        rep.j["drawing"] = drawing_to_json(d);
    }
    return rep.finish("ok", exit_ok);
}

int cmd_verify(const std::string& path, const std::string& surface_override) {
    reporter rep("verify");
    rep.j["inputs"] = {{"path", path}};
    drawing d = load_drawing(path);
    surface sigma = surface_override.empty() ? d.target : parse_surface(surface_override);
    auto violations = validate_good(d);
    rep.j["violations"] = violations;
    if (!violations.empty()) return rep.finish("violations", exit_violation);

    face_trace t = trace_faces(d);
    surface real = realized_surface(d);
    bool embeds = attachable(real, sigma);
    rep.j["headline"] = {{"crossings", crn(d)},
                         {"euler_characteristic", t.euler_characteristic},
                         {"faces", t.face_count()},
                         {"realized_surface", real.to_string()},
                         {"target_surface", sigma.to_string()},
                         {"embeds_in_target", embeds}};
    return embeds ? rep.finish("ok", exit_ok) : rep.finish("does-not-embed", exit_violation);
}

int cmd_cross(int p, int q, const std::string& surf, const enumeration_budget& budget) {
    reporter rep("cross");
    rep.j["inputs"] = {{"p", p}, {"q", q}, {"surface", surf}};
    rep.j["budget"] = budget_json(budget);
    count_result r = crossing_number(p, q, parse_surface(surf), budget);
    if (!r.value) {
        rep.j["headline"] = {{"crossing_number", "unknown"}};
        return rep.finish("unknown", exit_unknown);
    }
    rep.j["headline"] = {{"crossing_number", *r.value}};
    return rep.finish("ok", exit_ok);
}

int cmd_enum(int p, int q, int k, const std::string& surf, const std::string& out,
             const enumeration_budget& budget) {
    reporter rep("enum");
    rep.j["inputs"] = {{"p", p}, {"q", q}, {"k", k}, {"surface", surf}};
    rep.j["budget"] = budget_json(budget);
    auto t0 = std::chrono::steady_clock::now();
    enumeration_result r = enumerate_good_drawings(p, q, parse_surface(surf), k, budget);
    long elapsed_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                            std::chrono::steady_clock::now() - t0)
                                            .count());
    bool partial = r.status == search_status::budget_exhausted;
    rep.j["headline"] = {{"classes", r.classes.size()}, {"partial", partial}};
    if (!out.empty()) {
        fs::create_directories(out);
        ordered_json manifest;
        manifest["p"] = p;
        manifest["q"] = q;
        manifest["surface"] = surf;
        manifest["counts"] = {{std::to_string(k), r.classes.size()}};
        manifest["budget_status"] = partial ? "exhausted" : "complete";
        manifest["elapsed_ms"] = elapsed_ms;
        ordered_json files = ordered_json::array();
        for (std::size_t i = 0; i < r.classes.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "drawing_%03zu.json", i);
            save_drawing((fs::path(out) / name).string(), r.classes[i]);
            files.push_back(name);
        }
        manifest["files"] = std::move(files);
        write_file((fs::path(out) / "manifest.json").string(), manifest.dump(2) + "\n");
        rep.j["outputs"] = {{"dir", out}, {"manifest", (fs::path(out) / "manifest.json").string()}};
    }
    return partial ? rep.finish("unknown", exit_unknown) : rep.finish("ok", exit_ok);
}

int cmd_genus(int m, int n, bool nonorientable, const enumeration_budget& budget) {
    reporter rep("genus");
    rep.j["inputs"] = {{"m", m}, {"n", n}, {"nonorientable", nonorientable}};
    rep.j["budget"] = budget_json(budget);
    int formula = nonorientable ? kmn_demigenus(m, n) : kmn_genus(m, n);
    int bound = bipartite_euler_bound(m + n, m * n);
    count_result r = genus_search(m, n, nonorientable, budget);
    if (!r.value) {
        rep.j["headline"] = {{"search", "unknown"}, {"formula", formula}};
        return rep.finish("unknown", exit_unknown);
    }
    bool agree = (*r.value == formula);
    rep.j["headline"] = {{"search", *r.value},
                         {"formula", formula},
                         {"euler_genus_bound", bound},
                         {"agree", agree}};
    return agree ? rep.finish("ok", exit_ok) : rep.finish("formula-mismatch", exit_violation);
}

int cmd_reduce(const std::string& path, int floor_q, const std::string& out) {
    reporter rep("reduce");
    rep.j["inputs"] = {{"path", path}, {"floor", floor_q}};
    drawing d = load_drawing(path);
    reduction_trace tr = rebuild_and_compare(d, floor_q);
    rep.j["trace"] = trace_report_to_json(tr);

    ordered_json pair_counts = ordered_json::object();
    ordered_json colors = ordered_json::object();
    for (int u = 0; u < d.q; ++u)
        for (int v = u + 1; v < d.q; ++v) {
            std::string key = d.b_names[u] + "," + d.b_names[v];
            pair_counts[key] = crn_pair_idx(d, u, v);
            color_function f = color_fn(d, d.b_names[u], d.b_names[v]);
            std::string bits;
            for (auto b : f.bits) bits.push_back(b ? '1' : '0');
            colors[key] = bits;
        }
    rep.j["pair_crossings"] = std::move(pair_counts);
    rep.j["pair_colors"] = std::move(colors);

    if (!out.empty()) {
        fs::create_directories(out);
        save_drawing((fs::path(out) / "base.json").string(), tr.base);
        ordered_json outputs = {{"base", (fs::path(out) / "base.json").string()}};
        if (tr.rebuilt) {
            save_drawing((fs::path(out) / "rebuilt.json").string(), *tr.rebuilt);
            outputs["rebuilt"] = (fs::path(out) / "rebuilt.json").string();
        }
        rep.j["outputs"] = std::move(outputs);
    }
    return tr.inequality_ok ? rep.finish("ok", exit_ok)
                            : rep.finish("inequality-violation", exit_violation);
}

int cmd_dipole(int m, int max_k) {
    reporter rep("dipole");
    rep.j["inputs"] = {{"m", m}, {"max_k", max_k}};
    auto r = dipole_min_crossings(m, max_k);
    if (!r) {
        rep.j["headline"] = {{"min_crossings", "exhausted"}};
        return rep.finish("unknown", exit_unknown);
    }
    rep.j["headline"] = {{"min_crossings", *r}};
    return rep.finish("ok", exit_ok);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"combinatorial engine for good drawings of K_{p,q} on surfaces"};
    app.require_subcommand(1);

    int p = 3, q = 3, k = 0, m = 3, n = 3, floor_q = 2, max_k_dipole = 6;
    std::string surf = "S0", out, path;
    bool nonorientable = false;
    enumeration_budget budget;  // 6 crossings, 60 s, 1 worker

    auto add_budget = [&](CLI::App* cmd, bool with_max_k = true) {
        if (with_max_k) cmd->add_option("--max-k", budget.max_crossings, "crossing budget");
        cmd->add_option("--timeout-s", budget.max_seconds, "wall-clock budget in seconds");
        cmd->add_option("--workers", budget.workers, "parallel worker count");
    };

    auto* gen = app.add_subcommand("gen", "Zarankiewicz-style drawing of K_{p,q} by duplication");
    gen->add_option("p", p, "p-side size")->required();
    gen->add_option("q", q, "q-side size")->required();
    gen->add_option("--out", out, "drawing file to write");

    auto* verify = app.add_subcommand("verify", "validate a drawing file and trace its surface");
    verify->add_option("path", path, "drawing file")->required();
    verify->add_option("--surface", surf, "override the file's target surface")->default_val("");

    auto* cross = app.add_subcommand("cross", "exact crossing number by exhaustion");
    cross->add_option("p", p, "p-side size")->required();
    cross->add_option("q", q, "q-side size")->required();
    cross->add_option("--surface", surf, "target surface (S<g> or N<k>)");
    add_budget(cross);

    auto* enm = app.add_subcommand("enum", "enumerate good drawings up to isomorphism");
    enm->add_option("p", p, "p-side size")->required();
    enm->add_option("q", q, "q-side size")->required();
    enm->add_option("k", k, "exact crossing count")->required();
    enm->add_option("--surface", surf, "target surface");
    enm->add_option("--out", out, "directory for drawings plus manifest");
    add_budget(enm, false);

    auto* genus = app.add_subcommand("genus", "exhaustive genus search against the closed formula");
    genus->add_option("m", m, "one side")->required();
    genus->add_option("n", n, "other side")->required();
    genus->add_flag("--nonorientable", nonorientable, "search crosscap number instead");
    add_budget(genus, false);

    auto* reduce = app.add_subcommand("reduce", "delete heavy vertices, rebuild by duplication");
    reduce->add_option("path", path, "drawing file")->required();
    reduce->add_option("--floor", floor_q, "q-side size to reduce down to");
    reduce->add_option("--out", out, "directory for base/rebuilt drawings");

    auto* dipole = app.add_subcommand("dipole", "minimum crossings of the m-edge dipole");
    dipole->add_option("m", m, "edge count (2..5)")->required();
    dipole->add_option("--max-k", max_k_dipole, "largest crossing count to try");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    }

    try {
        if (gen->parsed()) return cmd_gen(p, q, out);
        if (verify->parsed()) return cmd_verify(path, surf);
        if (cross->parsed()) return cmd_cross(p, q, surf, budget);
        if (enm->parsed()) return cmd_enum(p, q, k, surf, out, budget);
        if (genus->parsed()) return cmd_genus(m, n, nonorientable, budget);
        if (reduce->parsed()) return cmd_reduce(path, floor_q, out);
        if (dipole->parsed()) return cmd_dipole(m, max_k_dipole);
    } catch (const std::exception& e) {
        ordered_json j;
        j["status"] = "error";
        j["message"] = e.what();
        std::cout << j.dump(2) << std::endl;
        return exit_usage;
    }
    return exit_usage;
}
