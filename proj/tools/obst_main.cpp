// obst: command-line front end for the OBST(k) simulator.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "obst/experiment.hpp"
#include "obst/overlay.hpp"
#include "obst/rng.hpp"
#include "obst/static_opt.hpp"
#include "obst/workload.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw obst::InputError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw obst::InputError("cannot write '" + path + "'");
    out << text;
}

// Flags shared by subcommands that build a workload.
struct WorkloadFlags {
    std::string guest = "rnd";
    std::string seq = "match";
    std::string edge_list;
    std::string requests;  // read sigma from a file instead of generating it
    int n = 64;
    std::int64_t m = 0;
    int guest_k = 16;
    std::uint64_t seed = 1;

    void add(CLI::App* app) {
        app->add_option("--guest", guest, "bt | edgelist | rnd | bad2");
        app->add_option("--seq", seq, "match | rw-<x> | uniform");
        app->add_option("--edge-list", edge_list, "edge list for --guest edgelist");
        app->add_option("--requests", requests, "request CSV to use instead of a generator");
        app->add_option("-n,--n", n, "peers");
        app->add_option("-m,--m", m, "requests (0 = n^2, capped at 1e6)");
        app->add_option("--guest-k", guest_k, "trees in the Rnd(k) guest");
        app->add_option("--seed", seed, "master seed");
    }

    obst::ExperimentConfig config() const {
        obst::ExperimentConfig c;
        c.guest = guest;
        c.edge_list_path = edge_list;
        c.n_values = {n};
        c.sequences = {seq};
        c.m = m;
        c.guest_k = guest_k;
        c.seed = seed;
        return c;
    }

    obst::RequestSequence sequence(obst::GuestGraph* guest_out = nullptr) const {
        if (!requests.empty()) return obst::read_requests(slurp(requests));
        const obst::ExperimentConfig c = config();
        obst::validate(c);
        const std::uint64_t rs = obst::replica_seed(c, 0);
        obst::GuestGraph g = obst::make_guest(c, n, obst::derive_seed(rs, obst::seed_stream::kGuest, n));
        auto sigma = obst::make_sequence(c, g, n, seq, obst::requests_for(c, n),
                                         obst::derive_seed(rs, obst::seed_stream::kSequence, static_cast<std::uint64_t>(n) * 64));
        if (guest_out) *guest_out = std::move(g);
        return sigma;
    }
};

int cmd_run(const std::string& preset, const std::string& config_path, const nlohmann::json& overrides,
            const std::string& output, bool list) {
    if (list) {
        for (const auto& p : obst::preset_names()) std::cout << p << '\n';
        return kExitOk;
    }
    obst::ExperimentConfig c;
    if (!preset.empty()) c = obst::preset(preset);
    if (!config_path.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(slurp(config_path));
        } catch (const nlohmann::json::parse_error& e) {
            throw obst::InputError(config_path + ": " + e.what());
        }
        c = obst::config_from_json(j, c);
    }
    c = obst::config_from_json(overrides, c);
    const obst::ScenarioResult r = obst::run_scenario(c);
    const std::string prefix = output.empty() ? c.scenario : output;
    obst::write_scenario(r, prefix);
    std::cerr << "wrote " << prefix << ".csv (" << r.metadata["rows"].get<long>() << " rows) and " << prefix
              << ".json in " << r.metadata["wall_seconds"].get<double>() << " s\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OBST(k) self-adjusting overlay simulator"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a preset or configured scenario");
    std::string preset;
    std::string config_path;
    std::string output;
    bool list_presets = false;
    std::vector<int> o_n;
    std::vector<int> o_k;
    std::vector<int> o_lambda;
    std::vector<std::string> o_seq;
    std::string o_guest;
    std::string o_edge_list;
    std::string o_measure;
    std::int64_t o_m = -1;
    std::int64_t o_max = -1;
    int o_replicas = -1;
    int o_threads = -1;
    int o_windows = -1;
    int o_adjust_every = -1;
    std::uint64_t o_seed = 0;
    bool o_static = false;
    run->add_option("--preset", preset, "fig3 ... fig10");
    run->add_option("--config", config_path, "flat JSON config");
    run->add_option("-o,--output", output, "output prefix (default: scenario name)");
    run->add_flag("--list", list_presets, "list presets");
    run->add_option("--n", o_n, "peer counts");
    run->add_option("--k", o_k, "tree counts");
    run->add_option("--lambda", o_lambda, "churn rates");
    run->add_option("--seq", o_seq, "sequence generators");
    run->add_option("--guest", o_guest, "bt | edgelist | rnd | bad2");
    run->add_option("--edge-list", o_edge_list, "edge list path");
    run->add_option("--measure", o_measure, "cost | trace | topology | robustness");
    run->add_option("--m", o_m, "requests per run (0 = n^2)");
    run->add_option("--max-requests", o_max, "cap on requests per run");
    run->add_option("--replicas", o_replicas, "replicas");
    run->add_option("--threads", o_threads, "replicas run concurrently");
    run->add_option("--windows", o_windows, "trace/topology windows");
    run->add_option("--adjust-every", o_adjust_every, "adjust on every j-th request");
    auto* seed_opt = run->add_option("--seed", o_seed, "master seed");
    run->add_flag("--static", o_static, "never adjust");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "entropy bounds and static OBST(k) cost for a workload");
    WorkloadFlags bw;
    bw.add(bounds);
    std::vector<int> b_k{1};
    bool b_csv = false;
    bool b_symmetric = false;
    bounds->add_option("--k", b_k, "tree counts");
    bounds->add_flag("--csv", b_csv, "CSV rows instead of JSON");
    bounds->add_flag("--symmetric", b_symmetric, "merge (u,v) with (v,u) before partitioning");

    // validate
    auto* val = app.add_subcommand("validate", "check every invariant of a snapshot");
    std::string v_snapshot;
    val->add_option("snapshot", v_snapshot, "snapshot file")->required();

    // dump-tree
    auto* dump = app.add_subcommand("dump-tree", "print one tree in pre-order");
    std::string d_snapshot;
    int d_tree = 0;
    int d_n = 0;
    std::uint64_t d_seed = 1;
    dump->add_option("--snapshot", d_snapshot, "snapshot file");
    dump->add_option("--tree", d_tree, "0-based tree index");
    dump->add_option("--random", d_n, "dump a fresh random BST over 1..n instead");
    dump->add_option("--seed", d_seed, "seed for --random");

    // snapshot
    auto* snap = app.add_subcommand("snapshot", "build an overlay, optionally serve requests, write a snapshot");
    WorkloadFlags sw;
    sw.m = -1;
    sw.add(snap);
    int s_k = 1;
    std::string s_out;
    snap->add_option("--k", s_k, "trees");
    snap->add_option("-o,--out", s_out, "snapshot file (default stdout)");

    // load
    auto* load = app.add_subcommand("load", "read a snapshot, optionally serve requests, report or rewrite it");
    std::string l_snapshot;
    std::string l_requests;
    std::string l_out;
    bool l_static = false;
    load->add_option("snapshot", l_snapshot, "snapshot file")->required();
    load->add_option("--requests", l_requests, "request CSV to serve");
    load->add_flag("--static", l_static, "serve without adjusting");
    load->add_option("-o,--out", l_out, "write the resulting snapshot");

    // gen-workload
    auto* gen = app.add_subcommand("gen-workload", "write a request sequence (and optionally the guest graph)");
    WorkloadFlags gw;
    gw.add(gen);
    std::string g_out;
    std::string g_edges;
    gen->add_option("-o,--out", g_out, "request CSV (default stdout)");
    gen->add_option("--edges-out", g_edges, "write the guest edge list");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            nlohmann::json ov = nlohmann::json::object();
            if (!o_n.empty()) ov["n"] = o_n;
            if (!o_k.empty()) ov["k"] = o_k;
            if (!o_lambda.empty()) ov["lambda"] = o_lambda;
            if (!o_seq.empty()) ov["sequences"] = o_seq;
            if (!o_guest.empty()) ov["guest"] = o_guest;
            if (!o_edge_list.empty()) ov["edge_list"] = o_edge_list;
            if (!o_measure.empty()) ov["measure"] = o_measure;
            if (o_m >= 0) ov["m"] = o_m;
            if (o_max >= 0) ov["max_requests"] = o_max;
            if (o_replicas >= 0) ov["replicas"] = o_replicas;
            if (o_threads >= 0) ov["threads"] = o_threads;
            if (o_windows >= 0) ov["windows"] = o_windows;
            if (o_adjust_every >= 0) ov["adjust_every"] = o_adjust_every;
            if (seed_opt->count() > 0) ov["seed"] = o_seed;
            if (o_static) ov["adjust"] = false;
            return cmd_run(preset, config_path, ov, output, list_presets);
        }
        if (*bounds) {
            const obst::RequestSequence sigma = bw.sequence();
            obst::PeerId n = bw.n;
            for (const auto& r : sigma) n = std::max({n, r.source, r.dest});
            obst::PartitionOptions popt;
            popt.symmetric = b_symmetric;
            if (b_csv) {
                std::cout << "k,h_x,h_y,h_z,h_alpha,lookup_lower,balanced_upper,single_tree_upper,k_tree_upper,"
                             "static_distance,static_cost\n";
            }
            for (int k : b_k) {
                const obst::StaticObst so = obst::build_static_obst(sigma, n, k, popt);
                const obst::BoundReport rep = obst::bound_report(sigma, n, so.partition);
                obst::Overlay o = so.overlay;
                const obst::CostLedger ledger = o.run(sigma, obst::RunOptions{false, 1, 0});
                if (b_csv) {
                    std::cout << k << ',' << rep.h_x << ',' << rep.h_y << ',' << rep.h_z << ',' << rep.h_alpha << ','
                              << rep.lookup_lower << ',' << rep.balanced_upper << ',' << rep.single_tree_upper << ','
                              << rep.k_tree_upper << ',' << ledger.average_distance() << ',' << ledger.average_cost()
                              << '\n';
                } else {
                    auto j = nlohmann::ordered_json::parse(obst::to_json(rep));
                    j["static_distance"] = ledger.average_distance();
                    j["static_cost"] = ledger.average_cost();
                    j["partition_exact"] = so.partition.exact;
                    std::cout << j.dump(2) << '\n';
                }
            }
            return kExitOk;
        }
        if (*val) {
            const std::string text = slurp(v_snapshot);
            try {
                const obst::Overlay o = obst::Overlay::parse_snapshot(text);
                std::cout << "ok: " << o.n() << " peers, " << o.k() << " trees\n";
                return kExitOk;
            } catch (const obst::Error& e) {
                // structural damage (two parents, missing nodes) counts as a violation too
                std::cout << "violation: " << e.what() << '\n';
                return kExitInvariant;
            }
        }
        if (*dump) {
            if (d_n > 0) {
                std::cout << obst::Bst::random(d_n, d_seed).serialize();
                return kExitOk;
            }
            if (d_snapshot.empty()) throw obst::InputError("dump-tree needs --snapshot or --random");
            const obst::Overlay o = obst::Overlay::parse_snapshot(slurp(d_snapshot));
            if (d_tree < 0 || d_tree >= o.k()) throw obst::InputError("--tree out of range [0, " + std::to_string(o.k()) + ")");
            std::cout << o.tree(d_tree).serialize();
            return kExitOk;
        }
        if (*snap) {
            obst::Overlay o = obst::Overlay::new_random(sw.n, s_k, sw.seed);
            // Requests are only served when asked for explicitly.
            if (!sw.requests.empty() || sw.m >= 0) {
                const obst::RequestSequence sigma = sw.sequence();
                o.run(sigma, obst::RunOptions{});
            }
            spit(s_out, o.snapshot());
            return kExitOk;
        }
        if (*load) {
            obst::Overlay o = [&] {
                try {
                    return obst::Overlay::parse_snapshot(slurp(l_snapshot));
                } catch (const obst::InvariantViolation& e) {
                    std::cout << "violation: " << e.what() << '\n';
                    throw;
                }
            }();
            if (!l_requests.empty()) {
                const auto sigma = obst::read_requests(slurp(l_requests));
                const auto ledger = o.run(sigma, obst::RunOptions{!l_static, 1, 0});
                std::cerr << "served " << ledger.size() << " requests, avg distance " << ledger.average_distance()
                          << ", avg cost " << ledger.average_cost() << '\n';
            }
            if (!l_out.empty()) {
                spit(l_out, o.snapshot());
            } else {
                std::cout << "peers " << o.n() << "\ntrees " << o.k() << '\n';
                for (int i = 0; i < o.k(); ++i) std::cout << "tree " << i << " height " << o.tree(i).height() << '\n';
                std::cout << "union_edges " << o.union_graph().edge_count() << '\n';
            }
            return kExitOk;
        }
        if (*gen) {
            obst::GuestGraph g;
            const obst::RequestSequence sigma = gw.sequence(&g);
            if (!g_edges.empty()) {
                std::string text;
                for (const auto& e : g.edges()) text += std::to_string(e.a) + ' ' + std::to_string(e.b) + '\n';
                spit(g_edges, text);
            }
            spit(g_out, obst::write_requests(sigma));
            return kExitOk;
        }
    } catch (const obst::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}
