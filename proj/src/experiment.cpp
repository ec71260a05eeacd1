#include "obst/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "obst/metrics.hpp"
#include "obst/overlay.hpp"
#include "obst/rng.hpp"

namespace obst {

namespace {

const char* measure_name(Measure m) {
    switch (m) {
        case Measure::kCost: return "cost";
        case Measure::kTrace: return "trace";
        case Measure::kTopology: return "topology";
        case Measure::kRobustness: return "robustness";
    }
    return "cost";
}

Measure parse_measure(const std::string& s) {
    if (s == "cost") return Measure::kCost;
    if (s == "trace") return Measure::kTrace;
    if (s == "topology") return Measure::kTopology;
    if (s == "robustness") return Measure::kRobustness;
    throw InputError("measure: unknown value '" + s + "' (cost|trace|topology|robustness)");
}

// Fixed formatting keeps the CSV byte-stable.
std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

// "rw-<x>" advances the walk with probability x, so p_repeat = 1 - x.
// Returns -1 for other names.
double rw_repeat(std::string_view s) {
    if (s.rfind("rw-", 0) != 0) return -1.0;
    const std::string num(s.substr(3));
    char* end = nullptr;
    const double p = std::strtod(num.c_str(), &end);
    if (num.empty() || end != num.c_str() + num.size() || !(p >= 0.0 && p <= 1.0)) {
        throw InputError("sequence '" + std::string(s) + "': expected rw-<x> with x in [0, 1]");
    }
    return 1.0 - p;
}

template <class T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("config key '") + key + "': " + e.what());
    }
}

struct Cell {
    int n = 0;
    int k = 0;
    int lambda = 0;
    std::size_t seq = 0;
};

std::string cell_prefix(const ExperimentConfig& c, const Cell& cell, int replica, std::uint64_t seed) {
    std::ostringstream os;
    os << c.scenario << ',' << c.guest << ',' << c.sequences[cell.seq] << ',' << cell.n << ',' << cell.k << ','
       << cell.lambda << ',' << replica << ',' << seed;
    return os.str();
}

std::string header(Measure m) {
    std::string h = "scenario,guest,sequence,n,k,lambda,replica,seed";
    switch (m) {
        case Measure::kCost: return h + ",m,avg_distance,avg_cost,avg_rotations,tail_distance";
        case Measure::kTrace: return h + ",window,first,last,avg_distance,avg_cost";
        case Measure::kTopology: return h + ",sample,t,diameter,components,min_cut,edges";
        case Measure::kRobustness:
            return h + ",fraction,removed,alive,largest_cc,largest_cc_fraction,pair_tree,pair_graph,pair_tree_alive,"
                       "pair_graph_alive";
    }
    return h;
}

std::string run_replica(const ExperimentConfig& c, int replica) {
    const std::uint64_t rs = replica_seed(c, replica);
    std::ostringstream out;
    for (int n : c.n_values) {
        const GuestGraph g = make_guest(c, n, derive_seed(rs, seed_stream::kGuest, static_cast<std::uint64_t>(n)));
        const std::size_t m = requests_for(c, n);
        for (std::size_t si = 0; si < c.sequences.size(); ++si) {
            const RequestSequence sigma =
                make_sequence(c, g, n, c.sequences[si], m,
                              derive_seed(rs, seed_stream::kSequence, static_cast<std::uint64_t>(n) * 64 + si));
            for (int k : c.k_values) {
                for (int lambda : c.lambda_values) {
                    const Cell cell{n, k, lambda, si};
                    const std::string pre = cell_prefix(c, cell, replica, rs);
                    // Host trees share one seed across k, so OBST(k) extends OBST(k') for k' < k.
                    Overlay o = Overlay::new_random(n, k, derive_seed(rs, seed_stream::kHostTrees));
                    RunOptions opt;
                    opt.adjust = c.adjust;
                    opt.adjust_every = c.adjust_every;
                    opt.churn = lambda;
                    if (c.measure == Measure::kTopology) {
                        const auto w = static_cast<std::size_t>(c.windows);
                        for (std::size_t s = 0; s <= w; ++s) {
                            if (s > 0) {
                                const std::size_t first = sigma.size() * (s - 1) / w;
                                const std::size_t last = sigma.size() * s / w;
                                o.run(std::span(sigma).subspan(first, last - first), opt);
                            }
                            const Graph ug = o.union_graph();
                            const DiameterResult d = diameter(ug);
                            out << pre << ',' << s << ',' << sigma.size() * s / w << ',' << d.diameter << ','
                                << d.components << ',' << min_edge_cut(ug) << ',' << ug.edge_count() << '\n';
                        }
                        continue;
                    }
                    const CostLedger ledger = o.run(sigma, opt);
                    const auto& rec = ledger.records();
                    if (c.measure == Measure::kCost) {
                        const auto tail = static_cast<std::size_t>(std::ceil(c.tail * static_cast<double>(rec.size())));
                        const std::size_t first = rec.size() - std::min(rec.size(), std::max<std::size_t>(tail, 1));
                        const double avg_rot = rec.empty() ? 0.0
                                                           : static_cast<double>(ledger.total_rotations()) /
                                                                 static_cast<double>(rec.size());
                        out << pre << ',' << rec.size() << ',' << fmt(ledger.average_distance()) << ','
                            << fmt(ledger.average_cost()) << ',' << fmt(avg_rot) << ','
                            << fmt(ledger.average_distance(first, rec.size())) << '\n';
                    } else if (c.measure == Measure::kTrace) {
                        const auto w = static_cast<std::size_t>(c.windows);
                        for (std::size_t s = 0; s < w; ++s) {
                            const std::size_t first = rec.size() * s / w;
                            const std::size_t last = rec.size() * (s + 1) / w;
                            double dist = 0.0;
                            double cost = 0.0;
                            for (std::size_t i = first; i < last; ++i) {
                                dist += rec[i].distance;
                                cost += static_cast<double>(rec[i].distance) + 1.0 + static_cast<double>(rec[i].rotations);
                            }
                            const double cnt = last > first ? static_cast<double>(last - first) : 1.0;
                            out << pre << ',' << s << ',' << first << ',' << last << ',' << fmt(dist / cnt) << ','
                                << fmt(cost / cnt) << '\n';
                        }
                    } else {
                        const auto pts = robustness_sweep(o, c.removal_fractions, derive_seed(rs, seed_stream::kFailures));
                        for (const RobustnessPoint& p : pts) {
                            out << pre << ',' << fmt(p.fraction) << ',' << p.removed << ',' << p.alive << ','
                                << p.largest_cc << ',' << fmt(p.largest_cc_fraction) << ','
                                << fmt(p.pair_connectivity_tree) << ',' << fmt(p.pair_connectivity_graph) << ','
                                << fmt(p.pair_connectivity_tree_alive) << ',' << fmt(p.pair_connectivity_graph_alive)
                                << '\n';
                        }
                    }
                }
            }
        }
    }
    return out.str();
}

}  // namespace

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["scenario"] = c.scenario;
    j["measure"] = measure_name(c.measure);
    j["n"] = c.n_values;
    j["k"] = c.k_values;
    j["lambda"] = c.lambda_values;
    j["sequences"] = c.sequences;
    j["guest"] = c.guest;
    j["guest_k"] = c.guest_k;
    j["swarm_size"] = c.swarm_size;
    j["swarms_per_peer"] = c.swarms_per_peer;
    j["edge_list"] = c.edge_list_path;
    j["m"] = c.m;
    j["max_requests"] = c.max_requests;
    j["adjust"] = c.adjust;
    j["adjust_every"] = c.adjust_every;
    j["replicas"] = c.replicas;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["windows"] = c.windows;
    j["tail"] = c.tail;
    j["removal_fractions"] = c.removal_fractions;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base) {
    if (!j.is_object()) throw InputError("config: expected a JSON object");
    static const char* known[] = {"scenario", "measure", "n", "k", "lambda", "sequences", "guest", "guest_k",
                                  "swarm_size", "swarms_per_peer", "edge_list", "m", "max_requests", "adjust",
                                  "adjust_every", "replicas", "seed", "threads", "windows", "tail",
                                  "removal_fractions", "preset"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw InputError("config: unknown key '" + key + "'");
        }
    }
    if (j.contains("preset")) base = preset(j.at("preset").get<std::string>());
    ExperimentConfig c = std::move(base);
    read_key(j, "scenario", c.scenario);
    if (j.contains("measure")) {
        std::string m;
        read_key(j, "measure", m);
        c.measure = parse_measure(m);
    }
    read_key(j, "n", c.n_values);
    read_key(j, "k", c.k_values);
    read_key(j, "lambda", c.lambda_values);
    read_key(j, "sequences", c.sequences);
    read_key(j, "guest", c.guest);
    read_key(j, "guest_k", c.guest_k);
    read_key(j, "swarm_size", c.swarm_size);
    read_key(j, "swarms_per_peer", c.swarms_per_peer);
    read_key(j, "edge_list", c.edge_list_path);
    read_key(j, "m", c.m);
    read_key(j, "max_requests", c.max_requests);
    read_key(j, "adjust", c.adjust);
    read_key(j, "adjust_every", c.adjust_every);
    read_key(j, "replicas", c.replicas);
    read_key(j, "seed", c.seed);
    read_key(j, "threads", c.threads);
    read_key(j, "windows", c.windows);
    read_key(j, "tail", c.tail);
    read_key(j, "removal_fractions", c.removal_fractions);
    return c;
}

std::vector<std::string> preset_names() {
    return {"fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"};
}

ExperimentConfig preset(std::string_view name) {
    ExperimentConfig c;
    c.scenario = std::string(name);
    if (name == "fig3") {
        // cost vs k on Rnd(16)/Match; swap in --guest bt or edgelist for the other panels
        c.guest = "rnd";
        c.n_values = {64, 128, 256};
        c.k_values = {1, 2, 4, 8, 16, 32};
        c.replicas = 3;
    } else if (name == "fig4") {
        c.guest = "bad2";
        c.n_values = {64, 128, 256, 512};
        c.k_values = {1, 2};
        c.replicas = 3;
    } else if (name == "fig5") {
        c.guest = "bt";
        c.n_values = {128, 256};
        c.k_values = {1, 4, 32};
        c.sequences = {"match", "rw-0.5", "rw-1.0"};
        c.replicas = 3;
    } else if (name == "fig6") {
        c.measure = Measure::kTopology;
        c.guest = "bt";
        c.n_values = {256};
        c.k_values = {1, 2, 4, 8};
        c.windows = 10;
    } else if (name == "fig7") {
        c.measure = Measure::kTopology;
        c.guest = "bt";
        c.n_values = {64, 128, 256, 512};
        c.k_values = {4};
        c.sequences = {"match", "rw-0.5"};
        c.windows = 1;
        c.m = 16384;
    } else if (name == "fig8") {
        c.measure = Measure::kTrace;
        c.guest = "rnd";
        c.n_values = {256};
        c.k_values = {1, 4, 16};
        c.windows = 50;
    } else if (name == "fig9") {
        c.measure = Measure::kRobustness;
        c.guest = "rnd";
        c.n_values = {256};
        c.k_values = {16};
        c.removal_fractions.clear();
        for (int i = 0; i < 19; ++i) c.removal_fractions.push_back(0.05 * i);
        c.replicas = 3;
    } else if (name == "fig10") {
        c.guest = "rnd";
        c.n_values = {256};
        c.k_values = {16};
        c.lambda_values = {0, 1, 2, 4, 8};
        c.replicas = 5;
    } else {
        throw InputError("unknown preset '" + std::string(name) + "'");
    }
    return c;
}

void validate(const ExperimentConfig& c) {
    auto fail = [](const std::string& msg) { throw InputError("config: " + msg); };
    if (c.n_values.empty()) fail("n must list at least one size");
    if (c.k_values.empty()) fail("k must list at least one value");
    if (c.lambda_values.empty()) fail("lambda must list at least one value");
    if (c.sequences.empty()) fail("sequences must list at least one generator");
    for (int n : c.n_values) {
        if (n < 2) fail("n must be >= 2, got " + std::to_string(n));
        if (c.guest == "bad2" && (n < 8 || n % 4 != 0)) fail("bad2 needs n divisible by 4 and >= 8, got " + std::to_string(n));
    }
    for (int k : c.k_values) {
        if (k < 1) fail("k must be >= 1, got " + std::to_string(k));
    }
    for (int l : c.lambda_values) {
        if (l < 0) fail("lambda must be >= 0, got " + std::to_string(l));
        for (int n : c.n_values) {
            if (l > n) fail("lambda " + std::to_string(l) + " exceeds n " + std::to_string(n));
        }
    }
    for (const std::string& s : c.sequences) {
        if (s != "match" && s != "uniform" && rw_repeat(s) < 0.0) fail("unknown sequence '" + s + "'");
    }
    if (c.guest != "bt" && c.guest != "edgelist" && c.guest != "rnd" && c.guest != "bad2") {
        fail("unknown guest '" + c.guest + "' (bt|edgelist|rnd|bad2)");
    }
    if (c.guest == "edgelist" && c.edge_list_path.empty()) fail("guest edgelist needs edge_list");
    if (c.guest_k < 1) fail("guest_k must be >= 1");
    if (c.swarm_size < 2 || c.swarms_per_peer < 1) fail("swarm_size must be >= 2 and swarms_per_peer >= 1");
    if (c.m < 0) fail("m must be >= 0");
    if (c.max_requests < 1) fail("max_requests must be >= 1");
    if (c.adjust_every < 1) fail("adjust_every must be >= 1");
    if (c.replicas < 1) fail("replicas must be >= 1");
    if (c.threads < 1) fail("threads must be >= 1");
    if (c.windows < 1) fail("windows must be >= 1");
    if (!(c.tail > 0.0 && c.tail <= 1.0)) fail("tail must lie in (0, 1]");
    for (std::size_t i = 0; i < c.removal_fractions.size(); ++i) {
        const double f = c.removal_fractions[i];
        if (!(f >= 0.0 && f < 1.0)) fail("removal fractions must lie in [0, 1)");
        if (i > 0 && f < c.removal_fractions[i - 1]) fail("removal fractions must be non-decreasing");
    }
}

std::uint64_t replica_seed(const ExperimentConfig& c, int replica) {
    return derive_seed(c.seed, seed_stream::kReplica, static_cast<std::uint64_t>(replica));
}

GuestGraph make_guest(const ExperimentConfig& c, PeerId n, std::uint64_t seed) {
    if (c.guest == "bt") return gen_bt(n, SwarmParams{c.swarm_size, c.swarms_per_peer}, seed);
    if (c.guest == "rnd") return gen_rnd_obst(n, c.guest_k, seed);
    if (c.guest == "bad2") return gen_bad2(n).graph;
    if (c.guest == "edgelist") {
        std::ifstream in(c.edge_list_path);
        if (!in) throw InputError("cannot open edge list '" + c.edge_list_path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        const GuestGraph full = relabel_bfs(load_edge_list(ss.str()), seed);
        if (full.n() < n) {
            throw InputError("edge list has " + std::to_string(full.n()) + " connected vertices, fewer than n = " +
                             std::to_string(n));
        }
        return induced_prefix(full, n);
    }
    throw InputError("unknown guest '" + c.guest + "'");
}

RequestSequence make_sequence(const ExperimentConfig& c, const GuestGraph& g, PeerId n, std::string_view sequence,
                              std::size_t m, std::uint64_t seed) {
    if (sequence == "match") return seq_match(g, m, seed);
    if (sequence == "uniform") {
        if (c.guest == "bad2") {
            // multiset E1 + E2: edges in both are drawn twice as often
            std::vector<Edge> multiset = bad2_edges_e1(n);
            const auto e2 = bad2_edges_e2(n);
            multiset.insert(multiset.end(), e2.begin(), e2.end());
            return seq_uniform_edges(multiset, m, seed);
        }
        const auto edges = g.edges();
        return seq_uniform_edges(edges, m, seed);
    }
    const double p = rw_repeat(sequence);
    if (p < 0.0) throw InputError("unknown sequence '" + std::string(sequence) + "'");
    return seq_rw(g, m, p, seed);
}

std::size_t requests_for(const ExperimentConfig& c, PeerId n) {
    const std::int64_t want = c.m > 0 ? c.m : static_cast<std::int64_t>(n) * n;
    return static_cast<std::size_t>(std::min(want, c.max_requests));
}

ScenarioResult run_scenario(const ExperimentConfig& c) {
    validate(c);
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> parts(static_cast<std::size_t>(c.replicas));
    if (c.threads <= 1 || c.replicas == 1) {
        for (int r = 0; r < c.replicas; ++r) parts[static_cast<std::size_t>(r)] = run_replica(c, r);
    } else {
        // Replica-level parallelism; results are joined in replica order.
        for (int first = 0; first < c.replicas; first += c.threads) {
            std::vector<std::future<std::string>> jobs;
            const int last = std::min(c.replicas, first + c.threads);
            for (int r = first; r < last; ++r) jobs.push_back(std::async(std::launch::async, run_replica, std::cref(c), r));
            for (int r = first; r < last; ++r) parts[static_cast<std::size_t>(r)] = jobs[static_cast<std::size_t>(r - first)].get();
        }
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    nlohmann::ordered_json cfg = to_json(c);
    cfg.erase("threads");  // must not change the CSV bytes
    ScenarioResult out;
    std::string csv = "# obst scenario=" + c.scenario + " measure=" + measure_name(c.measure) +
                      " seed=" + std::to_string(c.seed) + "\n# config=" + cfg.dump() + "\n" + header(c.measure) + "\n";
    for (const std::string& p : parts) csv += p;
    out.csv = std::move(csv);
    out.metadata["config"] = to_json(c);
    out.metadata["seed"] = c.seed;
    out.metadata["wall_seconds"] = wall;
    out.metadata["rows"] = std::count(out.csv.begin(), out.csv.end(), '\n') - 3;
    return out;
}

void write_scenario(const ScenarioResult& r, const std::string& prefix) {
    std::ofstream csv(prefix + ".csv", std::ios::binary);
    if (!csv) throw InputError("cannot write '" + prefix + ".csv'");
    csv << r.csv;
    std::ofstream js(prefix + ".json", std::ios::binary);
    if (!js) throw InputError("cannot write '" + prefix + ".json'");
    js << r.metadata.dump(2) << '\n';
}

}  // namespace obst
