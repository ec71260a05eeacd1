#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "obst/workload.hpp"

namespace obst {

/// What a scenario measures for each (n, k, lambda, sequence, replica) cell.
enum class Measure {
    kCost,        // one summary row per run
    kTrace,       // average cost per time window
    kTopology,    // diameter and min cut of the union graph sampled over time
    kRobustness,  // crash-failure sweep after the run
};

struct ExperimentConfig {
    std::string scenario = "custom";
    Measure measure = Measure::kCost;

    std::vector<int> n_values{128};
    std::vector<int> k_values{1};
    std::vector<int> lambda_values{0};
    /// "match", "rw-<x>" (walk step with probability x, else repeat the last
    /// request: rw-0.5, rw-1.0) or "uniform" (edge multiset draws).
    std::vector<std::string> sequences{"match"};

    /// "bt", "edgelist", "rnd" or "bad2".
    std::string guest = "rnd";
    int guest_k = 16;
    int swarm_size = 32;
    int swarms_per_peer = 2;
    std::string edge_list_path;

    /// Requests per run; 0 means n^2. Always capped by max_requests.
    std::int64_t m = 0;
    std::int64_t max_requests = 1'000'000;
    bool adjust = true;
    int adjust_every = 1;

    int replicas = 1;
    std::uint64_t seed = 1;
    int threads = 1;

    /// Time windows for trace/topology measurements.
    int windows = 10;
    /// Share of the run (at the end) averaged into tail_distance.
    double tail = 0.1;
    std::vector<double> removal_fractions{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
};

nlohmann::ordered_json to_json(const ExperimentConfig& c);
/// Unknown keys and type mismatches raise InputError naming the key.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});

std::vector<std::string> preset_names();
/// Desk-scale presets for each reproduced figure: fig3 ... fig10.
ExperimentConfig preset(std::string_view name);

/// Throws InputError describing the first invalid field.
void validate(const ExperimentConfig& c);

/// Seed of replica i: derive_seed(master, kReplica, i).
std::uint64_t replica_seed(const ExperimentConfig& c, int replica);

GuestGraph make_guest(const ExperimentConfig& c, PeerId n, std::uint64_t seed);
RequestSequence make_sequence(const ExperimentConfig& c, const GuestGraph& g, PeerId n, std::string_view sequence,
                              std::size_t m, std::uint64_t seed);
std::size_t requests_for(const ExperimentConfig& c, PeerId n);

struct ScenarioResult {
    std::string csv;
    nlohmann::ordered_json metadata;
};

/// Runs every cell of the scenario. The CSV starts with '#' lines echoing
/// the config, then a header and one row per measurement. It depends only on
/// the config: the same config gives byte-identical CSV for any thread count.
ScenarioResult run_scenario(const ExperimentConfig& c);

/// Writes <prefix>.csv and <prefix>.json.
void write_scenario(const ScenarioResult& r, const std::string& prefix);

}  // namespace obst
