#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "obst/graph.hpp"
#include "obst/overlay.hpp"

namespace obst {

/// Average of distance + 1 + rotations, recomputed from the raw records.
/// Throws on an empty ledger.
double avg_cost(const CostLedger& ledger);
double avg_distance(const CostLedger& ledger);

struct DiameterResult {
    int diameter = 0;             // max over components
    std::size_t components = 0;
};

/// Exact diameter by BFS from every vertex. Vertices with alive[v] == 0 are
/// ignored when `alive` is non-empty.
DiameterResult diameter(const Graph& g, std::span<const char> alive = {});

/// Eccentricity of the far end of a BFS sweep: a lower bound on the diameter
/// of the component containing `start`.
int diameter_double_sweep(const Graph& g, PeerId start = 1);

/// Global minimum edge cut (unit weights) by Stoer-Wagner. 0 for disconnected
/// graphs and graphs with fewer than two vertices.
int min_edge_cut(const Graph& g);

struct RobustnessPoint {
    double fraction = 0.0;       // requested removal fraction
    std::size_t removed = 0;
    std::size_t alive = 0;
    std::size_t largest_cc = 0;  // in the surviving union graph
    double largest_cc_fraction = 0.0;  // largest_cc / alive
    /// Connected pairs over the original n(n-1)/2 pairs.
    double pair_connectivity_tree = 0.0;
    double pair_connectivity_graph = 0.0;
    /// Connected pairs over the surviving alive(alive-1)/2 pairs.
    double pair_connectivity_tree_alive = 0.0;
    double pair_connectivity_graph_alive = 0.0;
};

/// Crash-failure sweep: peers are removed in one random order without any
/// repair, cumulatively up to each fraction (which must be non-decreasing and
/// lie in [0, 1)). A pair is tree-connected when some single BST still joins
/// it, graph-connected when the surviving union graph does.
std::vector<RobustnessPoint> robustness_sweep(const Overlay& o, std::span<const double> removal_fractions,
                                              std::uint64_t seed);

/// Shortest path over the union of all trees; nullopt when unreachable.
std::optional<int> union_distance(const Overlay& o, PeerId u, PeerId v);

}  // namespace obst
