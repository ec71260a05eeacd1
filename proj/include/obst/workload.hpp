#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "obst/bst.hpp"
#include "obst/graph.hpp"
#include "obst/types.hpp"

namespace obst {

/// Communication-demand graph. Stored undirected; generators pick directions.
using GuestGraph = Graph;

// ---------------------------------------------------------------------------
// Guest graphs
// ---------------------------------------------------------------------------

struct SwarmParams {
    int swarm_size = 32;
    int swarms_per_peer = 2;
};

/// BitTorrent-like swarm connectivity: ceil(n * swarms_per_peer / swarm_size)
/// swarms of capacity swarm_size. Peers arrive in random order; the first
/// swarm is chosen uniformly among those with room, every further one with
/// probability proportional to 1 + (current neighbors already in it). Each
/// swarm is a clique.
GuestGraph gen_bt(PeerId n, const SwarmParams& params, std::uint64_t seed);

/// Whitespace-separated "a b" pairs, '#' comments. Duplicates and self loops
/// are dropped. A file that uses id 0 is shifted up by one. Each adjustment is
/// described in `warnings` when given.
GuestGraph load_edge_list(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Renumbers vertices 1..n' in BFS order from a maximum-degree vertex (ties
/// broken by `seed`), visiting neighbors by ascending old id. A disconnected
/// graph is reduced to its largest component.
GuestGraph relabel_bfs(const GuestGraph& g, std::uint64_t seed, std::vector<std::string>* warnings = nullptr);

/// Subgraph induced by vertices 1..n.
GuestGraph induced_prefix(const GuestGraph& g, PeerId n);

/// Union of k random BSTs. Tree i uses the same seed as Overlay::new_random,
/// so gen_rnd_obst(n, k, s) equals new_random(n, k, s).union_graph().
GuestGraph gen_rnd_obst(PeerId n, int k, std::uint64_t seed);

/// The laminated two-tree instance: E1 (two laminated halves) and E2 (one
/// laminated tree over all ids). Requires n divisible by 4, n >= 8.
struct Bad2Instance {
    GuestGraph graph;            // E1 union E2
    std::array<Bst, 2> trees;    // T1, T2
    std::array<std::vector<Edge>, 2> edges;  // E1, E2 as generated
};
Bad2Instance gen_bad2(PeerId n);
std::vector<Edge> bad2_edges_e1(PeerId n);
std::vector<Edge> bad2_edges_e2(PeerId n);

// ---------------------------------------------------------------------------
// Request sequences
// ---------------------------------------------------------------------------

/// Rounds of randomized greedy maximal matchings; each matched edge is
/// emitted once per round with a random direction.
RequestSequence seq_match(const GuestGraph& g, std::size_t m, std::uint64_t seed);

/// Random walk. With probability p_repeat the previous request is emitted
/// again; otherwise the walker at v steps to a uniform neighbor w and (v, w)
/// is emitted. p_repeat = 0 is RW-1.0, 0.5 is RW-0.5.
RequestSequence seq_rw(const GuestGraph& g, std::size_t m, double p_repeat, std::uint64_t seed);

/// Uniform draws from an edge multiset with random direction.
RequestSequence seq_uniform_edges(std::span<const Edge> edges, std::size_t m, std::uint64_t seed);

/// "t,src,dst" CSV with header.
std::string write_requests(std::span<const Request> sigma);
/// Accepts the CSV above or whitespace-separated "t src dst" lines; '#'
/// comments. Errors carry line numbers.
RequestSequence read_requests(std::string_view text);

}  // namespace obst
