#pragma once

#include <optional>
#include <span>
#include <vector>

#include "obst/types.hpp"

namespace obst {

/// Simple undirected graph over vertices 1..n (vertex 0 unused).
/// Adjacency lists are kept sorted and duplicate-free.
class Graph {
public:
    Graph() = default;
    explicit Graph(PeerId n);
    Graph(PeerId n, std::span<const Edge> edges);

    [[nodiscard]] PeerId n() const { return n_; }
    [[nodiscard]] std::size_t edge_count() const { return edge_count_; }

    /// Returns false when the edge already existed. Self loops are rejected.
    bool add_edge(PeerId u, PeerId v);
    [[nodiscard]] bool has_edge(PeerId u, PeerId v) const;
    [[nodiscard]] std::span<const PeerId> neighbors(PeerId u) const;
    [[nodiscard]] std::size_t degree(PeerId u) const { return neighbors(u).size(); }
    /// Canonical (a < b) edges, sorted.
    [[nodiscard]] std::vector<Edge> edges() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    void check_vertex(PeerId u) const;

    PeerId n_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<std::vector<PeerId>> adj_;
};

inline constexpr int kUnreachable = -1;

/// BFS hop distances from `source`; kUnreachable where not reached. Vertices
/// with alive[v] == 0 are treated as absent when `alive` is non-empty.
std::vector<int> bfs_distances(const Graph& g, PeerId source, std::span<const char> alive = {});

/// Component label per vertex (0 for absent vertices, labels start at 1) and
/// the number of components among alive vertices.
struct Components {
    std::vector<int> label;
    std::vector<std::size_t> sizes;  // sizes[c-1] for label c
};
Components connected_components(const Graph& g, std::span<const char> alive = {});

}  // namespace obst
