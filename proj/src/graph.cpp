#include "obst/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace obst {

Graph::Graph(PeerId n) : n_(n), adj_(static_cast<std::size_t>(std::max<PeerId>(n, 0)) + 1) {
    if (n < 0) throw InputError("graph size must be non-negative");
}

Graph::Graph(PeerId n, std::span<const Edge> edges) : Graph(n) {
    for (const Edge& e : edges) add_edge(e.a, e.b);
}

void Graph::check_vertex(PeerId u) const {
    if (u < 1 || u > n_) throw InputError("vertex " + std::to_string(u) + " outside [1," + std::to_string(n_) + "]");
}

bool Graph::add_edge(PeerId u, PeerId v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw InputError("self loop at " + std::to_string(u));
    auto& au = adj_[static_cast<std::size_t>(u)];
    auto it = std::lower_bound(au.begin(), au.end(), v);
    if (it != au.end() && *it == v) return false;
    au.insert(it, v);
    auto& av = adj_[static_cast<std::size_t>(v)];
    av.insert(std::lower_bound(av.begin(), av.end(), u), u);
    ++edge_count_;
    return true;
}

bool Graph::has_edge(PeerId u, PeerId v) const {
    check_vertex(u);
    check_vertex(v);
    const auto& au = adj_[static_cast<std::size_t>(u)];
    return std::binary_search(au.begin(), au.end(), v);
}

std::span<const PeerId> Graph::neighbors(PeerId u) const {
    check_vertex(u);
    return adj_[static_cast<std::size_t>(u)];
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (PeerId u = 1; u <= n_; ++u) {
        for (PeerId v : adj_[static_cast<std::size_t>(u)]) {
            if (u < v) out.push_back({u, v});
        }
    }
    return out;
}

std::vector<int> bfs_distances(const Graph& g, PeerId source, std::span<const char> alive) {
    const auto n = static_cast<std::size_t>(g.n());
    std::vector<int> dist(n + 1, kUnreachable);
    auto is_alive = [&](PeerId v) { return alive.empty() || alive[static_cast<std::size_t>(v)] != 0; };
    if (source < 1 || source > g.n() || !is_alive(source)) return dist;
    std::deque<PeerId> queue{source};
    dist[static_cast<std::size_t>(source)] = 0;
    while (!queue.empty()) {
        PeerId u = queue.front();
        queue.pop_front();
        for (PeerId v : g.neighbors(u)) {
            if (dist[static_cast<std::size_t>(v)] == kUnreachable && is_alive(v)) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

Components connected_components(const Graph& g, std::span<const char> alive) {
    const auto n = static_cast<std::size_t>(g.n());
    Components out;
    out.label.assign(n + 1, 0);
    std::vector<PeerId> stack;
    for (PeerId s = 1; s <= g.n(); ++s) {
        if (out.label[static_cast<std::size_t>(s)] != 0) continue;
        if (!alive.empty() && !alive[static_cast<std::size_t>(s)]) continue;
        const int c = static_cast<int>(out.sizes.size()) + 1;
        std::size_t size = 0;
        stack.assign(1, s);
        out.label[static_cast<std::size_t>(s)] = c;
        while (!stack.empty()) {
            PeerId u = stack.back();
            stack.pop_back();
            ++size;
            for (PeerId v : g.neighbors(u)) {
                auto& lv = out.label[static_cast<std::size_t>(v)];
                if (lv == 0 && (alive.empty() || alive[static_cast<std::size_t>(v)])) {
                    lv = c;
                    stack.push_back(v);
                }
            }
        }
        out.sizes.push_back(size);
    }
    return out;
}

}  // namespace obst
