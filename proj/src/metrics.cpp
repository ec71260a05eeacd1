#include "obst/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <unordered_map>

namespace obst {

double avg_cost(const CostLedger& ledger) {
    if (ledger.records().empty()) throw InputError("avg_cost: empty ledger");
    double total = 0.0;
    for (const CostRecord& r : ledger.records()) total += static_cast<double>(r.distance) + 1.0 + static_cast<double>(r.rotations);
    return total / static_cast<double>(ledger.records().size());
}

double avg_distance(const CostLedger& ledger) {
    if (ledger.records().empty()) throw InputError("avg_distance: empty ledger");
    double total = 0.0;
    for (const CostRecord& r : ledger.records()) total += r.distance;
    return total / static_cast<double>(ledger.records().size());
}

DiameterResult diameter(const Graph& g, std::span<const char> alive) {
    if (g.n() < 1) throw InputError("diameter: empty graph");
    DiameterResult out;
    out.components = connected_components(g, alive).sizes.size();
    for (PeerId s = 1; s <= g.n(); ++s) {
        if (!alive.empty() && !alive[static_cast<std::size_t>(s)]) continue;
        const auto dist = bfs_distances(g, s, alive);
        out.diameter = std::max(out.diameter, *std::max_element(dist.begin(), dist.end()));
    }
    return out;
}

int diameter_double_sweep(const Graph& g, PeerId start) {
    auto farthest = [&](PeerId s) {
        const auto dist = bfs_distances(g, s);
        const auto it = std::max_element(dist.begin(), dist.end());
        return std::pair{static_cast<PeerId>(it - dist.begin()), *it};
    };
    const auto [far, d0] = farthest(start);
    (void)d0;
    return farthest(far).second;
}

int min_edge_cut(const Graph& g) {
    const PeerId n = g.n();
    if (n < 2) return 0;
    if (connected_components(g).sizes.size() > 1) return 0;

    const auto un = static_cast<std::size_t>(n);
    std::vector<std::unordered_map<PeerId, int>> w(un + 1);
    for (const Edge& e : g.edges()) {
        w[static_cast<std::size_t>(e.a)][e.b] += 1;
        w[static_cast<std::size_t>(e.b)][e.a] += 1;
    }
    std::vector<PeerId> active(un);
    std::iota(active.begin(), active.end(), PeerId{1});
    std::vector<int> key(un + 1, 0);
    std::vector<char> added(un + 1, 0);
    int best = std::numeric_limits<int>::max();

    while (active.size() > 1) {
        // Maximum adjacency ordering.
        for (PeerId v : active) {
            key[static_cast<std::size_t>(v)] = 0;
            added[static_cast<std::size_t>(v)] = 0;
        }
        std::priority_queue<std::pair<int, PeerId>> heap;
        heap.emplace(0, active.front());
        PeerId prev = kNoPeer;
        PeerId last = kNoPeer;
        std::size_t taken = 0;
        while (taken < active.size()) {
            PeerId u = kNoPeer;
            while (!heap.empty()) {
                auto [k, v] = heap.top();
                heap.pop();
                if (!added[static_cast<std::size_t>(v)] && k == key[static_cast<std::size_t>(v)]) {
                    u = v;
                    break;
                }
            }
            if (u == kNoPeer) {
                // Contracted graph stays connected, so this is unreachable in practice.
                for (PeerId v : active) {
                    if (!added[static_cast<std::size_t>(v)]) {
                        u = v;
                        break;
                    }
                }
            }
            added[static_cast<std::size_t>(u)] = 1;
            ++taken;
            prev = last;
            last = u;
            for (const auto& [v, c] : w[static_cast<std::size_t>(u)]) {
                if (added[static_cast<std::size_t>(v)]) continue;
                key[static_cast<std::size_t>(v)] += c;
                heap.emplace(key[static_cast<std::size_t>(v)], v);
            }
        }
        best = std::min(best, key[static_cast<std::size_t>(last)]);
        // Merge `last` into `prev`.
        auto& wl = w[static_cast<std::size_t>(last)];
        auto& wp = w[static_cast<std::size_t>(prev)];
        for (const auto& [v, c] : wl) {
            if (v == prev) continue;
            wp[v] += c;
            auto& wv = w[static_cast<std::size_t>(v)];
            wv[prev] += c;
            wv.erase(last);
        }
        wp.erase(last);
        wl.clear();
        active.erase(std::find(active.begin(), active.end(), last));
    }
    return best;
}

std::vector<RobustnessPoint> robustness_sweep(const Overlay& o, std::span<const double> removal_fractions,
                                              std::uint64_t seed) {
    const Graph ug = o.union_graph();
    std::vector<Graph> tree_graphs;
    tree_graphs.reserve(static_cast<std::size_t>(o.k()));
    for (const Bst& t : o.trees()) {
        const auto edges = t.edges();
        tree_graphs.emplace_back(ug.n(), edges);
    }
    std::vector<PeerId> order = o.peers();
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const std::size_t n = order.size();
    std::vector<char> alive(static_cast<std::size_t>(ug.n()) + 1, 0);
    for (PeerId p : order) alive[static_cast<std::size_t>(p)] = 1;
    const double all_pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;

    std::vector<RobustnessPoint> out;
    std::size_t removed = 0;
    double last_fraction = 0.0;
    for (double fraction : removal_fractions) {
        if (!(fraction >= 0.0 && fraction < 1.0)) throw InputError("robustness_sweep: fractions must lie in [0, 1)");
        if (fraction < last_fraction) throw InputError("robustness_sweep: fractions must be non-decreasing");
        last_fraction = fraction;
        const auto target = static_cast<std::size_t>(fraction * static_cast<double>(n));
        while (removed < target) alive[static_cast<std::size_t>(order[removed++])] = 0;

        RobustnessPoint pt;
        pt.fraction = fraction;
        pt.removed = removed;
        pt.alive = n - removed;
        const Components gc = connected_components(ug, alive);
        double graph_pairs = 0.0;
        for (std::size_t c : gc.sizes) {
            pt.largest_cc = std::max(pt.largest_cc, c);
            graph_pairs += static_cast<double>(c) * static_cast<double>(c - 1) / 2.0;
        }
        std::vector<Components> tc;
        tc.reserve(tree_graphs.size());
        for (const Graph& tg : tree_graphs) tc.push_back(connected_components(tg, alive));
        std::vector<PeerId> survivors;
        for (std::size_t i = removed; i < n; ++i) survivors.push_back(order[i]);
        std::sort(survivors.begin(), survivors.end());
        double tree_pairs = 0.0;
        for (std::size_t a = 0; a < survivors.size(); ++a) {
            const auto ua = static_cast<std::size_t>(survivors[a]);
            for (std::size_t b = a + 1; b < survivors.size(); ++b) {
                const auto ub = static_cast<std::size_t>(survivors[b]);
                if (gc.label[ua] != gc.label[ub]) continue;
                for (const Components& c : tc) {
                    if (c.label[ua] == c.label[ub]) {
                        tree_pairs += 1.0;
                        break;
                    }
                }
            }
        }
        const double alive_pairs = static_cast<double>(pt.alive) * static_cast<double>(pt.alive - (pt.alive > 0 ? 1 : 0)) / 2.0;
        pt.largest_cc_fraction = pt.alive ? static_cast<double>(pt.largest_cc) / static_cast<double>(pt.alive) : 0.0;
        pt.pair_connectivity_graph = all_pairs > 0 ? graph_pairs / all_pairs : 1.0;
        pt.pair_connectivity_tree = all_pairs > 0 ? tree_pairs / all_pairs : 1.0;
        pt.pair_connectivity_graph_alive = alive_pairs > 0 ? graph_pairs / alive_pairs : 1.0;
        pt.pair_connectivity_tree_alive = alive_pairs > 0 ? tree_pairs / alive_pairs : 1.0;
        out.push_back(pt);
    }
    return out;
}

std::optional<int> union_distance(const Overlay& o, PeerId u, PeerId v) {
    if (!o.contains(u) || !o.contains(v)) throw InputError("union_distance: peer not in overlay");
    const auto dist = bfs_distances(o.union_graph(), u);
    const int d = dist[static_cast<std::size_t>(v)];
    if (d == kUnreachable) return std::nullopt;
    return d;
}

}  // namespace obst
