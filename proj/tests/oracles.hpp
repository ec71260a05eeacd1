#pragma once
// Reference implementations for the tests. Nothing here calls the library's
// distance, lca, enumeration, partition, cut or crossing code; trees are read
// only through root()/left()/right().

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <vector>

#include "obst/bst.hpp"
#include "obst/graph.hpp"
#include "obst/types.hpp"

namespace oracle {

using obst::Edge;
using obst::PeerId;

// parent[v] for v in 1..cap, 0 for the root and for absent ids.
inline std::vector<PeerId> parents_of(const obst::Bst& t, PeerId cap) {
    std::vector<PeerId> par(static_cast<std::size_t>(cap) + 1, 0);
    if (t.empty()) return par;
    std::vector<PeerId> stack{t.root()};
    while (!stack.empty()) {
        const PeerId v = stack.back();
        stack.pop_back();
        for (PeerId c : {t.left(v), t.right(v)}) {
            if (c == obst::kNoPeer) continue;
            par[static_cast<std::size_t>(c)] = v;
            stack.push_back(c);
        }
    }
    return par;
}

inline std::vector<PeerId> ancestors(const std::vector<PeerId>& par, PeerId v) {
    std::vector<PeerId> out{v};
    while (par[static_cast<std::size_t>(v)] != 0) {
        v = par[static_cast<std::size_t>(v)];
        out.push_back(v);
    }
    return out;
}

inline int depth(const std::vector<PeerId>& par, PeerId v) { return static_cast<int>(ancestors(par, v).size()) - 1; }

// Path length through the deepest common ancestor.
inline int tree_distance(const std::vector<PeerId>& par, PeerId u, PeerId v) {
    const auto au = ancestors(par, u);
    const auto av = ancestors(par, v);
    std::size_t i = au.size();
    std::size_t j = av.size();
    while (i > 0 && j > 0 && au[i - 1] == av[j - 1]) {
        --i;
        --j;
    }
    return static_cast<int>(i + j);
}

inline PeerId lca(const std::vector<PeerId>& par, PeerId u, PeerId v) {
    const auto au = ancestors(par, u);
    const auto av = ancestors(par, v);
    for (PeerId a : au) {
        if (std::find(av.begin(), av.end(), a) != av.end()) return a;
    }
    return 0;
}

// Plain BFS over an adjacency map built from edges.
inline std::vector<int> bfs(PeerId n, const std::vector<Edge>& edges, PeerId src) {
    std::vector<std::vector<PeerId>> adj(static_cast<std::size_t>(n) + 1);
    for (const Edge& e : edges) {
        adj[static_cast<std::size_t>(e.a)].push_back(e.b);
        adj[static_cast<std::size_t>(e.b)].push_back(e.a);
    }
    std::vector<int> d(static_cast<std::size_t>(n) + 1, -1);
    std::queue<PeerId> q;
    d[static_cast<std::size_t>(src)] = 0;
    q.push(src);
    while (!q.empty()) {
        const PeerId u = q.front();
        q.pop();
        for (PeerId w : adj[static_cast<std::size_t>(u)]) {
            if (d[static_cast<std::size_t>(w)] < 0) {
                d[static_cast<std::size_t>(w)] = d[static_cast<std::size_t>(u)] + 1;
                q.push(w);
            }
        }
    }
    return d;
}

// Recursive search-order and annotation check through child links only.
inline bool valid_bst(const obst::Bst& t, std::size_t expected_size) {
    if (t.empty()) return expected_size == 0;
    std::size_t seen = 0;
    bool ok = t.parent(t.root()) == obst::kNoPeer;
    std::function<std::pair<PeerId, PeerId>(PeerId, PeerId, PeerId)> walk = [&](PeerId v, PeerId lo, PeerId hi) {
        ++seen;
        if (seen > expected_size) {
            ok = false;
            return std::pair{v, v};
        }
        if (v <= lo || v >= hi) ok = false;
        PeerId mn = v;
        PeerId mx = v;
        if (PeerId l = t.left(v); l != obst::kNoPeer) {
            if (t.parent(l) != v) ok = false;
            mn = walk(l, lo, v).first;
        }
        if (PeerId r = t.right(v); r != obst::kNoPeer) {
            if (t.parent(r) != v) ok = false;
            mx = walk(r, v, hi).second;
        }
        if (t.sub_min(v) != mn || t.sub_max(v) != mx) ok = false;
        return std::pair{mn, mx};
    };
    walk(t.root(), std::numeric_limits<PeerId>::min(), std::numeric_limits<PeerId>::max());
    return ok && seen == expected_size;
}

// Each entry: (root, (child, parent) links) for the interval lo..hi.
using Shape = std::pair<PeerId, std::vector<std::pair<PeerId, PeerId>>>;

inline void all_bsts_rec(PeerId lo, PeerId hi, std::vector<Shape>& out) {
    if (lo > hi) {
        out.push_back({0, {}});
        return;
    }
    for (PeerId r = lo; r <= hi; ++r) {
        std::vector<Shape> ls;
        std::vector<Shape> rs;
        all_bsts_rec(lo, r - 1, ls);
        all_bsts_rec(r + 1, hi, rs);
        for (const auto& [lr, le] : ls) {
            for (const auto& [rr, re] : rs) {
                std::vector<std::pair<PeerId, PeerId>> links = le;
                links.insert(links.end(), re.begin(), re.end());
                if (lr) links.push_back({lr, r});
                if (rr) links.push_back({rr, r});
                out.push_back({r, std::move(links)});
            }
        }
    }
}

// Every BST over 1..n as a parent array (root has parent 0).
inline std::vector<std::vector<PeerId>> all_bsts(PeerId n) {
    std::vector<Shape> raw;
    all_bsts_rec(1, n, raw);
    std::vector<std::vector<PeerId>> out;
    out.reserve(raw.size());
    for (const auto& [root, links] : raw) {
        std::vector<PeerId> par(static_cast<std::size_t>(n) + 1, 0);
        for (const auto& [c, p] : links) par[static_cast<std::size_t>(c)] = p;
        out.push_back(std::move(par));
    }
    return out;
}

inline std::vector<int> depths(const std::vector<PeerId>& par) {
    std::vector<int> d(par.size(), 0);
    for (std::size_t v = 1; v < par.size(); ++v) d[v] = depth(par, static_cast<PeerId>(v));
    return d;
}

inline double entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p) {
        if (x > 0) h -= x * std::log2(x);
    }
    return h;
}

// Min over all BSTs of sum_i w[i] * depth(i+1).
inline double optimal_lookup_cost(const std::vector<double>& w) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& par : all_bsts(static_cast<PeerId>(w.size()))) {
        const auto d = depths(par);
        double c = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) c += w[i] * d[i + 1];
        best = std::min(best, c);
    }
    return best;
}

// Largest H(alpha) over every assignment of class weights to k sets.
inline double best_partition_entropy(const std::vector<double>& weights, int k) {
    const std::size_t c = weights.size();
    double best = 0.0;
    std::vector<int> assign(c, 0);
    while (true) {
        std::vector<double> sums(static_cast<std::size_t>(k), 0.0);
        for (std::size_t i = 0; i < c; ++i) sums[static_cast<std::size_t>(assign[i])] += weights[i];
        best = std::max(best, entropy(sums));
        std::size_t i = 0;
        while (i < c && ++assign[i] == k) assign[i++] = 0;
        if (i == c) break;
    }
    return best;
}

inline bool crosses(Edge x, Edge y) {
    const PeerId lo = std::min(x.a, x.b);
    const PeerId hi = std::max(x.a, x.b);
    const bool ia = lo < y.a && y.a < hi;
    const bool ib = lo < y.b && y.b < hi;
    return ia != ib;
}

// Maximum clique of the crossing graph, Bron-Kerbosch with pivoting.
inline std::size_t max_crossing_clique(const std::vector<Edge>& chords) {
    const std::size_t m = chords.size();
    std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) adj[i][j] = i != j && crosses(chords[i], chords[j]);
    }
    std::size_t best = 0;
    std::function<void(std::vector<std::size_t>, std::vector<std::size_t>, std::vector<std::size_t>)> bk =
        [&](std::vector<std::size_t> r, std::vector<std::size_t> p, std::vector<std::size_t> x) {
            if (p.empty() && x.empty()) {
                best = std::max(best, r.size());
                return;
            }
            if (r.size() + p.size() <= best) return;
            std::size_t pivot = p.empty() ? x.front() : p.front();
            std::vector<std::size_t> cand;
            for (std::size_t v : p) {
                if (!adj[pivot][v]) cand.push_back(v);
            }
            for (std::size_t v : cand) {
                std::vector<std::size_t> np;
                std::vector<std::size_t> nx;
                for (std::size_t w : p) {
                    if (adj[v][w]) np.push_back(w);
                }
                for (std::size_t w : x) {
                    if (adj[v][w]) nx.push_back(w);
                }
                auto nr = r;
                nr.push_back(v);
                bk(nr, np, nx);
                p.erase(std::find(p.begin(), p.end(), v));
                x.push_back(v);
            }
        };
    std::vector<std::size_t> all(m);
    for (std::size_t i = 0; i < m; ++i) all[i] = i;
    bk({}, all, {});
    return best;
}

// Global min cut by trying every bipartition (n <= 16).
inline int min_cut_bruteforce(PeerId n, const std::vector<Edge>& edges) {
    int best = std::numeric_limits<int>::max();
    const std::uint32_t full = 1u << (n - 1);
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        // vertex n always on side 0
        int cut = 0;
        for (const Edge& e : edges) {
            const bool sa = e.a < n && (mask >> (e.a - 1) & 1u);
            const bool sb = e.b < n && (mask >> (e.b - 1) & 1u);
            cut += sa != sb;
        }
        best = std::min(best, cut);
    }
    return best;
}

// Edges crossing the boundary of the id interval [lo, hi].
inline std::size_t interval_cut(const std::vector<Edge>& edges, PeerId lo, PeerId hi) {
    std::size_t c = 0;
    for (const Edge& e : edges) {
        const bool ia = lo <= e.a && e.a <= hi;
        const bool ib = lo <= e.b && e.b <= hi;
        c += ia != ib;
    }
    return c;
}

}  // namespace oracle
