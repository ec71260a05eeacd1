#include "obst/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "obst/rng.hpp"

namespace obst {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != ',' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

bool parse_int(std::string_view s, long long& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::string_view strip_comment(std::string_view line) {
    if (auto pos = line.find('#'); pos != std::string_view::npos) line = line.substr(0, pos);
    return line;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        fn(line_no, text.substr(start, end - start));
        if (end == text.size()) break;
        start = end + 1;
    }
}

}  // namespace

GuestGraph gen_bt(PeerId n, const SwarmParams& params, std::uint64_t seed) {
    if (n < 1) throw InputError("gen_bt: n must be >= 1");
    if (params.swarm_size < 2) throw InputError("gen_bt: swarm_size must be >= 2");
    if (params.swarms_per_peer < 1) throw InputError("gen_bt: swarms_per_peer must be >= 1");
    const auto total_slots = static_cast<long long>(n) * params.swarms_per_peer;
    const auto swarm_count = static_cast<std::size_t>((total_slots + params.swarm_size - 1) / params.swarm_size);
    if (static_cast<std::size_t>(params.swarms_per_peer) > swarm_count) {
        throw InputError("gen_bt: swarms_per_peer exceeds the number of swarms (" + std::to_string(swarm_count) + ")");
    }

    std::mt19937_64 rng(seed);
    std::vector<PeerId> arrival(static_cast<std::size_t>(n));
    std::iota(arrival.begin(), arrival.end(), PeerId{1});
    std::shuffle(arrival.begin(), arrival.end(), rng);

    std::vector<std::vector<PeerId>> members(swarm_count);
    std::vector<int> neighbor_mark(static_cast<std::size_t>(n) + 1, 0);
    std::vector<char> joined(swarm_count, 0);
    int stamp = 0;
    for (PeerId p : arrival) {
        ++stamp;
        std::fill(joined.begin(), joined.end(), 0);
        for (int j = 0; j < params.swarms_per_peer; ++j) {
            std::vector<std::size_t> candidates;
            for (std::size_t s = 0; s < swarm_count; ++s) {
                if (!joined[s] && members[s].size() < static_cast<std::size_t>(params.swarm_size)) candidates.push_back(s);
            }
            if (candidates.empty()) {
                // Remaining room is only in swarms p already joined; overflow one.
                for (std::size_t s = 0; s < swarm_count; ++s) {
                    if (!joined[s]) candidates.push_back(s);
                }
            }
            std::size_t chosen = 0;
            if (j == 0) {
                std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
                chosen = candidates[pick(rng)];
            } else {
                std::vector<double> weights;
                weights.reserve(candidates.size());
                for (std::size_t s : candidates) {
                    std::size_t shared = 0;
                    for (PeerId q : members[s]) shared += neighbor_mark[static_cast<std::size_t>(q)] == stamp ? 1 : 0;
                    weights.push_back(1.0 + static_cast<double>(shared));
                }
                std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
                chosen = candidates[pick(rng)];
            }
            joined[chosen] = 1;
            for (PeerId q : members[chosen]) neighbor_mark[static_cast<std::size_t>(q)] = stamp;
            members[chosen].push_back(p);
        }
    }

    GuestGraph g(n);
    for (const auto& swarm : members) {
        for (std::size_t a = 0; a < swarm.size(); ++a) {
            for (std::size_t b = a + 1; b < swarm.size(); ++b) g.add_edge(swarm[a], swarm[b]);
        }
    }
    return g;
}

GuestGraph load_edge_list(std::string_view text, std::vector<std::string>* warnings) {
    std::vector<std::pair<long long, long long>> pairs;
    for_each_line(text, [&](int line_no, std::string_view raw) {
        auto fields = split_fields(strip_comment(raw));
        if (fields.empty()) return;
        long long a = 0;
        long long b = 0;
        if (fields.size() != 2 || !parse_int(fields[0], a) || !parse_int(fields[1], b)) {
            throw InputError("edge list line " + std::to_string(line_no) + ": expected two integers");
        }
        if (a < 0 || b < 0) throw InputError("edge list line " + std::to_string(line_no) + ": negative id");
        pairs.emplace_back(a, b);
    });
    long long max_id = 0;
    bool uses_zero = false;
    for (auto [a, b] : pairs) {
        max_id = std::max({max_id, a, b});
        uses_zero = uses_zero || a == 0 || b == 0;
    }
    const long long shift = uses_zero ? 1 : 0;
    if (uses_zero && warnings) warnings->push_back("edge list uses id 0; shifted all ids up by one");
    if (max_id + shift > std::numeric_limits<PeerId>::max()) throw InputError("edge list: id too large");
    GuestGraph g(static_cast<PeerId>(max_id + shift));
    std::size_t self_loops = 0;
    std::size_t duplicates = 0;
    for (auto [a, b] : pairs) {
        if (a == b) {
            ++self_loops;
            continue;
        }
        if (!g.add_edge(static_cast<PeerId>(a + shift), static_cast<PeerId>(b + shift))) ++duplicates;
    }
    if (warnings && self_loops) warnings->push_back("dropped " + std::to_string(self_loops) + " self loops");
    if (warnings && duplicates) warnings->push_back("merged " + std::to_string(duplicates) + " duplicate edges");
    return g;
}

GuestGraph relabel_bfs(const GuestGraph& g, std::uint64_t seed, std::vector<std::string>* warnings) {
    if (g.n() < 1) throw InputError("relabel_bfs: empty graph");
    const Components comps = connected_components(g);
    const auto largest = static_cast<int>(std::max_element(comps.sizes.begin(), comps.sizes.end()) - comps.sizes.begin()) + 1;
    if (comps.sizes.size() > 1 && warnings) {
        warnings->push_back("graph has " + std::to_string(comps.sizes.size()) + " components; keeping the largest (" +
                            std::to_string(comps.sizes[static_cast<std::size_t>(largest - 1)]) + " vertices)");
    }
    std::size_t max_degree = 0;
    std::vector<PeerId> hubs;
    for (PeerId v = 1; v <= g.n(); ++v) {
        if (comps.label[static_cast<std::size_t>(v)] != largest) continue;
        if (g.degree(v) > max_degree) {
            max_degree = g.degree(v);
            hubs.clear();
        }
        if (g.degree(v) == max_degree) hubs.push_back(v);
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, hubs.size() - 1);
    const PeerId start = hubs[pick(rng)];

    std::vector<PeerId> new_id(static_cast<std::size_t>(g.n()) + 1, kNoPeer);
    std::vector<PeerId> order{start};
    new_id[static_cast<std::size_t>(start)] = 1;
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (PeerId w : g.neighbors(order[head])) {
            if (new_id[static_cast<std::size_t>(w)] == kNoPeer) {
                order.push_back(w);
                new_id[static_cast<std::size_t>(w)] = static_cast<PeerId>(order.size());
            }
        }
    }
    GuestGraph out(static_cast<PeerId>(order.size()));
    for (const Edge& e : g.edges()) {
        const PeerId a = new_id[static_cast<std::size_t>(e.a)];
        const PeerId b = new_id[static_cast<std::size_t>(e.b)];
        if (a != kNoPeer && b != kNoPeer) out.add_edge(a, b);
    }
    return out;
}

GuestGraph induced_prefix(const GuestGraph& g, PeerId n) {
    if (n < 1 || n > g.n()) throw InputError("induced_prefix: n must lie in [1, " + std::to_string(g.n()) + "]");
    GuestGraph out(n);
    for (const Edge& e : g.edges()) {
        if (e.b <= n) out.add_edge(e.a, e.b);
    }
    return out;
}

GuestGraph gen_rnd_obst(PeerId n, int k, std::uint64_t seed) {
    if (n < 1 || k < 1) throw InputError("gen_rnd_obst: n and k must be >= 1");
    GuestGraph g(n);
    for (int i = 0; i < k; ++i) {
        const Bst t = Bst::random(n, derive_seed(seed, seed_stream::kHostTrees, static_cast<std::uint64_t>(i)));
        for (const Edge& e : t.edges()) g.add_edge(e.a, e.b);
    }
    return g;
}

std::vector<Edge> bad2_edges_e1(PeerId n) {
    const PeerId h = n / 2;
    const PeerId q = n / 4;
    std::vector<Edge> e;
    for (PeerId i = 1; i <= q; ++i) e.push_back(make_edge(i, h - i + 1));
    for (PeerId i = 0; i <= q - 2; ++i) e.push_back(make_edge(h - i, i + 2));
    for (PeerId i = 0; i <= q - 1; ++i) e.push_back(make_edge(h + i, n - i));
    for (PeerId i = 0; i <= q - 1; ++i) e.push_back(make_edge(n - i, h + 1 + i));
    return e;
}

std::vector<Edge> bad2_edges_e2(PeerId n) {
    const PeerId h = n / 2;
    std::vector<Edge> e;
    for (PeerId i = 1; i <= h; ++i) e.push_back(make_edge(i, n - i + 1));
    for (PeerId i = 0; i <= h - 2; ++i) e.push_back(make_edge(n - i, i + 2));
    return e;
}

Bad2Instance gen_bad2(PeerId n) {
    if (n < 4 || n % 4 != 0) throw InputError("gen_bad2: n must be a positive multiple of 4");
    Bad2Instance inst;
    inst.edges = {bad2_edges_e1(n), bad2_edges_e2(n)};
    inst.graph = GuestGraph(n);
    for (const auto& es : inst.edges) {
        for (const Edge& e : es) inst.graph.add_edge(e.a, e.b);
    }
    inst.trees = {Bst::from_edges(n, inst.edges[0]), Bst::from_edges(n, inst.edges[1])};
    return inst;
}

RequestSequence seq_match(const GuestGraph& g, std::size_t m, std::uint64_t seed) {
    std::vector<Edge> edges = g.edges();
    if (edges.empty()) throw InputError("seq_match: guest graph has no edges");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution flip(0.5);
    std::vector<char> used(static_cast<std::size_t>(g.n()) + 1, 0);
    RequestSequence out;
    out.reserve(m);
    while (out.size() < m) {
        std::shuffle(edges.begin(), edges.end(), rng);
        std::fill(used.begin(), used.end(), 0);
        for (const Edge& e : edges) {
            if (used[static_cast<std::size_t>(e.a)] || used[static_cast<std::size_t>(e.b)]) continue;
            used[static_cast<std::size_t>(e.a)] = used[static_cast<std::size_t>(e.b)] = 1;
            out.push_back(flip(rng) ? Request{e.a, e.b} : Request{e.b, e.a});
            if (out.size() == m) break;
        }
    }
    return out;
}

RequestSequence seq_rw(const GuestGraph& g, std::size_t m, double p_repeat, std::uint64_t seed) {
    if (!(p_repeat >= 0.0 && p_repeat <= 1.0)) throw InputError("seq_rw: p_repeat must lie in [0, 1]");
    std::vector<PeerId> starts;
    for (PeerId v = 1; v <= g.n(); ++v) {
        if (g.degree(v) > 0) starts.push_back(v);
    }
    if (starts.empty()) throw InputError("seq_rw: guest graph has no edges to walk");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution repeat(p_repeat);
    PeerId at = starts[std::uniform_int_distribution<std::size_t>(0, starts.size() - 1)(rng)];
    RequestSequence out;
    out.reserve(m);
    while (out.size() < m) {
        if (!out.empty() && repeat(rng)) {
            out.push_back(out.back());
            continue;
        }
        const auto nbrs = g.neighbors(at);
        const PeerId next = nbrs[std::uniform_int_distribution<std::size_t>(0, nbrs.size() - 1)(rng)];
        out.push_back({at, next});
        at = next;
    }
    return out;
}

RequestSequence seq_uniform_edges(std::span<const Edge> edges, std::size_t m, std::uint64_t seed) {
    if (edges.empty()) throw InputError("seq_uniform_edges: no edges");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    std::bernoulli_distribution flip(0.5);
    RequestSequence out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Edge& e = edges[pick(rng)];
        out.push_back(flip(rng) ? Request{e.a, e.b} : Request{e.b, e.a});
    }
    return out;
}

std::string write_requests(std::span<const Request> sigma) {
    std::string out = "t,src,dst\n";
    for (std::size_t t = 0; t < sigma.size(); ++t) {
        out += std::to_string(t);
        out += ',';
        out += std::to_string(sigma[t].source);
        out += ',';
        out += std::to_string(sigma[t].dest);
        out += '\n';
    }
    return out;
}

RequestSequence read_requests(std::string_view text) {
    RequestSequence out;
    for_each_line(text, [&](int line_no, std::string_view raw) {
        auto fields = split_fields(strip_comment(raw));
        if (fields.empty()) return;
        if (out.empty() && fields.size() == 3 && fields[0] == "t") return;  // header
        long long t = 0;
        long long s = 0;
        long long d = 0;
        if (fields.size() != 3 || !parse_int(fields[0], t) || !parse_int(fields[1], s) || !parse_int(fields[2], d)) {
            throw InputError("request file line " + std::to_string(line_no) + ": expected 't src dst'");
        }
        if (t != static_cast<long long>(out.size())) {
            throw InputError("request file line " + std::to_string(line_no) + ": expected index " + std::to_string(out.size()));
        }
        if (s < 1 || d < 1 || s > std::numeric_limits<PeerId>::max() || d > std::numeric_limits<PeerId>::max()) {
            throw InputError("request file line " + std::to_string(line_no) + ": ids must be positive");
        }
        if (s == d) throw InputError("request file line " + std::to_string(line_no) + ": source equals destination");
        out.push_back({static_cast<PeerId>(s), static_cast<PeerId>(d)});
    });
    return out;
}

}  // namespace obst
