#include "obst/perfect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "obst/rng.hpp"

namespace obst {

namespace {

void require_matching(std::span<const Edge> matching) {
    std::vector<PeerId> ends;
    ends.reserve(matching.size() * 2);
    for (const Edge& e : matching) {
        if (e.a == e.b) throw InputError("matching contains a self pair at " + std::to_string(e.a));
        if (e.a < 1 || e.b < 1) throw InputError("matching ids must be positive");
        ends.push_back(e.a);
        ends.push_back(e.b);
    }
    std::sort(ends.begin(), ends.end());
    if (auto it = std::adjacent_find(ends.begin(), ends.end()); it != ends.end()) {
        throw InputError("not a matching: peer " + std::to_string(*it) + " appears twice");
    }
}

std::size_t longest_increasing(const std::vector<PeerId>& seq) {
    std::vector<PeerId> tails;
    for (PeerId v : seq) {
        auto it = std::lower_bound(tails.begin(), tails.end(), v);
        if (it == tails.end()) {
            tails.push_back(v);
        } else {
            *it = v;
        }
    }
    return tails.size();
}

}  // namespace

bool intersects(Edge r1, Edge r2) {
    if (r1.a == r1.b || r2.a == r2.b) throw InputError("intersects: requests need distinct endpoints");
    const PeerId lo = std::min(r1.a, r1.b);
    const PeerId hi = std::max(r1.a, r1.b);
    auto inside = [&](PeerId x) { return lo < x && x < hi; };
    return inside(r2.a) != inside(r2.b);
}

std::size_t max_mutually_intersecting(std::span<const Edge> matching) {
    require_matching(matching);
    if (matching.empty()) return 0;
    std::vector<Edge> chords;
    chords.reserve(matching.size());
    for (const Edge& e : matching) chords.push_back(make_edge(e.a, e.b));
    std::sort(chords.begin(), chords.end());
    std::size_t best = 1;
    std::vector<PeerId> rights;
    for (std::size_t i = 0; i < chords.size(); ++i) {
        const Edge first = chords[i];
        rights.clear();
        for (std::size_t j = i + 1; j < chords.size() && chords[j].a < first.b; ++j) {
            if (chords[j].b > first.b) rights.push_back(chords[j].b);
        }
        best = std::max(best, 1 + longest_increasing(rights));
    }
    return best;
}

std::vector<Edge> random_perfect_matching(PeerId n, std::mt19937_64& rng) {
    if (n < 2 || n % 2 != 0) throw InputError("random_perfect_matching: n must be even and >= 2");
    std::vector<PeerId> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), PeerId{1});
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<Edge> out;
    out.reserve(ids.size() / 2);
    for (std::size_t i = 0; i + 1 < ids.size(); i += 2) out.push_back(make_edge(ids[i], ids[i + 1]));
    return out;
}

double PerfectOverlayTrial::standard_error() const {
    if (trials == 0) return 0.0;
    const double p = frequency();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

PerfectOverlayTrial perfect_overlay_montecarlo(PeerId n, PeerId r, std::size_t trials, std::uint64_t seed) {
    if (n < 2 || n % 2 != 0) throw InputError("perfect_overlay_montecarlo: n must be even and >= 2");
    if (r < 1 || n % r != 0) throw InputError("perfect_overlay_montecarlo: r must divide n");
    const double nd = static_cast<double>(n);
    if (static_cast<double>(r) < std::sqrt(nd * std::log(nd))) {
        throw InputError("perfect_overlay_montecarlo: r must be at least sqrt(n ln n) = " +
                         std::to_string(std::sqrt(nd * std::log(nd))));
    }
    if (trials == 0) throw InputError("perfect_overlay_montecarlo: trials must be >= 1");
    PerfectOverlayTrial out;
    out.trials = trials;
    out.k = static_cast<std::size_t>(n / r);
    const std::size_t half = out.k / 2;
    for (std::size_t t = 0; t < trials; ++t) {
        std::mt19937_64 rng(derive_seed(seed, seed_stream::kReplica, t));
        const auto matching = random_perfect_matching(n, rng);
        const std::size_t size = max_mutually_intersecting(matching);
        out.hits += size >= out.k ? 1 : 0;
        out.strict_hits += size >= out.k + 1 ? 1 : 0;

        std::vector<char> linked(half, 0);
        for (const Edge& e : matching) {
            const auto ia = static_cast<std::size_t>((e.a - 1) / r);
            const auto ib = static_cast<std::size_t>((e.b - 1) / r);
            if (ia < half && ib == ia + half) linked[ia] = 1;
        }
        out.scenario_hits += std::all_of(linked.begin(), linked.end(), [](char c) { return c != 0; }) ? 1 : 0;
    }
    return out;
}

Bst embed_nonintersecting_matching(std::span<const Edge> matching) {
    require_matching(matching);
    for (std::size_t i = 0; i < matching.size(); ++i) {
        for (std::size_t j = i + 1; j < matching.size(); ++j) {
            if (intersects(matching[i], matching[j])) {
                throw InputError("embed_nonintersecting_matching: pairs {" + std::to_string(matching[i].a) + "," +
                                 std::to_string(matching[i].b) + "} and {" + std::to_string(matching[j].a) + "," +
                                 std::to_string(matching[j].b) + "} intersect");
            }
        }
    }
    std::vector<Edge> pairs;
    for (const Edge& e : matching) pairs.push_back(make_edge(e.a, e.b));
    std::sort(pairs.begin(), pairs.end(), [](const Edge& x, const Edge& y) {
        const PeerId wx = x.b - x.a;
        const PeerId wy = y.b - y.a;
        return wx != wy ? wx > wy : x.a < y.a;
    });
    std::vector<PeerId> order;
    for (const Edge& e : pairs) {
        order.push_back(e.a);
        order.push_back(e.b);
    }
    return Bst::from_insertion_order(order);
}

}  // namespace obst
