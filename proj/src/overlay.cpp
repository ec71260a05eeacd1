#include "obst/overlay.hpp"

#include <algorithm>
#include <sstream>

#include "obst/rng.hpp"

namespace obst {

void CostLedger::add(const CostRecord& r) {
    records_.push_back(r);
    total_distance_ += r.distance;
    total_rotations_ += r.rotations;
}

double CostLedger::average_cost() const {
    if (records_.empty()) return 0.0;
    const auto m = static_cast<double>(records_.size());
    return (static_cast<double>(total_distance_) + m + static_cast<double>(total_rotations_)) / m;
}

double CostLedger::average_distance() const {
    if (records_.empty()) return 0.0;
    return static_cast<double>(total_distance_) / static_cast<double>(records_.size());
}

double CostLedger::average_distance(std::size_t first, std::size_t last) const {
    last = std::min(last, records_.size());
    if (first >= last) return 0.0;
    std::int64_t sum = 0;
    for (std::size_t i = first; i < last; ++i) sum += records_[i].distance;
    return static_cast<double>(sum) / static_cast<double>(last - first);
}

Overlay::Overlay(std::vector<Bst> trees, std::uint64_t seed) : trees_(std::move(trees)), rng_(seed) {
    if (trees_.empty()) throw InputError("an overlay needs at least one tree");
    peers_ = trees_.front().inorder();
    for (std::size_t i = 1; i < trees_.size(); ++i) {
        if (trees_[i].inorder() != peers_) {
            throw InputError("tree " + std::to_string(i) + " spans a different id set than tree 0");
        }
    }
}

Overlay Overlay::new_random(PeerId n, int k, std::uint64_t seed) {
    if (n < 1) throw InputError("new_random: n must be >= 1");
    if (k < 1) throw InputError("new_random: k must be >= 1");
    std::vector<Bst> trees;
    trees.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        trees.push_back(Bst::random(n, derive_seed(seed, seed_stream::kHostTrees, static_cast<std::uint64_t>(i))));
    }
    return Overlay(std::move(trees), derive_seed(seed, seed_stream::kOverlayRng));
}

Overlay Overlay::from_trees(std::vector<Bst> trees, std::uint64_t seed) { return Overlay(std::move(trees), seed); }

Overlay Overlay::parse_snapshot(std::string_view text, std::uint64_t seed) {
    std::istringstream in{std::string(text)};
    std::string header;
    if (!std::getline(in, header)) throw InputError("snapshot: missing 'n k' header");
    std::istringstream hs(header);
    long long n = 0;
    long long k = 0;
    std::string extra;
    if (!(hs >> n >> k) || (hs >> extra) || n < 1 || k < 1) {
        throw InputError("snapshot line 1: expected 'n k' with n, k >= 1");
    }
    std::vector<Bst> trees;
    std::string line;
    int line_no = 1;
    for (long long i = 0; i < k; ++i) {
        std::string block;
        long long lines = 0;
        while (lines < n && std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            block += line;
            block += '\n';
            ++lines;
        }
        if (lines < n) {
            throw InputError("snapshot: tree " + std::to_string(i) + " truncated at line " + std::to_string(line_no));
        }
        try {
            trees.push_back(Bst::parse(block));
        } catch (const InputError& e) {
            throw InputError("snapshot tree " + std::to_string(i) + ": " + e.what());
        }
    }
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty()) throw InputError("snapshot: trailing data at line " + std::to_string(line_no));
    }
    for (std::size_t i = 0; i < trees.size(); ++i) {
        if (auto c = trees[i].check(); !c) throw InvariantViolation("snapshot tree " + std::to_string(i) + ": " + c.violation);
    }
    return Overlay(std::move(trees), seed);
}

bool Overlay::contains(PeerId id) const { return std::binary_search(peers_.begin(), peers_.end(), id); }

TreeChoice Overlay::closest_tree(PeerId u, PeerId v) const {
    TreeChoice best{0, trees_.front().distance(u, v)};
    for (int i = 1; i < k() && best.distance > 1; ++i) {
        const int d = trees_[static_cast<std::size_t>(i)].distance(u, v);
        if (d < best.distance) best = {i, d};
    }
    return best;
}

CostRecord Overlay::serve(PeerId u, PeerId v, bool adjust, std::int64_t t) {
    CostRecord rec;
    rec.t = t;
    if (u == v) {
        if (!contains(u)) throw InputError("peer " + std::to_string(u) + " is not in the overlay");
        return rec;
    }
    const TreeChoice choice = closest_tree(u, v);
    rec.distance = choice.distance;
    rec.tree = choice.tree;
    if (adjust) {
        RotationLedger ledger;
        trees_[static_cast<std::size_t>(choice.tree)].double_splay(u, v, ledger);
        rec.rotations = ledger.count;
    }
    return rec;
}

CostLedger Overlay::run(std::span<const Request> sigma, const RunOptions& options) {
    if (options.adjust_every < 1) throw InputError("adjust_every must be >= 1");
    if (options.churn < 0) throw InputError("churn must be >= 0");
    CostLedger ledger(options.adjust ? CostMode::kAdjusting : CostMode::kStatic);
    for (std::size_t t = 0; t < sigma.size(); ++t) {
        const bool adjust = options.adjust && (t + 1) % static_cast<std::size_t>(options.adjust_every) == 0;
        try {
            ledger.add(serve(sigma[t].source, sigma[t].dest, adjust, static_cast<std::int64_t>(t)));
        } catch (const InputError& e) {
            throw InputError("request " + std::to_string(t) + ": " + e.what());
        }
        if (options.churn > 0) churn_step(options.churn);
    }
    return ledger;
}

void Overlay::join(PeerId id) {
    if (contains(id)) throw InputError("join: peer " + std::to_string(id) + " already present");
    for (Bst& t : trees_) t.insert_leaf(id);
    peers_.insert(std::lower_bound(peers_.begin(), peers_.end(), id), id);
}

void Overlay::leave(PeerId id) {
    auto it = std::lower_bound(peers_.begin(), peers_.end(), id);
    if (it == peers_.end() || *it != id) throw InputError("leave: peer " + std::to_string(id) + " is not present");
    for (Bst& t : trees_) t.remove(id);
    peers_.erase(it);
}

void Overlay::churn_step(int lambda) {
    if (lambda < 0 || lambda > n()) throw InputError("churn_step: lambda must lie in [0, n]");
    if (lambda == 0) return;
    // Partial Fisher-Yates over a copy picks lambda distinct peers.
    std::vector<PeerId> pool = peers_;
    for (int i = 0; i < lambda; ++i) {
        std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), pool.size() - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[pick(rng_)]);
        const PeerId id = pool[static_cast<std::size_t>(i)];
        leave(id);
        join(id);
    }
}

Graph Overlay::union_graph() const {
    const PeerId max_id = peers_.empty() ? 0 : peers_.back();
    Graph g(max_id);
    for (const Bst& t : trees_) {
        for (const Edge& e : t.edges()) g.add_edge(e.a, e.b);
    }
    return g;
}

CheckResult Overlay::check() const {
    for (std::size_t i = 0; i < trees_.size(); ++i) {
        if (auto c = trees_[i].check(); !c) return {false, "tree " + std::to_string(i) + ": " + c.violation};
        if (trees_[i].inorder() != peers_) return {false, "tree " + std::to_string(i) + " spans a different id set"};
    }
    return {};
}

std::string Overlay::snapshot() const {
    std::string out = std::to_string(n()) + " " + std::to_string(k()) + "\n";
    for (const Bst& t : trees_) out += t.serialize();
    return out;
}

}  // namespace obst
