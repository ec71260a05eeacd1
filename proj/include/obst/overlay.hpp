#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "obst/bst.hpp"
#include "obst/graph.hpp"
#include "obst/types.hpp"

namespace obst {

/// Cost of serving one request. `tree` is the 0-based index of the BST used.
struct CostRecord {
    std::int64_t t = 0;
    int distance = 0;
    std::int64_t rotations = 0;
    int tree = 0;
};

enum class CostMode { kStatic, kAdjusting };

/// Per-request costs of one run. Cost of a request is distance + 1 + rotations.
class CostLedger {
public:
    explicit CostLedger(CostMode mode = CostMode::kStatic) : mode_(mode) {}

    void add(const CostRecord& r);

    [[nodiscard]] CostMode mode() const { return mode_; }
    [[nodiscard]] const std::vector<CostRecord>& records() const { return records_; }
    [[nodiscard]] std::size_t size() const { return records_.size(); }
    [[nodiscard]] std::int64_t total_distance() const { return total_distance_; }
    [[nodiscard]] std::int64_t total_rotations() const { return total_rotations_; }

    /// Running averages; 0 for an empty ledger.
    [[nodiscard]] double average_cost() const;
    [[nodiscard]] double average_distance() const;
    /// Average distance over records [first, last).
    [[nodiscard]] double average_distance(std::size_t first, std::size_t last) const;

private:
    CostMode mode_;
    std::vector<CostRecord> records_;
    std::int64_t total_distance_ = 0;
    std::int64_t total_rotations_ = 0;
};

struct TreeChoice {
    int tree = 0;
    int distance = 0;
};

struct RunOptions {
    bool adjust = true;
    /// Adjust only on every j-th request (1 = every request).
    int adjust_every = 1;
    /// Peers that leave and immediately rejoin after each request.
    int churn = 0;
};

/// OBST(k): k binary search trees over one peer set. The overlay graph is the
/// union of the trees' edges. Requests are routed on the single tree where the
/// endpoints are closest; in adjusting mode that tree is double-splayed.
class Overlay {
public:
    /// k independent random BSTs over 1..n; tree i uses
    /// derive_seed(seed, kHostTrees, i).
    static Overlay new_random(PeerId n, int k, std::uint64_t seed);
    /// All trees must span the same id set.
    static Overlay from_trees(std::vector<Bst> trees, std::uint64_t seed = 0);
    /// Reads the "n k" header followed by k tree dumps. Runs check().
    static Overlay parse_snapshot(std::string_view text, std::uint64_t seed = 0);

    [[nodiscard]] int k() const { return static_cast<int>(trees_.size()); }
    /// Current number of peers.
    [[nodiscard]] PeerId n() const { return static_cast<PeerId>(peers_.size()); }
    [[nodiscard]] const std::vector<Bst>& trees() const { return trees_; }
    [[nodiscard]] const Bst& tree(int i) const { return trees_.at(static_cast<std::size_t>(i)); }
    /// Sorted ids of the current peers.
    [[nodiscard]] const std::vector<PeerId>& peers() const { return peers_; }
    [[nodiscard]] bool contains(PeerId id) const;

    /// Tree minimizing the hop distance between u and v; ties go to the
    /// lowest index.
    [[nodiscard]] TreeChoice closest_tree(PeerId u, PeerId v) const;

    /// Distance is charged before any adjustment. u == v costs nothing.
    CostRecord serve(PeerId u, PeerId v, bool adjust, std::int64_t t = 0);
    CostLedger run(std::span<const Request> sigma, const RunOptions& options);

    void join(PeerId id);
    void leave(PeerId id);
    /// `lambda` distinct random peers each leave all trees and rejoin as leaves
    /// under the same id.
    void churn_step(int lambda);

    [[nodiscard]] Graph union_graph() const;

    /// Every tree valid and all trees over the same id set.
    [[nodiscard]] CheckResult check() const;

    [[nodiscard]] std::string snapshot() const;

private:
    Overlay(std::vector<Bst> trees, std::uint64_t seed);

    std::vector<Bst> trees_;
    std::vector<PeerId> peers_;
    std::mt19937_64 rng_;
};

}  // namespace obst
