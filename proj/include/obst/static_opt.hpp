#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "obst/bst.hpp"
#include "obst/overlay.hpp"
#include "obst/types.hpp"

namespace obst {

// Weight vectors throughout this header are 0-based: weights[i] belongs to
// peer i + 1.

/// Frequencies extracted from a request sequence over peers 1..n.
struct EmpiricalMeasures {
    PeerId n = 0;
    std::size_t m = 0;
    std::vector<double> x;  // source frequency
    std::vector<double> y;  // destination frequency
    std::vector<double> z;  // (x + y) / 2
    /// Distinct ordered pairs with their frequency, sorted by pair.
    std::vector<std::pair<Request, double>> f;
};

EmpiricalMeasures empirical_measures(std::span<const Request> sigma, PeerId n);

/// Shannon entropy in bits, 0 log 0 = 0. Rejects negative mass and vectors
/// whose total differs from 1 by more than 1e-6.
double entropy(std::span<const double> p);

inline constexpr double kLog2Three = 1.5849625007211562;
/// 1 / (1 - log2(sqrt(5) - 1)), the weight-balanced tree constant (~1.4404).
double balance_constant();

/// Sum of weight * depth (in edges).
double weighted_depth(const Bst& t, std::span<const double> weights);

/// Weight-balanced tree: each subtree root minimizes |weight left - weight
/// right| over its id interval, smallest id on ties.
Bst mehlhorn_tree(std::span<const double> weights);

struct WeightedTree {
    Bst tree;
    double cost = 0.0;  // sum of weight * depth
};

/// Exact minimum of sum(weight * depth) by interval dynamic programming with
/// Knuth's root monotonicity.
WeightedTree optimal_lookup_bst(std::span<const double> weights, std::size_t limit = 512);

/// Every BST over 1..n as a parent array (parent[i] of peer i + 1, 0 marks the
/// root). n <= 12.
std::vector<std::vector<PeerId>> enumerate_bsts(PeerId n);
/// Rebuilds the Bst described by a parent array.
Bst bst_from_parents(std::span<const PeerId> parent);

// ---------------------------------------------------------------------------
// Request partitioning across k trees
// ---------------------------------------------------------------------------

struct PartitionOptions {
    /// Merge (i, j) and (j, i) into one class.
    bool symmetric = false;
    /// Exhaustive branch-and-bound when the class count is at most this.
    std::size_t exact_limit = 20;
};

struct Partition {
    std::vector<Request> classes;   // distinct request classes, heaviest first
    std::vector<double> frequency;  // per class
    std::vector<int> assignment;    // per class, set index in [0, k)
    std::vector<double> alphas;     // total frequency per set
    bool exact = false;
    bool symmetric = false;

    [[nodiscard]] int k() const { return static_cast<int>(alphas.size()); }
    [[nodiscard]] double h_alpha() const;
    /// Set holding request r; -1 if r is not a class.
    [[nodiscard]] int set_of(Request r) const;
};

/// Spreads the request classes of sigma over k sets to make H(alpha) large:
/// exhaustive for few classes, otherwise heaviest-first into the lightest set.
Partition partition_requests(std::span<const Request> sigma, int k, const PartitionOptions& options = {});

/// Node weights z_i = (x_i + y_i) / 2 computed over the classes of set i only,
/// renormalized. Empty sets yield an all-zero vector.
std::vector<double> set_node_weights(const Partition& p, int set, PeerId n);

struct StaticObst {
    Overlay overlay;
    Partition partition;
};

/// Partitions sigma and builds one weight-balanced tree per set from that
/// set's node weights (the global weights for an empty set).
StaticObst build_static_obst(std::span<const Request> sigma, PeerId n, int k, const PartitionOptions& options = {});

// ---------------------------------------------------------------------------
// Entropy bounds (hops, log base 2)
// ---------------------------------------------------------------------------

struct BoundReport {
    int k = 1;
    double h_x = 0.0;
    double h_y = 0.0;
    double h_z = 0.0;
    double h_alpha = 0.0;
    double balance_constant = 0.0;
    /// Lookup cost of any single BST is at least H(Y) / log 3.
    double lookup_lower = 0.0;
    /// A weight-balanced lookup tree costs at most 2 + c H(Y).
    double balanced_upper = 0.0;
    /// Some single-tree overlay routes at cost at most 4 + 2c H(Z).
    double single_tree_upper = 0.0;
    /// Some k-tree overlay routes at cost at most 4 + c (2H(Z) - 2H(alpha)).
    double k_tree_upper = 0.0;
    /// Lookups on k trees cost at least (H(Y) - log k) / log 3, clamped at 0.
    double k_lookup_lower = 0.0;
    bool k_lookup_vacuous = false;
};

BoundReport bound_report(std::span<const Request> sigma, PeerId n, const Partition& partition);
std::string to_json(const BoundReport& r);

/// Average over lookups of the smallest depth among `trees`.
double lookup_cost(std::span<const Bst> trees, std::span<const PeerId> lookups);

struct BruteForceResult {
    Bst tree;
    double cost = 0.0;  // average of distance + 1
    std::size_t examined = 0;
};

/// Best single static tree for routing sigma, by enumerating every BST.
BruteForceResult brute_force_optimal_obst1(std::span<const Request> sigma, PeerId n, PeerId limit = 12);

}  // namespace obst
