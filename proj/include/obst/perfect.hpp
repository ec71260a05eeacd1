#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "obst/bst.hpp"
#include "obst/types.hpp"

namespace obst {

/// Two requests intersect when exactly one endpoint of the second lies
/// strictly between the endpoints of the first. Intersecting requests can
/// never both be edges of one BST.
bool intersects(Edge r1, Edge r2);

/// Size of the largest set of pairwise intersecting requests in a matching.
///
/// Sorted by left endpoint, a pairwise-crossing family a1 < ... < at < b1 <
/// ... < bt is fixed by its first chord plus an increasing run of right
/// endpoints among chords starting inside it, so the maximum is found exactly
/// with one longest-increasing-subsequence pass per chord.
std::size_t max_mutually_intersecting(std::span<const Edge> matching);

/// Uniform perfect matching on 1..n (n even).
std::vector<Edge> random_perfect_matching(PeerId n, std::mt19937_64& rng);

struct PerfectOverlayTrial {
    std::size_t trials = 0;
    std::size_t k = 0;             // n / r
    std::size_t hits = 0;          // largest crossing set >= k
    std::size_t strict_hits = 0;   // largest crossing set >= k + 1
    std::size_t scenario_hits = 0; // interval I_i linked to I_{i+k/2} for every i

    [[nodiscard]] double frequency() const { return trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0; }
    [[nodiscard]] double strict_frequency() const {
        return trials ? static_cast<double>(strict_hits) / static_cast<double>(trials) : 0.0;
    }
    [[nodiscard]] double scenario_frequency() const {
        return trials ? static_cast<double>(scenario_hits) / static_cast<double>(trials) : 0.0;
    }
    /// Binomial standard error of frequency().
    [[nodiscard]] double standard_error() const;
};

/// Samples random perfect matchings on 1..n and counts those that force more
/// than n / r trees for a perfect overlay. Requires r >= sqrt(n ln n), r | n.
PerfectOverlayTrial perfect_overlay_montecarlo(PeerId n, PeerId r, std::size_t trials, std::uint64_t seed);

/// Single BST in which every pair of a non-intersecting matching is adjacent:
/// pairs are inserted as leaves, widest first.
Bst embed_nonintersecting_matching(std::span<const Edge> matching);

}  // namespace obst
