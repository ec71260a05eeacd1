#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "obst/types.hpp"

namespace obst {

/// Accumulates the number of rotations spent serving one request.
struct RotationLedger {
    std::int64_t count = 0;
};

struct CheckResult {
    bool ok = true;
    std::string violation;

    explicit operator bool() const { return ok; }
};

/// A rooted binary search tree over peer ids, stored as parent/child links in
/// arrays indexed by id. Every node carries the smallest and largest id of its
/// subtree so that a peer can forward a packet using only local state.
///
/// Ids need not be contiguous: a tree may hold any subset of [1, capacity].
class Bst {
public:
    Bst() = default;

    /// Builds the tree whose undirected edge set equals `edges` over ids 1..n.
    /// When several roots give a valid search-order orientation, picks the one
    /// of minimum height, then the lowest id. Throws InputError otherwise.
    static Bst from_edges(PeerId n, std::span<const Edge> edges);

    /// Inserts a uniformly random permutation of 1..n by leaf insertion.
    static Bst random(PeerId n, std::uint64_t seed);

    /// Inserts `keys` in the given order by leaf insertion. Feeding a tree's
    /// pre-order reproduces that tree exactly.
    static Bst from_insertion_order(std::span<const PeerId> keys);

    /// Parses the one-line-per-node pre-order format produced by serialize().
    static Bst parse(std::string_view text);

    [[nodiscard]] bool empty() const { return root_ == kNoPeer; }
    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] PeerId root() const { return root_; }
    [[nodiscard]] bool contains(PeerId id) const;

    [[nodiscard]] PeerId left(PeerId id) const { return node(id).left; }
    [[nodiscard]] PeerId right(PeerId id) const { return node(id).right; }
    [[nodiscard]] PeerId parent(PeerId id) const { return node(id).parent; }
    [[nodiscard]] PeerId sub_min(PeerId id) const { return node(id).sub_min; }
    [[nodiscard]] PeerId sub_max(PeerId id) const { return node(id).sub_max; }

    /// Number of edges between `id` and the root.
    [[nodiscard]] int depth(PeerId id) const;
    /// Maximum depth over all nodes; -1 for an empty tree.
    [[nodiscard]] int height() const;

    /// One forwarding decision of the local routing rule: stay, go to the
    /// child whose subtree range covers `dest`, or go up.
    [[nodiscard]] PeerId next_hop(PeerId current, PeerId dest) const;
    /// Full path u..v obtained by iterating next_hop.
    [[nodiscard]] std::vector<PeerId> route(PeerId u, PeerId v) const;
    /// Hop count of the unique tree path between u and v.
    [[nodiscard]] int distance(PeerId u, PeerId v) const;
    [[nodiscard]] PeerId lca(PeerId u, PeerId v) const;

    /// Single rotation lifting x above its parent.
    void rotate_up(PeerId x, RotationLedger& ledger);
    /// Bottom-up splay of x confined to the subtree rooted at `subtree_root`;
    /// afterwards x sits where `subtree_root` was.
    void splay_within(PeerId x, PeerId subtree_root, RotationLedger& ledger);
    /// Splays u to the top of T(lca(u, v)), then v to a child of u.
    void double_splay(PeerId u, PeerId v, RotationLedger& ledger);

    void insert_leaf(PeerId id);
    /// Removes `id`, swapping with its in-order predecessor when the left
    /// subtree is non-empty and with its successor otherwise.
    void remove(PeerId id);

    [[nodiscard]] std::vector<PeerId> inorder() const;
    [[nodiscard]] std::vector<PeerId> preorder() const;
    /// Canonical (a < b) edges, sorted.
    [[nodiscard]] std::vector<Edge> edges() const;

    /// Verifies search order, annotations, and link consistency.
    [[nodiscard]] CheckResult check() const;

    /// "id left|- right|-" per node, pre-order, newline-terminated.
    [[nodiscard]] std::string serialize() const;

    friend bool operator==(const Bst& a, const Bst& b);

private:
    struct Node {
        PeerId left = kNoPeer;
        PeerId right = kNoPeer;
        PeerId parent = kNoPeer;
        PeerId sub_min = kNoPeer;
        PeerId sub_max = kNoPeer;
        bool present = false;
    };

    [[nodiscard]] const Node& node(PeerId id) const;
    Node& node(PeerId id);
    void require(PeerId id) const;
    void ensure_capacity(PeerId id);
    void refresh(PeerId id);
    void refresh_path(PeerId from);
    void replace_child(PeerId parent, PeerId old_child, PeerId new_child);

    std::vector<Node> nodes_;  // index 0 unused
    PeerId root_ = kNoPeer;
    std::size_t size_ = 0;
};

}  // namespace obst
