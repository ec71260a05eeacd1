#include <gtest/gtest.h>

#include <random>

#include "obst/bst.hpp"
#include "oracles.hpp"

using namespace obst;

namespace {

Bst chain(PeerId n) {
    std::vector<PeerId> keys(static_cast<std::size_t>(n));
    for (PeerId i = 0; i < n; ++i) keys[static_cast<std::size_t>(i)] = i + 1;
    return Bst::from_insertion_order(keys);
}

}  // namespace

TEST(Bst, RandomTreesAreValid) {
    for (PeerId n : {1, 2, 3, 10, 100, 1000}) {
        for (std::uint64_t s = 0; s < 5; ++s) {
            const Bst t = Bst::random(n, s);
            EXPECT_TRUE(t.check()) << t.check().violation;
            EXPECT_TRUE(oracle::valid_bst(t, static_cast<std::size_t>(n)));
            EXPECT_EQ(t.inorder().size(), static_cast<std::size_t>(n));
        }
    }
}

TEST(Bst, SameSeedSameTree) {
    EXPECT_EQ(Bst::random(200, 7), Bst::random(200, 7));
    EXPECT_NE(Bst::random(200, 7).serialize(), Bst::random(200, 8).serialize());
}

TEST(Bst, AnnotationsOnSmallTree) {
    const std::vector<PeerId> keys{4, 2, 6, 1, 3, 5, 7};
    const Bst t = Bst::from_insertion_order(keys);
    EXPECT_EQ(t.root(), 4);
    EXPECT_EQ(t.sub_min(2), 1);
    EXPECT_EQ(t.sub_max(2), 3);
    EXPECT_EQ(t.sub_min(4), 1);
    EXPECT_EQ(t.sub_max(4), 7);
    EXPECT_EQ(t.sub_min(5), 5);
    EXPECT_EQ(t.height(), 2);
}

TEST(Bst, RoutingMatchesBfsExhaustive) {
    for (PeerId n : {1, 2, 5, 17, 64}) {
        const Bst t = Bst::random(n, 42 + static_cast<std::uint64_t>(n));
        const auto edges = t.edges();
        const auto par = oracle::parents_of(t, n);
        for (PeerId u = 1; u <= n; ++u) {
            const auto d = oracle::bfs(n, edges, u);
            for (PeerId v = 1; v <= n; ++v) {
                const auto path = t.route(u, v);
                ASSERT_EQ(static_cast<int>(path.size()) - 1, d[static_cast<std::size_t>(v)]) << u << "->" << v;
                EXPECT_EQ(path.front(), u);
                EXPECT_EQ(path.back(), v);
                EXPECT_EQ(t.distance(u, v), d[static_cast<std::size_t>(v)]);
                EXPECT_EQ(t.lca(u, v), oracle::lca(par, u, v));
            }
        }
    }
}

TEST(Bst, RouteOnChainAndStay) {
    const Bst t = chain(5);
    EXPECT_EQ(t.route(1, 5), (std::vector<PeerId>{1, 2, 3, 4, 5}));
    EXPECT_EQ(t.route(5, 1), (std::vector<PeerId>{5, 4, 3, 2, 1}));
    EXPECT_EQ(t.next_hop(3, 3), 3);
    EXPECT_THROW((void)t.next_hop(3, 9), Error);
}

TEST(Bst, RotateUpKeepsOrder) {
    Bst t = chain(3);
    RotationLedger led;
    t.rotate_up(2, led);
    EXPECT_EQ(led.count, 1);
    EXPECT_EQ(t.root(), 2);
    EXPECT_EQ(t.left(2), 1);
    EXPECT_EQ(t.right(2), 3);
    EXPECT_TRUE(oracle::valid_bst(t, 3));
    EXPECT_THROW(t.rotate_up(2, led), Error);
}

TEST(Bst, SplayWithinSubtreeOnly) {
    Bst t = Bst::random(50, 3);
    std::mt19937_64 rng(9);
    for (int it = 0; it < 500; ++it) {
        const PeerId x = static_cast<PeerId>(rng() % 50 + 1);
        // pick an ancestor of x as the subtree root
        const auto par = oracle::parents_of(t, 50);
        auto anc = oracle::ancestors(par, x);
        const PeerId top = anc[rng() % anc.size()];
        const PeerId above = par[static_cast<std::size_t>(top)];
        RotationLedger led;
        t.splay_within(x, top, led);
        ASSERT_TRUE(oracle::valid_bst(t, 50));
        EXPECT_EQ(t.parent(x), above);
        // every rotation lifts x one level
        EXPECT_EQ(led.count, std::find(anc.begin(), anc.end(), top) - anc.begin());
    }
}

TEST(Bst, DoubleSplayMakesNeighbours) {
    std::mt19937_64 rng(5);
    for (PeerId n : {2, 3, 8, 40}) {
        Bst t = Bst::random(n, 11);
        for (int it = 0; it < 2000; ++it) {
            const PeerId u = static_cast<PeerId>(rng() % static_cast<std::uint64_t>(n) + 1);
            PeerId v = static_cast<PeerId>(rng() % static_cast<std::uint64_t>(n) + 1);
            if (u == v) continue;
            const auto par = oracle::parents_of(t, n);
            const PeerId l = oracle::lca(par, u, v);
            const PeerId above = par[static_cast<std::size_t>(l)];
            RotationLedger led;
            t.double_splay(u, v, led);
            ASSERT_TRUE(oracle::valid_bst(t, static_cast<std::size_t>(n)));
            const auto after = oracle::parents_of(t, n);
            ASSERT_EQ(oracle::tree_distance(after, u, v), 1);
            // u takes the place of the old lca
            EXPECT_EQ(after[static_cast<std::size_t>(u)], above);
            EXPECT_EQ(after[static_cast<std::size_t>(v)], u);
        }
    }
}

TEST(Bst, DoubleSplayOnAdjacentPairIsCheap) {
    Bst t = Bst::from_insertion_order(std::vector<PeerId>{2, 1, 3});
    RotationLedger led;
    t.double_splay(2, 1, led);
    EXPECT_EQ(led.count, 0);
    t.double_splay(1, 2, led);
    EXPECT_EQ(led.count, 1);
    EXPECT_EQ(t.root(), 1);
}

TEST(Bst, InsertAndRemove) {
    Bst t = Bst::random(30, 1);
    std::mt19937_64 rng(2);
    std::vector<char> in(31, 1);
    std::size_t size = 30;
    for (int it = 0; it < 3000; ++it) {
        const PeerId x = static_cast<PeerId>(rng() % 30 + 1);
        if (in[static_cast<std::size_t>(x)]) {
            if (size == 1) continue;
            t.remove(x);
            in[static_cast<std::size_t>(x)] = 0;
            --size;
        } else {
            t.insert_leaf(x);
            in[static_cast<std::size_t>(x)] = 1;
            ++size;
            EXPECT_EQ(t.left(x), kNoPeer);
            EXPECT_EQ(t.right(x), kNoPeer);
        }
        ASSERT_TRUE(oracle::valid_bst(t, size));
        ASSERT_TRUE(t.check()) << t.check().violation;
        EXPECT_EQ(t.contains(x), in[static_cast<std::size_t>(x)] != 0);
    }
}

TEST(Bst, RemovePrefersPredecessor) {
    Bst t = Bst::from_insertion_order(std::vector<PeerId>{4, 2, 6, 1, 3, 5, 7});
    t.remove(4);
    EXPECT_EQ(t.root(), 3);
    Bst u = Bst::from_insertion_order(std::vector<PeerId>{4, 6, 5, 7});
    u.remove(4);
    EXPECT_EQ(u.root(), 5);
}

TEST(Bst, InsertDuplicateThrows) {
    Bst t = chain(3);
    EXPECT_THROW(t.insert_leaf(2), InputError);
    EXPECT_THROW(t.remove(9), Error);
}

TEST(Bst, SerializeParseRoundTrip) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Bst t = Bst::random(60, s);
        const Bst p = Bst::parse(t.serialize());
        EXPECT_EQ(t, p);
        EXPECT_EQ(p.serialize(), t.serialize());
        EXPECT_EQ(Bst::from_insertion_order(t.preorder()), t);
    }
}

TEST(Bst, SerializeFormat) {
    const Bst t = Bst::from_insertion_order(std::vector<PeerId>{2, 1, 3});
    EXPECT_EQ(t.serialize(), "2 1 3\n1 - -\n3 - -\n");
}

TEST(Bst, ParseRejectsGarbage) {
    EXPECT_THROW(Bst::parse("1 2 x\n"), InputError);
    EXPECT_THROW(Bst::parse("2 1 -\n1 2 -\n"), InputError);
    // search order is left to check()
    const Bst bad = Bst::parse("2 3 -\n3 - -\n");
    const auto r = bad.check();
    EXPECT_FALSE(r.ok);
    EXPECT_NE(r.violation.find("search-order"), std::string::npos) << r.violation;
}

TEST(Bst, FromEdgesRecoversTree) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Bst t = Bst::random(25, s);
        const auto edges = t.edges();
        const Bst r = Bst::from_edges(25, edges);
        EXPECT_EQ(r.edges(), edges);
        EXPECT_TRUE(oracle::valid_bst(r, 25));
    }
    // path 1-2-3: roots 1, 2 and 3 are all valid; height picks 2
    const std::vector<Edge> path{{1, 2}, {2, 3}};
    EXPECT_EQ(Bst::from_edges(3, path).root(), 2);
}

TEST(Bst, FromEdgesRejectsNonBst) {
    // star centred at 1 cannot be a BST
    const std::vector<Edge> star{{1, 2}, {1, 3}, {1, 4}};
    EXPECT_THROW(Bst::from_edges(4, star), InputError);
    const std::vector<Edge> crossing{{1, 3}, {2, 4}, {3, 4}};
    EXPECT_THROW(Bst::from_edges(4, crossing), InputError);
    const std::vector<Edge> short_list{{1, 2}};
    EXPECT_THROW(Bst::from_edges(3, short_list), InputError);
}
