#include <gtest/gtest.h>

#include <random>

#include "obst/perfect.hpp"
#include "oracles.hpp"

using namespace obst;

TEST(Perfect, IntersectsExamples) {
    EXPECT_TRUE(intersects({1, 4}, {2, 6}));
    EXPECT_FALSE(intersects({1, 4}, {2, 3}));
    EXPECT_FALSE(intersects({1, 4}, {5, 6}));
    EXPECT_TRUE(intersects({4, 1}, {6, 2}));
    EXPECT_THROW(intersects({1, 1}, {2, 3}), InputError);
}

TEST(Perfect, IntersectingPairsNeverShareATree) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto e = Bst::random(40, s).edges();
        for (std::size_t i = 0; i < e.size(); ++i) {
            for (std::size_t j = i + 1; j < e.size(); ++j) {
                // shared endpoints are not requests of a matching; skip them
                if (e[i].a == e[j].a || e[i].a == e[j].b || e[i].b == e[j].a || e[i].b == e[j].b) continue;
                ASSERT_FALSE(intersects(e[i], e[j]));
            }
        }
    }
}

TEST(Perfect, MaxIntersectingExamples) {
    EXPECT_EQ(max_mutually_intersecting(std::vector<Edge>{{1, 8}, {2, 7}, {3, 6}}), 1u);
    EXPECT_EQ(max_mutually_intersecting(std::vector<Edge>{{1, 3}, {2, 4}}), 2u);
    for (PeerId k = 1; k <= 12; ++k) {
        std::vector<Edge> fan;
        for (PeerId i = 1; i <= k; ++i) fan.push_back({i, i + k});
        EXPECT_EQ(max_mutually_intersecting(fan), static_cast<std::size_t>(k));
    }
    EXPECT_EQ(max_mutually_intersecting(std::vector<Edge>{}), 0u);
    EXPECT_THROW(max_mutually_intersecting(std::vector<Edge>{{1, 2}, {2, 3}}), InputError);
}

TEST(Perfect, MaxIntersectingMatchesCliqueSearch) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 300; ++t) {
        const PeerId n = static_cast<PeerId>(2 * (1 + rng() % 20));
        const auto m = random_perfect_matching(n, rng);
        ASSERT_EQ(max_mutually_intersecting(m), oracle::max_crossing_clique(m)) << n;
    }
}

TEST(Perfect, RandomMatchingIsPerfect) {
    std::mt19937_64 rng(2);
    const auto m = random_perfect_matching(100, rng);
    std::vector<int> seen(101, 0);
    for (const Edge& e : m) {
        ++seen[static_cast<std::size_t>(e.a)];
        ++seen[static_cast<std::size_t>(e.b)];
    }
    for (PeerId v = 1; v <= 100; ++v) EXPECT_EQ(seen[static_cast<std::size_t>(v)], 1);
    EXPECT_THROW(random_perfect_matching(7, rng), InputError);
}

TEST(Perfect, MonteCarloSingleTree) {
    // n = 4, r = 4: one of the three perfect matchings crosses
    const auto t = perfect_overlay_montecarlo(4, 4, 6000, 3);
    EXPECT_EQ(t.k, 1u);
    EXPECT_DOUBLE_EQ(t.frequency(), 1.0);
    EXPECT_NEAR(t.strict_frequency(), 1.0 / 3.0, 0.03);
}

TEST(Perfect, MonteCarloLargeRAlmostAlwaysCrosses) {
    const auto t = perfect_overlay_montecarlo(64, 64, 200, 5);
    EXPECT_GT(t.strict_frequency(), 0.99);
}

TEST(Perfect, MonteCarloPreconditions) {
    EXPECT_THROW(perfect_overlay_montecarlo(256, 16, 10, 1), InputError);  // below sqrt(n ln n)
    EXPECT_THROW(perfect_overlay_montecarlo(256, 50, 10, 1), InputError);  // does not divide
    EXPECT_THROW(perfect_overlay_montecarlo(255, 255, 10, 1), InputError);
}

TEST(Perfect, MonteCarloDeterministic) {
    const auto a = perfect_overlay_montecarlo(128, 64, 50, 9);
    const auto b = perfect_overlay_montecarlo(128, 64, 50, 9);
    EXPECT_EQ(a.hits, b.hits);
    EXPECT_EQ(a.strict_hits, b.strict_hits);
    EXPECT_EQ(a.scenario_hits, b.scenario_hits);
}

TEST(Perfect, EmbedLaminarMatching) {
    const std::vector<Edge> lam{{1, 8}, {2, 7}, {3, 6}, {4, 5}};
    const Bst t = embed_nonintersecting_matching(lam);
    EXPECT_TRUE(oracle::valid_bst(t, 8));
    const auto par = oracle::parents_of(t, 8);
    for (const Edge& e : lam) EXPECT_EQ(oracle::tree_distance(par, e.a, e.b), 1);

    const Bst one = embed_nonintersecting_matching(std::vector<Edge>{{3, 9}});
    EXPECT_EQ(one.size(), 2u);
    EXPECT_THROW(embed_nonintersecting_matching(std::vector<Edge>{{1, 3}, {2, 4}}), InputError);
}

TEST(Perfect, EmbedRandomNonCrossing) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t) {
        // random non-crossing matching via a random balanced bracket sequence
        const int pairs = 1 + static_cast<int>(rng() % 15);
        std::vector<Edge> m;
        std::vector<PeerId> open;
        int opened = 0;
        for (PeerId pos = 1; pos <= 2 * pairs; ++pos) {
            const bool can_open = opened < pairs;
            const bool can_close = !open.empty();
            if (can_open && (!can_close || rng() % 2 == 0)) {
                open.push_back(pos);
                ++opened;
            } else {
                m.push_back({open.back(), pos});
                open.pop_back();
            }
        }
        const Bst tree = embed_nonintersecting_matching(m);
        const auto par = oracle::parents_of(tree, 2 * pairs);
        for (const Edge& e : m) ASSERT_EQ(oracle::tree_distance(par, e.a, e.b), 1);
    }
}
