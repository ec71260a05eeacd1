#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "obst/overlay.hpp"
#include "obst/rng.hpp"
#include "oracles.hpp"

using namespace obst;

namespace {

RequestSequence random_requests(PeerId n, std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    RequestSequence out;
    while (out.size() < m) {
        const auto u = static_cast<PeerId>(rng() % static_cast<std::uint64_t>(n) + 1);
        const auto v = static_cast<PeerId>(rng() % static_cast<std::uint64_t>(n) + 1);
        if (u != v) out.push_back({u, v});
    }
    return out;
}

}  // namespace

TEST(Overlay, NewRandomUsesDerivedSeeds) {
    const Overlay o = Overlay::new_random(40, 3, 99);
    ASSERT_EQ(o.k(), 3);
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(o.tree(i), Bst::random(40, derive_seed(99, seed_stream::kHostTrees, static_cast<std::uint64_t>(i))));
    }
    EXPECT_TRUE(o.check()) << o.check().violation;
}

TEST(Overlay, ClosestTreeIsMinimumWithLowestIndex) {
    const Overlay o = Overlay::new_random(30, 4, 1);
    std::vector<std::vector<PeerId>> pars;
    for (const Bst& t : o.trees()) pars.push_back(oracle::parents_of(t, 30));
    for (PeerId u = 1; u <= 30; ++u) {
        for (PeerId v = 1; v <= 30; ++v) {
            if (u == v) continue;
            int best = 1 << 30;
            int arg = -1;
            for (int i = 0; i < 4; ++i) {
                const int d = oracle::tree_distance(pars[static_cast<std::size_t>(i)], u, v);
                if (d < best) {
                    best = d;
                    arg = i;
                }
            }
            const TreeChoice c = o.closest_tree(u, v);
            ASSERT_EQ(c.distance, best);
            ASSERT_EQ(c.tree, arg);
        }
    }
}

TEST(Overlay, StaticServeChargesDistancePlusOne) {
    Overlay o = Overlay::new_random(20, 2, 5);
    const Overlay before = o;
    const CostRecord r = o.serve(3, 17, false, 4);
    EXPECT_EQ(r.t, 4);
    EXPECT_EQ(r.rotations, 0);
    EXPECT_EQ(r.distance, before.closest_tree(3, 17).distance);
    EXPECT_EQ(o.snapshot(), before.snapshot());
}

TEST(Overlay, AdjustingRepeatGivesDistanceOne) {
    Overlay o = Overlay::new_random(64, 3, 7);
    const auto sigma = random_requests(64, 2000, 3);
    for (const Request& q : sigma) {
        const TreeChoice c = o.closest_tree(q.source, q.dest);
        const CostRecord r = o.serve(q.source, q.dest, true);
        ASSERT_EQ(r.distance, c.distance);
        ASSERT_EQ(r.tree, c.tree);
        ASSERT_EQ(o.tree(r.tree).distance(q.source, q.dest), 1);
        const CostRecord again = o.serve(q.source, q.dest, true);
        ASSERT_EQ(again.distance, 1);
        ASSERT_EQ(again.rotations, 0);
    }
    EXPECT_TRUE(o.check());
}

TEST(Overlay, SelfRequestIsFree) {
    Overlay o = Overlay::new_random(10, 2, 1);
    const CostRecord r = o.serve(4, 4, true);
    EXPECT_EQ(r.distance, 0);
    EXPECT_EQ(r.rotations, 0);
}

TEST(Overlay, RepeatedPairAveragesTowardTwo) {
    Overlay o = Overlay::new_random(200, 1, 3);
    const RequestSequence sigma(5000, Request{1, 200});
    const CostLedger led = o.run(sigma, RunOptions{});
    const CostRecord& first = led.records().front();
    const double first_cost = first.distance + 1.0 + static_cast<double>(first.rotations);
    const double total = led.average_cost() * static_cast<double>(led.size());
    EXPECT_LE(total, first_cost + 2.0 * (5000 - 1) + 1e-9);
    EXPECT_LT(led.average_cost(), 2.1);
}

TEST(Overlay, StaticRunIsPure) {
    const Overlay o = Overlay::new_random(50, 3, 11);
    const auto sigma = random_requests(50, 500, 1);
    Overlay a = o;
    Overlay b = o;
    const auto la = a.run(sigma, RunOptions{false, 1, 0});
    const auto lb = b.run(sigma, RunOptions{false, 1, 0});
    ASSERT_EQ(la.size(), lb.size());
    for (std::size_t i = 0; i < la.size(); ++i) {
        EXPECT_EQ(la.records()[i].distance, lb.records()[i].distance);
        EXPECT_EQ(la.records()[i].tree, lb.records()[i].tree);
    }
    EXPECT_EQ(a.snapshot(), o.snapshot());
}

TEST(Overlay, LedgerTotals) {
    Overlay o = Overlay::new_random(40, 2, 2);
    const auto sigma = random_requests(40, 300, 8);
    const auto led = o.run(sigma, RunOptions{});
    std::int64_t d = 0;
    std::int64_t r = 0;
    for (const auto& rec : led.records()) {
        d += rec.distance;
        r += rec.rotations;
    }
    EXPECT_EQ(led.total_distance(), d);
    EXPECT_EQ(led.total_rotations(), r);
    EXPECT_NEAR(led.average_cost(), static_cast<double>(d + r + 300) / 300.0, 1e-12);
    EXPECT_EQ(CostLedger().average_cost(), 0.0);
}

TEST(Overlay, AdjustEverySkipsAdjustments) {
    Overlay o = Overlay::new_random(40, 2, 2);
    const auto sigma = random_requests(40, 100, 8);
    const auto led = o.run(sigma, RunOptions{true, 3, 0});
    for (const auto& rec : led.records()) {
        if ((rec.t + 1) % 3 != 0) EXPECT_EQ(rec.rotations, 0);
    }
}

TEST(Overlay, JoinLeave) {
    Overlay o = Overlay::new_random(20, 3, 4);
    o.leave(7);
    EXPECT_FALSE(o.contains(7));
    EXPECT_EQ(o.n(), 19);
    for (const Bst& t : o.trees()) EXPECT_FALSE(t.contains(7));
    EXPECT_TRUE(o.check());
    o.join(7);
    EXPECT_TRUE(o.contains(7));
    for (const Bst& t : o.trees()) {
        EXPECT_EQ(t.left(7), kNoPeer);
        EXPECT_EQ(t.right(7), kNoPeer);
    }
    EXPECT_TRUE(o.check());
    EXPECT_THROW(o.join(7), InputError);
    EXPECT_THROW(o.leave(99), Error);
}

TEST(Overlay, ChurnKeepsPeerSet) {
    Overlay o = Overlay::new_random(64, 4, 4);
    const auto peers = o.peers();
    const auto sigma = random_requests(64, 500, 2);
    o.run(sigma, RunOptions{true, 1, 5});
    EXPECT_EQ(o.peers(), peers);
    EXPECT_TRUE(o.check()) << o.check().violation;
}

TEST(Overlay, UnionGraphIsEdgeUnion) {
    const Overlay o = Overlay::new_random(30, 3, 6);
    const Graph g = o.union_graph();
    std::vector<Edge> all;
    for (const Bst& t : o.trees()) {
        const auto e = t.edges();
        all.insert(all.end(), e.begin(), e.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    EXPECT_EQ(g.edges(), all);
}

TEST(Overlay, SnapshotRoundTrip) {
    Overlay o = Overlay::new_random(25, 3, 12);
    o.run(random_requests(25, 200, 4), RunOptions{});
    const std::string s = o.snapshot();
    const Overlay p = Overlay::parse_snapshot(s);
    EXPECT_EQ(p.snapshot(), s);
}

TEST(Overlay, CorruptSnapshotIsNamed) {
    const Overlay o = Overlay::new_random(6, 1, 1);
    std::string s = o.snapshot();
    // swap the two children on the root line to break search order
    const auto nl = s.find('\n');
    const auto line_end = s.find('\n', nl + 1);
    std::string root = s.substr(nl + 1, line_end - nl - 1);
    std::istringstream is(root);
    std::string id, l, r;
    is >> id >> l >> r;
    s.replace(nl + 1, line_end - nl - 1, id + " " + r + " " + l);
    try {
        (void)Overlay::parse_snapshot(s);
        FAIL() << "corrupt snapshot accepted";
    } catch (const Error& e) {
        EXPECT_FALSE(std::string(e.what()).empty());
    }
}

TEST(Overlay, FromTreesRejectsMismatch) {
    std::vector<Bst> trees{Bst::random(5, 1), Bst::random(6, 1)};
    EXPECT_THROW(Overlay::from_trees(trees), InputError);
}

TEST(Overlay, RunWrapsErrorsWithIndex) {
    Overlay o = Overlay::new_random(5, 1, 1);
    const RequestSequence sigma{{1, 2}, {1, 9}};
    try {
        o.run(sigma, RunOptions{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("request 1"), std::string::npos) << e.what();
    }
}
