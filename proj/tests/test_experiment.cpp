#include <gtest/gtest.h>

#include "obst/experiment.hpp"

using namespace obst;

namespace {

ExperimentConfig small(Measure m) {
    ExperimentConfig c;
    c.measure = m;
    c.n_values = {24, 32};
    c.k_values = {1, 3};
    c.lambda_values = {0, 2};
    c.sequences = {"match", "rw-0.5"};
    c.guest = "bt";
    c.swarm_size = 8;
    c.m = 400;
    c.replicas = 3;
    c.windows = 4;
    c.removal_fractions = {0.0, 0.25, 0.5};
    return c;
}

std::size_t data_rows(const std::string& csv) {
    std::size_t rows = 0;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const auto end = csv.find('\n', pos);
        if (csv[pos] != '#') ++rows;
        pos = end + 1;
    }
    return rows - 1;  // header
}

}  // namespace

TEST(Experiment, ByteIdenticalReruns) {
    for (Measure m : {Measure::kCost, Measure::kTrace, Measure::kTopology, Measure::kRobustness}) {
        const auto c = small(m);
        EXPECT_EQ(run_scenario(c).csv, run_scenario(c).csv);
    }
}

TEST(Experiment, ThreadsDoNotChangeRows) {
    auto c = small(Measure::kCost);
    const auto serial = run_scenario(c).csv;
    c.threads = 3;
    EXPECT_EQ(run_scenario(c).csv, serial);
}

TEST(Experiment, RowCounts) {
    // 2 n x 2 seq x 2 k x 2 lambda x 3 replicas = 48 cells
    EXPECT_EQ(data_rows(run_scenario(small(Measure::kCost)).csv), 48u);
    EXPECT_EQ(data_rows(run_scenario(small(Measure::kTrace)).csv), 48u * 4);
    EXPECT_EQ(data_rows(run_scenario(small(Measure::kTopology)).csv), 48u * 5);
    EXPECT_EQ(data_rows(run_scenario(small(Measure::kRobustness)).csv), 48u * 3);
}

TEST(Experiment, CsvEmbedsConfigAndSeed) {
    auto c = small(Measure::kCost);
    c.seed = 77;
    const auto r = run_scenario(c);
    EXPECT_EQ(r.csv.rfind("# obst scenario=custom", 0), 0u);
    EXPECT_NE(r.csv.find("\"seed\":77"), std::string::npos);
    EXPECT_EQ(r.metadata["seed"].get<std::uint64_t>(), 77u);
    EXPECT_TRUE(r.metadata.contains("wall_seconds"));
    c.seed = 78;
    EXPECT_NE(run_scenario(c).csv, r.csv);
}

TEST(Experiment, ConfigJsonRoundTrip) {
    const auto c = preset("fig5");
    const auto back = config_from_json(nlohmann::json::parse(to_json(c).dump()));
    EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Experiment, ConfigErrors) {
    EXPECT_THROW(config_from_json(nlohmann::json{{"bogus", 1}}), InputError);
    EXPECT_THROW(config_from_json(nlohmann::json{{"n", "many"}}), InputError);
    EXPECT_THROW(config_from_json(nlohmann::json{{"measure", "speed"}}), InputError);
    auto c = small(Measure::kCost);
    c.sequences = {"rw-2"};
    EXPECT_THROW(validate(c), InputError);
    c = small(Measure::kCost);
    c.guest = "bad2";
    c.n_values = {10};
    EXPECT_THROW(validate(c), InputError);
    c = small(Measure::kCost);
    c.guest = "edgelist";
    EXPECT_THROW(validate(c), InputError);
    EXPECT_THROW(preset("fig11"), InputError);
}

TEST(Experiment, PresetsValidate) {
    for (const auto& name : preset_names()) EXPECT_NO_THROW(validate(preset(name))) << name;
    const auto from_json = config_from_json(nlohmann::json{{"preset", "fig10"}, {"replicas", 2}});
    EXPECT_EQ(from_json.lambda_values, (std::vector<int>{0, 1, 2, 4, 8}));
    EXPECT_EQ(from_json.replicas, 2);
}

TEST(Experiment, RequestCountDefaultsAndCap) {
    ExperimentConfig c;
    EXPECT_EQ(requests_for(c, 100), 10000u);
    EXPECT_EQ(requests_for(c, 2000), 1000000u);
    c.m = 5;
    EXPECT_EQ(requests_for(c, 100), 5u);
}

TEST(Experiment, SequenceNames) {
    ExperimentConfig c;
    c.guest = "rnd";
    const GuestGraph g = make_guest(c, 40, 1);
    const auto walk = make_sequence(c, g, 40, "rw-1.0", 500, 2);
    for (std::size_t i = 1; i < walk.size(); ++i) EXPECT_EQ(walk[i].source, walk[i - 1].dest);
    EXPECT_THROW(make_sequence(c, g, 40, "zigzag", 10, 1), InputError);
}

TEST(Experiment, ChurnRaisesCost) {
    ExperimentConfig c;
    c.guest = "rnd";
    c.n_values = {64};
    c.k_values = {4};
    c.lambda_values = {0, 8};
    c.m = 4000;
    const auto csv = run_scenario(c).csv;
    std::vector<double> cost;
    std::size_t pos = csv.find("tail_distance\n") + 14;
    while (pos < csv.size()) {
        const auto end = csv.find('\n', pos);
        const std::string row = csv.substr(pos, end - pos);
        // avg_cost is the 11th column
        std::size_t p = 0;
        for (int i = 0; i < 10; ++i) p = row.find(',', p) + 1;
        cost.push_back(std::stod(row.substr(p)));
        pos = end + 1;
    }
    ASSERT_EQ(cost.size(), 2u);
    EXPECT_LT(cost[0], cost[1]);
}
