#include "helpers.hpp"

#include "sensornet/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace sensornet;
using namespace testing;

namespace {

Scenario scenario_from(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in);
}

const char* kStatic =
    "[scenario]\nkind = static-field\nname = s\nhorizon = 60\nreplicates = 4\nseed = 3\n"
    "[network]\nnodes = 10\nradius = 25\nplacement = field_interior\n"
    "[field]\nnx = 2\nny = 2\ncell = 10\n";

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("structure streams") {
    auto s = scenario_from(kStatic);
    auto a = structure_rng(s, StructureStream::Network, 0);
    auto b = structure_rng(s, StructureStream::Network, 5);
    CHECK(a() == b());
    auto f = structure_rng(s, StructureStream::Field, 0);
    auto g = structure_rng(s, StructureStream::Network, 0);
    CHECK(f() != g());
    s.network.resample_per_replicate = true;
    auto c = structure_rng(s, StructureStream::Network, 0);
    auto d = structure_rng(s, StructureStream::Network, 1);
    CHECK(c() != d());
}

TEST_CASE("metrics shape and reproducibility") {
    auto s = scenario_from(kStatic);
    auto m1 = run_scenario(s, {{}, 1});
    auto m2 = run_scenario(s, {{}, 3});
    CHECK(m1.replicates == 4);
    REQUIRE(m1.series.size() == m2.series.size());
    for (std::size_t k = 0; k < m1.series.size(); ++k) {
        CHECK(m1.series[k].values == m2.series[k].values);
        CHECK(m1.series[k].values.size() == 60);
        for (double v : m1.series[k].values) CHECK((std::isfinite(v) && v >= 0));
    }
    CHECK(m1.find("target_rmse", 9) != nullptr);
    CHECK(m1.find("target_mse", 0) == nullptr);
}

TEST_CASE("replicate order does not matter") {
    auto s = scenario_from(kStatic);
    std::vector<ReplicateResult> reps;
    for (int k = 0; k < 4; ++k) reps.push_back(run_replicate(s, k));
    auto forward = aggregate(s, reps);
    std::reverse(reps.begin(), reps.end());
    auto backward = aggregate(s, reps);
    for (std::size_t k = 0; k < forward.series.size(); ++k)
        for (std::size_t t = 0; t < forward.series[k].values.size(); ++t)
            CHECK(std::abs(forward.series[k].values[t] - backward.series[k].values[t]) <=
                  1e-12 * (1 + forward.series[k].values[t]));
}

TEST_CASE("deterministic limits drive the error to zero") {
    auto s = scenario_from(
        "[scenario]\nkind = static-field\nhorizon = 300\nreplicates = 1\n"
        "[network]\nnodes = 8\nradius = 30\nplacement = field_interior\n"
        "[field]\nnx = 2\nny = 2\nnoise_std = 1e-3\n");
    CHECK(run_scenario(s).at("target_rmse").values.back() < 1e-4);

    auto t = scenario_from(
        "[scenario]\nkind = tracking\nhorizon = 400\nreplicates = 1\n"
        "[network]\nnodes = 6\nradius = 80\n"
        "[tracking]\ntargets = 2\nq = 0\nrange_std = 1e-4\nbearing_std = 1e-6\ngrowth = 0\ninit_speed = 0\nprior_velocity_std = 0.1\n");
    auto m = run_scenario(t);
    // Linearization bias of the early rounds decays like 1/t.
    const auto& pos = m.at("position_rmse").values;
    CHECK(pos[399] < pos[39] / 5);
    CHECK(pos[399] < 5e-3);
    CHECK(m.at("velocity_rmse").values.back() < 1e-4);
}

TEST_CASE("localization and joint metrics") {
    auto loc = scenario_from(
        "[scenario]\nkind = localization\nhorizon = 20\nreplicates = 3\n"
        "[network]\nsource = geometric_edges\nnodes = 60\nedges = 200\n");
    auto m = run_scenario(loc);
    const auto& v = m.at("location_rmse").values;
    CHECK(v.size() == 20);
    CHECK(v.back() < v.front());
    CHECK(m.at("location_rmse", 0).values.back() == 0.0);

    auto joint = scenario_from(
        "[scenario]\nkind = joint\nhorizon = 50\nreplicates = 2\n"
        "[network]\nnodes = 12\nradius = 12\nplacement = field_boundary\n"
        "[field]\nnx = 2\nny = 2\nmodel = nearest\n");
    auto j = run_scenario(joint);
    CHECK(j.find("predicted_mse") != nullptr);
    CHECK(j.find("location_rmse") != nullptr);
    CHECK(j.at("predicted_mse").values.size() == 50);
}

TEST_CASE("validation failures") {
    auto s = scenario_from(kStatic);
    s.network.radius = 1e-3;
    CHECK_CODE(run_scenario(s), ErrorCode::DisconnectedGraph);

    auto r = scenario_from(kStatic);
    r.field.grid = FieldGrid::centered(8, 8, 10);
    r.network.placement = Placement::Uniform;
    r.network.nodes = 5;
    r.network.radius = 200;
    CHECK_CODE(run_scenario(r), ErrorCode::RankDeficient);
}

}
