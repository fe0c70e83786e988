#include "helpers.hpp"

#include "sensornet/field.hpp"
#include "sensornet/joint.hpp"

#include <cmath>

using namespace sensornet;
using namespace testing;

TEST_SUITE("joint") {

TEST_CASE("predicted limit closed forms") {
    const std::vector<Matrix> ones{scalar(1), scalar(1)};
    CHECK(std::abs(predict_asymptotic_mse(vec({0.5, 0.5}), ones, 0.1, vec({2})) - 0.04 / 1.21) < 1e-15);
    CHECK(predict_asymptotic_mse(vec({0.5, 0.5}), ones, 0.1, vec({0})) == 0.0);
    CHECK(predict_asymptotic_mse(vec({0.5, 0.5}), ones, 1e-9, vec({2})) < 1e-16);
    CHECK_CODE(predict_asymptotic_mse(scalar(1), 0.0, vec({1})), ErrorCode::NonPositiveDelta);
    CHECK_CODE(predict_asymptotic_mse(scalar(1), -1.0, vec({1})), ErrorCode::NonPositiveDelta);
}

TEST_CASE("predicted limit is monotone and quadratic in delta") {
    Rng rng(2);
    Matrix g(3, 3);
    for (int c = 0; c < 3; ++c) g.col(c) = standard_normal(3, rng);
    const Matrix c = g * g.transpose() + 0.5 * Matrix::Identity(3, 3);
    const Vector y = standard_normal(3, rng);
    double last = 0;
    for (double d : {1e-3, 1e-2, 1e-1, 1.0}) {
        const double p = predict_asymptotic_mse(c, d, y);
        CHECK(p >= last);
        last = p;
    }
    const Matrix ci = c.inverse();
    const double limit = (ci * y).squaredNorm();
    const double d = 1e-4;
    CHECK(std::abs(predict_asymptotic_mse(c, d, y) / (d * d) / limit - 1) < 0.01);
}

TEST_CASE("single sensor regularized estimate") {
    const double delta = 0.1, y = 3.0;
    auto obs = constant_observation(scalar(1), scalar(1));
    Rng rng(7);
    InformationState s = InformationState::uninformed(1);
    double sum = 0;
    for (long t = 1; t <= 400; ++t) {
        const double z = y + standard_normal(1, rng)(0);
        sum += z;
        const WeightedState self{1.0, &s};
        auto up = joint_update({&self, 1}, obs, vec({0}), vec({z}), delta);
        s = up.state;
        const double closed = sum / (s.info_matrix(0, 0) + t * delta);
        CHECK(std::abs(up.estimate(0) - closed) < 1e-10 * std::abs(closed));
        CHECK(std::abs(s.info_matrix(0, 0) - t) < 1e-8);
    }
    const double limit_sq = delta * delta * y * y / ((1 + delta) * (1 + delta));
    const std::vector<Matrix> one{scalar(1)};
    CHECK(std::abs(predict_asymptotic_mse(vec({1}), one, delta, vec({y})) - limit_sq) < 1e-10);
    // Noise-free limit: ŷ = t y / (t + tδ) = y / (1 + δ).
    InformationState q = InformationState::uninformed(1);
    for (long t = 1; t <= 5; ++t) {
        const WeightedState self{1.0, &q};
        auto up = joint_update({&self, 1}, obs, vec({0}), vec({y}), delta);
        q = up.state;
        CHECK(std::abs(up.estimate(0) - y / (1 + delta)) < 1e-8);
        CHECK(std::abs((up.estimate(0) - y) * (up.estimate(0) - y) - limit_sq) < 1e-8);
    }
}

TEST_CASE("exact locations and vanishing delta reduce to the plain filter") {
    Rng rng(13);
    auto net = random_network(6, 60, rng);
    auto k = metropolis_weights(net);
    auto grid = FieldGrid::centered(2, 2, 40);
    auto obs = field_observation(grid, FieldInterpolation::Bilinear, 0.01);
    const Vector y = vec({1, 2, 3, 4});
    std::vector<InformationState> plain(6, InformationState::uninformed(4)), joint = plain;
    for (int t = 0; t < 100; ++t) {
        std::vector<LinearMeasurement> m;
        for (int i = 0; i < 6; ++i) m.push_back(obs.linearize(net.position(i), observe_linear(obs, net.position(i), y, rng).z));
        plain = consensus_update(net, k, plain, m);
        std::vector<InformationState> next;
        for (int i = 0; i < 6; ++i) {
            std::vector<WeightedState> terms{{k(i, i), &joint[i]}};
            for (const auto& nb : net.neighbors(i)) terms.push_back({k(i, nb.node), &joint[nb.node]});
            auto up = joint_update(terms, obs, net.position(i), m[i].z, 1e-12);
            if (t > 4) CHECK((up.estimate - estimate(plain[i])).norm() < 1e-6);
            next.push_back(up.state);
        }
        joint = next;
    }
}

TEST_CASE("joint run tracks both errors") {
    Rng rng(19);
    auto g = random_geometric_graph(12, 40, {-15, 15}, rng);
    auto net = SensorNetwork::build(12, g.edges, g.positions, isotropic_edge_covariances(static_cast<int>(g.edges.size()), 2, 0.3));
    auto k = metropolis_weights(net);
    auto grid = FieldGrid::centered(2, 2, 15);
    std::vector<LinearObservation> obs(12, field_observation(grid, FieldInterpolation::Bilinear, 0.01));
    const Vector y = vec({1, 0.5, -0.5, 2});
    auto run = run_joint(net, k, obs, y, {}, 400, rng);
    CHECK(run.location_squared_error.rows() == 401);
    CHECK(run.target_squared_error.rows() == 400);
    CHECK(run.location_squared_error.row(400).sum() < run.location_squared_error.row(0).sum());
    CHECK(run.target_squared_error.row(399).mean() < run.target_squared_error.row(9).mean());
    CHECK(run.predicted_mse > 0);
    CHECK(run.final_localization.estimate[0].isZero());
    CHECK_CODE(run_joint(net, k, obs, y, {0.0, {}}, 1, rng), ErrorCode::NonPositiveDelta);
}

}
