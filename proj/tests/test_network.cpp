#include "helpers.hpp"

#include <cmath>

using namespace sensornet;
using namespace testing;

TEST_SUITE("network") {

TEST_CASE("smallest connected network builds") {
    auto net = line_network({0, 2}, {{0, 1}});
    CHECK(net.size() == 2);
    CHECK(net.dim() == 1);
    CHECK(net.edge_count() == 1);
    CHECK(net.is_connected());
    CHECK(net.degree(0) == 1);
    CHECK(net.edge_index(1, 0).value() == 0);
    CHECK_FALSE(net.edge_index(0, 0).has_value());
}

TEST_CASE("build validation") {
    std::vector<Vector> p3(3, vec({0}));
    std::vector<Matrix> c2(2, scalar(1));
    CHECK_CODE(SensorNetwork::build(3, {{0, 1}, {0, 1}}, p3, c2), ErrorCode::DuplicateEdge);
    CHECK_CODE(SensorNetwork::build(3, {{0, 1}, {1, 0}}, p3, c2), ErrorCode::DuplicateEdge);
    CHECK_CODE(SensorNetwork::build(3, {{1, 1}}, p3, {scalar(1)}), ErrorCode::SelfLoop);
    CHECK_CODE(SensorNetwork::build(3, {{0, 3}}, p3, {scalar(1)}), ErrorCode::InvalidIndex);
    CHECK_CODE(SensorNetwork::build(3, {{0, 1}}, p3, {scalar(-1)}), ErrorCode::NonSPDCovariance);
    CHECK_CODE(SensorNetwork::build(3, {{0, 1}}, p3, {Matrix::Identity(2, 2)}), ErrorCode::DimensionMismatch);
}

TEST_CASE("edges are reoriented and positions moved to the anchor frame") {
    std::vector<Vector> p{vec({5}), vec({7}), vec({4})};
    auto net = SensorNetwork::build(3, {{1, 0}, {2, 1}}, p, {scalar(1), scalar(1)});
    CHECK(net.edges()[0].i == 0);
    CHECK(net.edges()[0].j == 1);
    CHECK(net.edges()[1].i == 1);
    CHECK(net.edges()[1].j == 2);
    CHECK(net.position(0)(0) == 0.0);
    CHECK(net.position(1)(0) == doctest::Approx(2));
    CHECK(net.position(2)(0) == doctest::Approx(-1));
}

TEST_CASE("connectivity") {
    CHECK(path_network(3).is_connected());
    std::vector<Vector> p2(2, vec({0}));
    CHECK_FALSE(SensorNetwork::build(2, {}, p2, {}).is_connected());
    std::vector<Vector> p4(4, vec({0}));
    CHECK_FALSE(SensorNetwork::build(4, {{0, 1}, {2, 3}}, p4, {scalar(1), scalar(1)}).is_connected());
    std::vector<Edge> split{{0, 1}, {2, 3}};
    CHECK_FALSE(edges_connected(4, split));
    std::vector<Vector> p1(1, vec({0}));
    CHECK(SensorNetwork::build(1, {}, p1, {}).is_connected());
}

TEST_CASE("metropolis weights by hand") {
    auto k2 = metropolis_weights(path_network(2)).matrix();
    CHECK(k2.isApprox((Matrix(2, 2) << 0.5, 0.5, 0.5, 0.5).finished()));

    auto k3 = metropolis_weights(path_network(3)).matrix();
    Matrix want(3, 3);
    want << 2.0 / 3, 1.0 / 3, 0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 1.0 / 3, 2.0 / 3;
    CHECK((k3 - want).norm() < 1e-15);

    auto tri = line_network({0, 1, 2}, {{0, 1}, {1, 2}, {0, 2}});
    auto kt = metropolis_weights(tri).matrix();
    CHECK((kt - Matrix::Constant(3, 3, 1.0 / 3)).norm() < 1e-15);

    std::vector<Vector> p4(4, vec({0}));
    auto split = SensorNetwork::build(4, {{0, 1}, {2, 3}}, p4, {scalar(1), scalar(1)});
    CHECK_CODE(metropolis_weights(split), ErrorCode::DisconnectedGraph);
}

TEST_CASE("lazy uniform weights are row stochastic") {
    auto k = lazy_uniform_weights(path_network(4)).matrix();
    CHECK((k.rowwise().sum() - Vector::Ones(4)).norm() < 1e-15);
    CHECK(k(1, 1) == doctest::Approx(1.0 / 3));
    CHECK(k(0, 0) == doctest::Approx(0.5));
    CHECK(k(0, 2) == 0.0);
}

TEST_CASE("stationary distribution") {
    CHECK(stationary_distribution(metropolis_weights(path_network(3)).matrix()).isApprox(Vector::Constant(3, 1.0 / 3)));
    Matrix k(2, 2);
    k << 0.5, 0.5, 0.25, 0.75;
    auto pi = stationary_distribution(k);
    CHECK(std::abs(pi(0) - 1.0 / 3) < 1e-14);
    CHECK(std::abs(pi(1) - 2.0 / 3) < 1e-14);
    CHECK(stationary_distribution(Matrix::Ones(1, 1))(0) == doctest::Approx(1.0));

    Rng rng(3);
    auto net = random_network(25, 30, rng);
    auto lazy = lazy_uniform_weights(net).matrix();
    auto p = stationary_distribution(lazy);
    CHECK((p.transpose() * lazy - p.transpose()).norm() < 1e-12);
    CHECK(std::abs(p.sum() - 1) < 1e-12);
    CHECK(p.minCoeff() > 0);
}

TEST_CASE("stationary distribution rejects bad matrices") {
    Matrix neg(2, 2);
    neg << 1.5, -0.5, 0.5, 0.5;
    CHECK_CODE(stationary_distribution(neg), ErrorCode::NotStochastic);
    Matrix rows(2, 2);
    rows << 0.5, 0.4, 0.5, 0.5;
    CHECK_CODE(stationary_distribution(rows), ErrorCode::NotStochastic);
    Matrix reducible = Matrix::Identity(2, 2);
    CHECK_CODE(stationary_distribution(reducible), ErrorCode::NotPrimitive);
    Matrix periodic(2, 2);
    periodic << 0, 1, 1, 0;
    CHECK_CODE(stationary_distribution(periodic), ErrorCode::NotPrimitive);
}

TEST_CASE("laplacians of a single edge") {
    auto s = laplacian_set(path_network(2));
    CHECK(s.degree.isApprox(Matrix::Identity(2, 2)));
    CHECK(s.adjacency.isApprox((Matrix(2, 2) << 0, 1, 1, 0).finished()));
    CHECK(s.laplacian.isApprox((Matrix(2, 2) << 1, -1, -1, 1).finished()));
    CHECK(s.laplacian_reduced.isApprox(Matrix::Ones(1, 1)));
    CHECK(s.signless.isApprox((Matrix(2, 2) << 1, 1, 1, 1).finished()));
    CHECK(s.incidence(0, 0) == -1.0);
    CHECK(s.incidence(1, 0) == 1.0);

    auto w = laplacian_set(path_network(2, 4.0));
    CHECK(w.laplacian.isApprox((Matrix(2, 2) << 0.25, -0.25, -0.25, 0.25).finished()));
}

TEST_CASE("laplacian identities on a random graph") {
    Rng rng(11);
    auto net = random_network(10, 45, rng);
    auto s = laplacian_set(net);
    const Matrix info = s.edge_covariance.inverse();
    CHECK((s.laplacian - s.stacked_incidence.transpose() * info * s.stacked_incidence).norm() < 1e-10);
    CHECK((s.laplacian - (s.degree - s.adjacency)).norm() < 1e-12);
    CHECK((s.signless - (s.degree + s.adjacency)).norm() < 1e-12);
    CHECK((s.laplacian_reduced - s.stacked_incidence_reduced.transpose() * info * s.stacked_incidence_reduced).norm() < 1e-10);
    CHECK((s.laplacian_reduced - reduced_laplacian(net)).norm() < 1e-12);
    CHECK((s.laplacian * Vector::Ones(20)).head(20).norm() > 0);  // rows mix both axes
    Vector ones_x = Vector::Zero(20);
    for (int i = 0; i < 10; ++i) ones_x(2 * i) = 1;
    CHECK((s.laplacian * ones_x).norm() < 1e-10);
    CHECK(is_spd(s.laplacian_reduced));
}

TEST_CASE("jacobi spectral radius") {
    CHECK(jacobi_spectral_radius(path_network(2)) == 0.0);
    CHECK(std::abs(jacobi_spectral_radius(path_network(3)) - 1 / std::sqrt(2.0)) < 1e-12);
    Rng rng(5);
    for (int k = 0; k < 10; ++k) {
        auto net = random_network(15, 40, rng);
        const double rho = jacobi_spectral_radius(net);
        auto s = laplacian_set(net);
        const double direct = spectral_radius(s.degree_reduced.inverse() * s.adjacency_reduced);
        CHECK(std::abs(rho - direct) < 1e-9);
        CHECK(rho < 1.0);
    }
}

TEST_CASE("generators") {
    Rng rng(2);
    auto g = random_geometric_graph_with_edges(300, 1288, {}, rng);
    CHECK(g.edges.size() == 1288);
    auto net = SensorNetwork::build(300, g.edges, g.positions, isotropic_edge_covariances(1288, 2, 0.5));
    CHECK(net.is_connected());
    CHECK(net.position(0).norm() == 0.0);

    auto er = erdos_renyi_graph(30, 0.2, {}, rng);
    CHECK(edges_connected(30, er.edges));

    auto covs = random_edge_covariances(50, 2, 0.5, rng);
    for (const auto& c : covs) CHECK(is_spd(c));
}

}
