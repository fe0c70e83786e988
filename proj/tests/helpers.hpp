#pragma once

#include "sensornet/error.hpp"
#include "sensornet/network.hpp"

#include <doctest.h>

#include <vector>

namespace testing {

using sensornet::Edge;
using sensornet::Matrix;
using sensornet::SensorNetwork;
using sensornet::Vector;

inline Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) out(k++) = x;
    return out;
}

inline Matrix scalar(double s) { return Matrix::Constant(1, 1, s); }

/// 1-d network on given positions with scalar edge covariance c.
inline SensorNetwork line_network(const std::vector<double>& pos, const std::vector<Edge>& edges, double c = 1.0) {
    std::vector<Vector> p;
    for (double x : pos) p.push_back(vec({x}));
    return SensorNetwork::build(static_cast<int>(pos.size()), edges, p,
                                std::vector<Matrix>(edges.size(), scalar(c)));
}

inline SensorNetwork path_network(int n, double c = 1.0) {
    std::vector<double> pos;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) pos.push_back(i);
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    return line_network(pos, edges, c);
}

/// Random connected planar network with random SPD edge covariances.
inline SensorNetwork random_network(int n, double radius, sensornet::Rng& rng, bool random_cov = true) {
    auto g = sensornet::random_geometric_graph(n, radius, {}, rng);
    const int m = static_cast<int>(g.edges.size());
    auto covs = random_cov ? sensornet::random_edge_covariances(m, 2, 0.5, rng)
                           : sensornet::isotropic_edge_covariances(m, 2, 0.5);
    return SensorNetwork::build(n, g.edges, g.positions, covs);
}

template <typename F>
sensornet::ErrorCode error_code_of(F&& f) {
    try {
        f();
    } catch (const sensornet::Error& e) {
        return e.code();
    }
    FAIL("expected sensornet::Error");
    return sensornet::ErrorCode::ConfigError;
}

}  // namespace testing

#define CHECK_CODE(expr, code) CHECK(::testing::error_code_of([&] { (void)(expr); }) == (code))
