#include "sensornet/network.hpp"
#include "sensornet/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

namespace sensornet {

namespace {

std::string edge_str(int i, int j) {
    std::ostringstream os;
    os << "{" << i + 1 << "," << j + 1 << "}";
    return os.str();
}

}  // namespace

bool edges_connected(int n, std::span<const Edge> edges) {
    if (n <= 1) return true;
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    int components = n;
    for (const auto& e : edges) {
        const int a = find(e.i);
        const int b = find(e.j);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components == 1;
}

namespace {

void require_connected(const SensorNetwork& net, const char* what) {
    if (!net.is_connected())
        fail(ErrorCode::DisconnectedGraph,
             std::string(what) + " requires a connected communication graph");
}

// Reduced generalized degree and adjacency (anchor block removed).
std::pair<Matrix, Matrix> reduced_degree_adjacency(const SensorNetwork& net) {
    const int d = net.dim();
    const int nr = net.size() - 1;
    Matrix deg = Matrix::Zero(nr * d, nr * d);
    Matrix adj = Matrix::Zero(nr * d, nr * d);
    for (int k = 0; k < net.edge_count(); ++k) {
        const auto [i, j] = net.edges()[static_cast<std::size_t>(k)];
        const Matrix& info = net.edge_info(k);
        if (i > 0) deg.block((i - 1) * d, (i - 1) * d, d, d) += info;
        if (j > 0) deg.block((j - 1) * d, (j - 1) * d, d, d) += info;
        if (i > 0 && j > 0) {
            adj.block((i - 1) * d, (j - 1) * d, d, d) = info;
            adj.block((j - 1) * d, (i - 1) * d, d, d) = info;
        }
    }
    return {deg, adj};
}

}  // namespace

SensorNetwork SensorNetwork::build(int n, std::vector<Edge> edges, std::vector<Vector> positions,
                                   std::vector<Matrix> edge_cov) {
    if (n < 1) fail(ErrorCode::InvalidIndex, "network needs at least one node");
    if (static_cast<int>(positions.size()) != n)
        fail(ErrorCode::DimensionMismatch, "expected one position per node");
    if (edge_cov.size() != edges.size())
        fail(ErrorCode::DimensionMismatch, "expected one covariance per edge");

    const auto dim = positions.front().size();
    if (dim < 1) fail(ErrorCode::DimensionMismatch, "positions must have dimension >= 1");
    for (const auto& p : positions)
        if (p.size() != dim) fail(ErrorCode::DimensionMismatch, "positions have inconsistent dimension");

    SensorNetwork net;
    net.n_ = n;
    net.dim_ = static_cast<int>(dim);
    net.adjacency_.resize(static_cast<std::size_t>(n));

    std::set<std::pair<int, int>> seen;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        auto [i, j] = edges[k];
        if (i < 0 || j < 0 || i >= n || j >= n)
            fail(ErrorCode::InvalidIndex, "edge " + edge_str(i, j) + " references a node outside [1.." +
                                              std::to_string(n) + "]");
        if (i == j) fail(ErrorCode::SelfLoop, "self-loop at node " + std::to_string(i + 1));
        if (i > j) std::swap(i, j);
        if (!seen.emplace(i, j).second) fail(ErrorCode::DuplicateEdge, "duplicate edge " + edge_str(i, j));

        const Matrix& cov = edge_cov[k];
        if (cov.rows() != dim || cov.cols() != dim)
            fail(ErrorCode::DimensionMismatch, "covariance of edge " + edge_str(i, j) + " has wrong size");
        if (!is_spd(cov))
            fail(ErrorCode::NonSPDCovariance, "covariance of edge " + edge_str(i, j) + " is not SPD");

        const int index = static_cast<int>(net.edges_.size());
        net.edges_.push_back({i, j});
        net.edge_cov_.push_back(symmetrized(cov));
        net.edge_info_.push_back(*spd_inverse(symmetrized(cov)));
        net.adjacency_[static_cast<std::size_t>(i)].push_back({j, index});
        net.adjacency_[static_cast<std::size_t>(j)].push_back({i, index});
    }

    const Vector anchor = positions.front();
    for (auto& p : positions) p -= anchor;
    net.positions_ = std::move(positions);
    return net;
}

std::optional<int> SensorNetwork::edge_index(int i, int j) const {
    if (i < 0 || i >= n_) return std::nullopt;
    for (const auto& nb : neighbors(i))
        if (nb.node == j) return nb.edge;
    return std::nullopt;
}

bool SensorNetwork::is_connected() const { return edges_connected(n_, edges_); }

// ---------------------------------------------------------------------------

WeightMatrix metropolis_weights(const SensorNetwork& net) {
    require_connected(net, "consensus weights");
    const int n = net.size();
    Matrix k = Matrix::Zero(n, n);
    for (const auto& e : net.edges()) {
        const double w = 1.0 / (1.0 + std::max(net.degree(e.i), net.degree(e.j)));
        k(e.i, e.j) = w;
        k(e.j, e.i) = w;
    }
    for (int i = 0; i < n; ++i) k(i, i) = 1.0 - (k.row(i).sum() - k(i, i));
    return WeightMatrix(std::move(k));
}

WeightMatrix lazy_uniform_weights(const SensorNetwork& net) {
    require_connected(net, "consensus weights");
    const int n = net.size();
    Matrix k = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double w = 1.0 / (1.0 + net.degree(i));
        k(i, i) = w;
        for (const auto& nb : net.neighbors(i)) k(i, nb.node) = w;
    }
    return WeightMatrix(std::move(k));
}

WeightMatrix consensus_weights(const SensorNetwork& net, WeightRule rule) {
    return rule == WeightRule::Metropolis ? metropolis_weights(net) : lazy_uniform_weights(net);
}

Vector stationary_distribution(const Matrix& k) {
    const auto n = k.rows();
    if (n == 0 || k.cols() != n) fail(ErrorCode::NotStochastic, "weight matrix must be square and non-empty");
    if ((k.array() < 0.0).any() || !k.allFinite())
        fail(ErrorCode::NotStochastic, "weight matrix has negative or non-finite entries");
    if (((k.rowwise().sum().array() - 1.0).abs() > 1e-10).any())
        fail(ErrorCode::NotStochastic, "weight matrix rows do not sum to one");

    // Irreducibility: every node reaches every other node along positive entries.
    auto reaches_all = [&](bool transpose) {
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::queue<Eigen::Index> frontier;
        frontier.push(0);
        seen[0] = 1;
        Eigen::Index count = 1;
        while (!frontier.empty()) {
            const auto u = frontier.front();
            frontier.pop();
            for (Eigen::Index v = 0; v < n; ++v) {
                const double w = transpose ? k(v, u) : k(u, v);
                if (w > 0.0 && !seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    ++count;
                    frontier.push(v);
                }
            }
        }
        return count == n;
    };
    if (!reaches_all(false) || !reaches_all(true))
        fail(ErrorCode::NotPrimitive, "weight matrix is reducible");
    if (!(k.diagonal().array() > 0.0).any())
        fail(ErrorCode::NotPrimitive, "weight matrix has no positive diagonal entry (aperiodicity not guaranteed)");

    // (Kᵀ - I) π = 0 with the last equation replaced by Σπ = 1.
    Matrix a = k.transpose() - Matrix::Identity(n, n);
    a.row(n - 1).setOnes();
    Vector b = Vector::Zero(n);
    b(n - 1) = 1.0;
    Eigen::FullPivLU<Matrix> lu(a);
    Vector pi = lu.solve(b);
    // One step of iterative refinement.
    pi += lu.solve(b - a * pi);
    return pi;
}

// ---------------------------------------------------------------------------

LaplacianSet laplacian_set(const SensorNetwork& net) {
    const int n = net.size();
    const int m = net.edge_count();
    const int d = net.dim();
    LaplacianSet s;

    s.incidence = Matrix::Zero(n, m);
    for (int k = 0; k < m; ++k) {
        s.incidence(net.edges()[static_cast<std::size_t>(k)].i, k) = -1.0;
        s.incidence(net.edges()[static_cast<std::size_t>(k)].j, k) = 1.0;
    }

    s.degree = Matrix::Zero(n * d, n * d);
    s.adjacency = Matrix::Zero(n * d, n * d);
    s.edge_covariance = Matrix::Zero(m * d, m * d);
    for (int k = 0; k < m; ++k) {
        const auto [i, j] = net.edges()[static_cast<std::size_t>(k)];
        const Matrix& info = net.edge_info(k);
        s.degree.block(i * d, i * d, d, d) += info;
        s.degree.block(j * d, j * d, d, d) += info;
        s.adjacency.block(i * d, j * d, d, d) = info;
        s.adjacency.block(j * d, i * d, d, d) = info;
        s.edge_covariance.block(k * d, k * d, d, d) = net.edge_cov(k);
    }
    s.laplacian = s.degree - s.adjacency;
    s.signless = s.degree + s.adjacency;

    const Matrix id = Matrix::Identity(d, d);
    s.stacked_incidence = Matrix::Zero(m * d, n * d);
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < n; ++i)
            if (s.incidence(i, k) != 0.0) s.stacked_incidence.block(k * d, i * d, d, d) = s.incidence(i, k) * id;

    const int r = (n - 1) * d;
    s.degree_reduced = s.degree.bottomRightCorner(r, r);
    s.adjacency_reduced = s.adjacency.bottomRightCorner(r, r);
    s.laplacian_reduced = s.laplacian.bottomRightCorner(r, r);
    s.signless_reduced = s.signless.bottomRightCorner(r, r);
    s.stacked_incidence_reduced = s.stacked_incidence.rightCols(r);
    return s;
}

Matrix reduced_laplacian(const SensorNetwork& net) {
    auto [deg, adj] = reduced_degree_adjacency(net);
    return deg - adj;
}

double jacobi_spectral_radius(const SensorNetwork& net) {
    require_connected(net, "Jacobi localization");
    if (net.size() == 1) return 0.0;
    auto [deg, adj] = reduced_degree_adjacency(net);
    // D̃⁻¹Ã is similar to the symmetric C⁻¹ÃC⁻ᵀ with D̃ = CCᵀ.
    Eigen::LLT<Matrix> llt(deg);
    if (llt.info() != Eigen::Success) fail(ErrorCode::SingularDegreeBlock, "reduced degree matrix is not SPD");
    Matrix lower = llt.matrixL();
    Matrix tmp = lower.triangularView<Eigen::Lower>().solve(adj);
    Matrix sym = lower.triangularView<Eigen::Lower>().solve(tmp.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(sym), Eigen::EigenvaluesOnly);
    const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
    if (!(rho < 1.0))
        fail(ErrorCode::StabilityViolation, "Jacobi iteration matrix has spectral radius " + std::to_string(rho));
    return rho;
}

// ---------------------------------------------------------------------------

std::vector<Matrix> isotropic_edge_covariances(int edge_count, int dim, double std) {
    if (!(std > 0.0)) fail(ErrorCode::NonPositiveParam, "edge noise std must be positive");
    return std::vector<Matrix>(static_cast<std::size_t>(edge_count), std * std * Matrix::Identity(dim, dim));
}

std::vector<Matrix> random_edge_covariances(int edge_count, int dim, double scale, Rng& rng, double floor) {
    if (!(scale > 0.0) || !(floor > 0.0)) fail(ErrorCode::NonPositiveParam, "covariance scale must be positive");
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(edge_count));
    for (int k = 0; k < edge_count; ++k) {
        Matrix g(dim, dim);
        for (int c = 0; c < dim; ++c) g.col(c) = standard_normal(dim, rng);
        Matrix cov = g * g.transpose() / dim + floor * Matrix::Identity(dim, dim);
        out.push_back(symmetrized(scale * scale * cov));
    }
    return out;
}

std::vector<Vector> uniform_positions(int n, const Region& region, Rng& rng) {
    std::vector<Vector> pos;
    pos.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Vector p(2);
        p(0) = uniform(region.lo, region.hi, rng);
        p(1) = uniform(region.lo, region.hi, rng);
        pos.push_back(p);
    }
    if (n > 0) pos.front().setZero();
    return pos;
}

std::vector<Edge> geometric_edges(std::span<const Vector> positions, double radius) {
    std::vector<Edge> edges;
    const int n = static_cast<int>(positions.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((positions[i] - positions[j]).norm() < radius) edges.push_back({i, j});
    return edges;
}

std::vector<Edge> nearest_pair_edges(std::span<const Vector> positions, int m) {
    const int n = static_cast<int>(positions.size());
    std::vector<std::pair<double, Edge>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({(positions[i] - positions[j]).squaredNorm(), {i, j}});
    if (m > static_cast<int>(pairs.size()))
        fail(ErrorCode::NonPositiveParam, "requested more edges than node pairs");
    std::partial_sort(pairs.begin(), pairs.begin() + m, pairs.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) edges.push_back(pairs[static_cast<std::size_t>(k)].second);
    return edges;
}

std::vector<Edge> erdos_renyi_edges(int n, double p, Rng& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng)) edges.push_back({i, j});
    return edges;
}

namespace {

template <typename Generate>
GraphSample sample_connected(int n, int max_attempts, const char* name, Generate&& generate) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        GraphSample g = generate();
        if (edges_connected(n, g.edges)) return g;
    }
    fail(ErrorCode::DisconnectedGraph, std::string(name) + ": no connected sample after " +
                                           std::to_string(max_attempts) + " attempts");
}

}  // namespace

GraphSample random_geometric_graph(int n, double radius, const Region& region, Rng& rng, int max_attempts) {
    if (!(radius > 0.0)) fail(ErrorCode::NonPositiveParam, "radius must be positive");
    return sample_connected(n, max_attempts, "random geometric graph", [&] {
        GraphSample g;
        g.positions = uniform_positions(n, region, rng);
        g.edges = geometric_edges(g.positions, radius);
        return g;
    });
}

GraphSample random_geometric_graph_with_edges(int n, int m, const Region& region, Rng& rng, int max_attempts) {
    if (m < n - 1) fail(ErrorCode::NonPositiveParam, "a connected graph needs at least n-1 edges");
    return sample_connected(n, max_attempts, "random geometric graph", [&] {
        GraphSample g;
        g.positions = uniform_positions(n, region, rng);
        g.edges = nearest_pair_edges(g.positions, m);
        return g;
    });
}

GraphSample erdos_renyi_graph(int n, double p, const Region& region, Rng& rng, int max_attempts) {
    if (!(p > 0.0) || p > 1.0) fail(ErrorCode::NonPositiveParam, "edge probability must lie in (0,1]");
    return sample_connected(n, max_attempts, "Erdos-Renyi graph", [&] {
        GraphSample g;
        g.positions = uniform_positions(n, region, rng);
        g.edges = erdos_renyi_edges(n, p, rng);
        return g;
    });
}

}  // namespace sensornet
