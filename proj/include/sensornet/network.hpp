#pragma once

// Communication/measurement graph, consensus weights and the matrix-weighted
// Laplacian algebra used by the localization analysis.
//
// Nodes are 0-based in the API; node 0 is the anchor that defines the
// coordinate frame. Text files use 1-based indices (see graph_io.hpp).

#include "sensornet/linalg.hpp"
#include "sensornet/random.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sensornet {

struct Edge {
    int i = 0;
    int j = 0;  // stored with i < j
};

struct Neighbor {
    int node = 0;
    int edge = 0;  ///< index into SensorNetwork::edges()
};

/// Undirected sensor graph with true configurations (expressed in the anchor
/// frame, so position(0) == 0) and per-edge relative-measurement covariances.
/// Immutable after construction.
class SensorNetwork {
public:
    /// Validates and normalizes: edges are reoriented to i < j, positions are
    /// translated so that the anchor sits at the origin.
    static SensorNetwork build(int n, std::vector<Edge> edges, std::vector<Vector> positions,
                               std::vector<Matrix> edge_cov);

    [[nodiscard]] int size() const noexcept { return n_; }
    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int edge_count() const noexcept { return static_cast<int>(edges_.size()); }

    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
    [[nodiscard]] const Vector& position(int i) const { return positions_.at(static_cast<std::size_t>(i)); }
    [[nodiscard]] const std::vector<Vector>& positions() const noexcept { return positions_; }
    [[nodiscard]] const Matrix& edge_cov(int k) const { return edge_cov_.at(static_cast<std::size_t>(k)); }
    [[nodiscard]] const Matrix& edge_info(int k) const { return edge_info_.at(static_cast<std::size_t>(k)); }

    [[nodiscard]] std::span<const Neighbor> neighbors(int i) const {
        return adjacency_.at(static_cast<std::size_t>(i));
    }
    [[nodiscard]] int degree(int i) const { return static_cast<int>(neighbors(i).size()); }
    [[nodiscard]] std::optional<int> edge_index(int i, int j) const;

    [[nodiscard]] bool is_connected() const;

private:
    SensorNetwork() = default;

    int n_ = 0;
    int dim_ = 0;
    std::vector<Edge> edges_;
    std::vector<Vector> positions_;
    std::vector<Matrix> edge_cov_;
    std::vector<Matrix> edge_info_;  // cached inverses
    std::vector<std::vector<Neighbor>> adjacency_;
};

[[nodiscard]] inline bool is_connected(const SensorNetwork& net) { return net.is_connected(); }

/// Connectivity of an edge list over n nodes (union-find).
[[nodiscard]] bool edges_connected(int n, std::span<const Edge> edges);

// ---------------------------------------------------------------------------
// Consensus weights

enum class WeightRule { Metropolis, LazyUniform };

/// Row-stochastic consensus matrix K with κ_ij > 0 exactly on the closed
/// neighbourhood of i.
class WeightMatrix {
public:
    explicit WeightMatrix(Matrix k) : k_(std::move(k)) {}

    [[nodiscard]] const Matrix& matrix() const noexcept { return k_; }
    [[nodiscard]] double operator()(int i, int j) const { return k_(i, j); }
    [[nodiscard]] int size() const noexcept { return static_cast<int>(k_.rows()); }

private:
    Matrix k_;
};

/// κ_ij = 1/(1 + max(deg_i, deg_j)) on edges; diagonal takes the remainder.
[[nodiscard]] WeightMatrix metropolis_weights(const SensorNetwork& net);

/// κ_ij = 1/(1 + deg_i) on the closed neighbourhood. Row- but not column-stochastic.
[[nodiscard]] WeightMatrix lazy_uniform_weights(const SensorNetwork& net);

[[nodiscard]] WeightMatrix consensus_weights(const SensorNetwork& net, WeightRule rule);

/// Left Perron vector: πᵀK = πᵀ, Σπ = 1. Throws NotStochastic / NotPrimitive.
[[nodiscard]] Vector stationary_distribution(const Matrix& k);

// ---------------------------------------------------------------------------
// Matrix-weighted Laplacians

/// Generalized degree/adjacency/Laplacian matrices. Block size d; the
/// "reduced" members drop the anchor's block row and column.
struct LaplacianSet {
    Matrix incidence;         ///< B, n x m, column k = e_j - e_i for edge (i<j)
    Matrix degree;            ///< D
    Matrix adjacency;         ///< A
    Matrix laplacian;         ///< L = D - A
    Matrix signless;          ///< |L| = D + A
    Matrix degree_reduced;    ///< D̃
    Matrix adjacency_reduced; ///< Ã
    Matrix laplacian_reduced; ///< L̃
    Matrix signless_reduced;  ///< |L̃|
    Matrix stacked_incidence;         ///< R = (B ⊗ I_d)ᵀ, md x nd
    Matrix stacked_incidence_reduced; ///< R̃, md x (n-1)d
    Matrix edge_covariance;   ///< block-diagonal ℰ, md x md
};

[[nodiscard]] LaplacianSet laplacian_set(const SensorNetwork& net);

/// L̃ alone, without materializing the full set.
[[nodiscard]] Matrix reduced_laplacian(const SensorNetwork& net);

/// ρ(D̃⁻¹Ã). Throws DisconnectedGraph, and StabilityViolation if the value is >= 1.
[[nodiscard]] double jacobi_spectral_radius(const SensorNetwork& net);

// ---------------------------------------------------------------------------
// Generators. Node 0 is pinned at the origin of the region.

struct Region {
    double lo = -50.0;
    double hi = 50.0;
};

/// Isotropic covariance std² I_d on every edge.
[[nodiscard]] std::vector<Matrix> isotropic_edge_covariances(int edge_count, int dim, double std);

/// Random SPD covariances: scale² (G Gᵀ / d + floor I) with Gaussian G.
[[nodiscard]] std::vector<Matrix> random_edge_covariances(int edge_count, int dim, double scale, Rng& rng,
                                                          double floor = 0.2);

/// Uniform points in the square region (dimension 2), node 0 at the origin.
[[nodiscard]] std::vector<Vector> uniform_positions(int n, const Region& region, Rng& rng);

/// Edges between every pair closer than radius.
[[nodiscard]] std::vector<Edge> geometric_edges(std::span<const Vector> positions, double radius);

/// The m closest pairs (a geometric graph whose radius is tuned to give m edges).
[[nodiscard]] std::vector<Edge> nearest_pair_edges(std::span<const Vector> positions, int m);

[[nodiscard]] std::vector<Edge> erdos_renyi_edges(int n, double p, Rng& rng);

struct GraphSample {
    std::vector<Edge> edges;
    std::vector<Vector> positions;
};

/// Random geometric graph conditioned on connectivity (rejection sampling).
[[nodiscard]] GraphSample random_geometric_graph(int n, double radius, const Region& region, Rng& rng,
                                                 int max_attempts = 1000);

/// Geometric graph with exactly m edges, conditioned on connectivity.
[[nodiscard]] GraphSample random_geometric_graph_with_edges(int n, int m, const Region& region, Rng& rng,
                                                            int max_attempts = 1000);

/// Erdős–Rényi G(n,p) conditioned on connectivity; positions uniform in region.
[[nodiscard]] GraphSample erdos_renyi_graph(int n, double p, const Region& region, Rng& rng,
                                            int max_attempts = 1000);

}  // namespace sensornet
