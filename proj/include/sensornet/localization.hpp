#pragma once

// Distributed Jacobi localization from repeated relative measurements, the
// centralized BLUE it converges to, and error diagnostics.

#include "sensornet/models.hpp"
#include "sensornet/network.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace sensornet {

/// Per-sensor location estimate x̂_i and running average σ_i of the
/// information-weighted relative measurements. The anchor (node 0) is
/// pinned at 0 and keeps σ = 0.
struct LocalizationState {
    std::vector<Vector> estimate;
    std::vector<Vector> sigma;
    long time = 0;  ///< measurement rounds folded into σ
};

/// Measurements of one round: round[i][k] is s_{i,j} for the k-th entry of
/// net.neighbors(i). The anchor's row may be empty.
using RelativeRound = std::vector<std::vector<Vector>>;

/// When a round's measurements enter σ relative to the position update.
enum class FoldOrder {
    FoldFirst,  ///< σ(t+1) first, then x̂(t+1) from it (default)
    Literal,    ///< x̂(t+1) from σ(t), then fold
};

/// Noise structure of the two directed measurements on an edge.
enum class RelativeSampling {
    Independent,    ///< s_ij and s_ji get independent draws
    Antisymmetric,  ///< one draw per edge, s_ji = -s_ij
};

/// Precomputed per-node degree inverses. Holds a reference to the network.
class JacobiLocalizer {
public:
    explicit JacobiLocalizer(const SensorNetwork& net, FoldOrder order = FoldOrder::FoldFirst);

    [[nodiscard]] const SensorNetwork& network() const noexcept { return *net_; }
    [[nodiscard]] FoldOrder order() const noexcept { return order_; }

    /// State with the given initial estimates (anchor forced to 0) and σ = 0.
    [[nodiscard]] LocalizationState initial(std::vector<Vector> estimates) const;
    [[nodiscard]] LocalizationState zero_initial() const;

    /// One synchronous round with new measurements.
    [[nodiscard]] LocalizationState step(const LocalizationState& state, const RelativeRound& round) const;

    /// Jacobi sweep with σ held fixed.
    [[nodiscard]] LocalizationState iterate_frozen(const LocalizationState& state) const;

    /// Running-average fold of one round into σ.
    [[nodiscard]] std::vector<Vector> fold(const LocalizationState& state, const RelativeRound& round) const;

private:
    [[nodiscard]] std::vector<Vector> jacobi_positions(const std::vector<Vector>& estimate,
                                                       const std::vector<Vector>& sigma) const;

    const SensorNetwork* net_;
    FoldOrder order_;
    std::vector<Matrix> degree_inverse_;
};

[[nodiscard]] LocalizationState jacobi_step(const LocalizationState& state, const SensorNetwork& net,
                                            const RelativeRound& round, FoldOrder order = FoldOrder::FoldFirst);

/// Samples every directed measurement of one round.
[[nodiscard]] RelativeRound sample_round(const SensorNetwork& net, Rng& rng, long time = 0,
                                         RelativeSampling sampling = RelativeSampling::Independent);

/// Noise-free round.
[[nodiscard]] RelativeRound exact_round(const SensorNetwork& net);

/// Builds the directed round implied by one measurement per edge, oriented
/// along the edge (x_j - x_i for edge (i<j)); the reverse direction gets the negation.
[[nodiscard]] RelativeRound round_from_edge_measurements(const SensorNetwork& net,
                                                         std::span<const Vector> edge_measurements);

/// Generalized least squares (BLUE) from per-edge averaged measurements,
/// each oriented x_j - x_i for edge (i<j). Returns (n-1)d stacked estimates of nodes 1..n-1.
[[nodiscard]] Vector blue_estimate(const SensorNetwork& net, std::span<const Vector> edge_measurements);

/// Solves L̃ x = -σ̃ directly: the fixed point of the Jacobi iteration for a given σ.
[[nodiscard]] Vector jacobi_fixed_point(const SensorNetwork& net, std::span<const Vector> sigma);

/// Stack of non-anchor estimates, (n-1)d.
[[nodiscard]] Vector stack_non_anchor(std::span<const Vector> per_node);

/// e(t) = x̃ - x̂(t), stacked over non-anchor nodes.
[[nodiscard]] Vector localization_error(const SensorNetwork& net, const LocalizationState& state);

enum class PriorKind { Gaussian, Zeros };

struct LocalizationConfig {
    PriorKind prior = PriorKind::Gaussian;
    double prior_std = 5.0;  ///< std of N(x_i, prior_std² I) for the initial estimates
    FoldOrder order = FoldOrder::FoldFirst;
    RelativeSampling sampling = RelativeSampling::Independent;
    bool keep_history = false;
};

[[nodiscard]] std::vector<Vector> draw_initial_estimates(const SensorNetwork& net, const LocalizationConfig& cfg,
                                                         Rng& rng);

struct LocalizationRun {
    /// squared_error(t, i) = ‖x̂_i(t) - x_i‖², t = 0..T. Anchor column is zero.
    Matrix squared_error;
    std::vector<LocalizationState> history;  ///< t = 0..T when keep_history
    LocalizationState final_state;
};

/// Called with the state after round t (t = 0 is the initial state, with no round).
using LocalizationObserver = std::function<void(long t, const LocalizationState& state, const RelativeRound* round)>;

/// T rounds of sampling, folding and Jacobi updates, with truth-based diagnostics.
[[nodiscard]] LocalizationRun run_localization(const SensorNetwork& net, long rounds, const LocalizationConfig& cfg,
                                               Rng& rng, const LocalizationObserver& observe = {});

}  // namespace sensornet
