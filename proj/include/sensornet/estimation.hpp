#pragma once

// Distributed linear estimator in information form. Each sensor averages its
// neighbours' information pairs with consensus weights (the Gaussian
// weighted geometric mean of their beliefs), adds its own measurement
// information, and optionally runs a Kalman prediction step.

#include "sensornet/models.hpp"
#include "sensornet/network.hpp"

#include <functional>
#include <span>
#include <vector>

namespace sensornet {

/// Gaussian belief with mean Ω⁻¹ω and covariance Ω⁻¹.
struct InformationState {
    Vector info_vector;  ///< ω
    Matrix info_matrix;  ///< Ω
    long time = 0;       ///< number of update rounds applied

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(info_vector.size()); }

    /// ω = 0, Ω = ε I.
    static InformationState uninformed(int dim, double epsilon = 1e-9);
    /// Prior N(mean, cov) in information form.
    static InformationState from_moments(const Vector& mean, const Matrix& cov);
};

/// One term of the neighbourhood average.
struct WeightedState {
    double weight = 0.0;
    const InformationState* state = nullptr;
};

/// Weighted average of information pairs. Weights must be positive and sum to 1.
[[nodiscard]] InformationState geometric_average(std::span<const WeightedState> terms);

/// Folds one linear measurement into a belief (information-form Bayes step).
[[nodiscard]] InformationState absorb(InformationState state, const LinearMeasurement& m);

/// Neighbourhood average followed by the local measurement update. The
/// resulting time index is one past that of the first term, which is by
/// convention the updating sensor itself.
[[nodiscard]] InformationState update(std::span<const WeightedState> neighborhood, const LinearMeasurement& m);

/// ŷ = Ω⁻¹ω. Throws SingularInformation when Ω is not invertible.
[[nodiscard]] Vector estimate(const InformationState& state);

struct EstimateResult {
    Vector mean;
    bool degraded = false;  ///< Cholesky failed, pseudo-inverse used
};
[[nodiscard]] EstimateResult estimate_checked(const InformationState& state);

/// Kalman prediction: Ω' = (F Ω⁻¹ Fᵀ + W)⁻¹, ω' = Ω' F ŷ. Identity for static models.
[[nodiscard]] InformationState predict(const InformationState& state, const TargetModel& model);

/// True iff the stacked [H_1; ...; H_n] has rank equal to its column count.
[[nodiscard]] bool check_rank_condition(std::span<const Matrix> observation_matrices);
[[nodiscard]] Eigen::Index stacked_rank(std::span<const Matrix> observation_matrices);

struct RoundResult {
    std::vector<InformationState> states;  ///< after update (and prediction when dynamic)
    std::vector<Vector> estimates;         ///< posterior means, extracted before prediction
};

/// One synchronous round: every sensor reads only the previous round's states.
/// Order per sensor: update, estimate, then predict when `dynamic`.
[[nodiscard]] RoundResult run_round(const SensorNetwork& net, const WeightMatrix& weights,
                                    std::span<const InformationState> states,
                                    std::span<const LinearMeasurement> measurements, const TargetModel& model,
                                    bool dynamic);

/// Update-only variant of run_round for static targets, without estimate extraction.
[[nodiscard]] std::vector<InformationState> consensus_update(const SensorNetwork& net, const WeightMatrix& weights,
                                                             std::span<const InformationState> states,
                                                             std::span<const LinearMeasurement> measurements);

// ---------------------------------------------------------------------------
// Static-target simulation

using StateObserver = std::function<void(long t, int node, const InformationState& state, const Vector& estimate)>;

struct StaticEstimationRun {
    Matrix squared_error;  ///< T x n, row t-1 = ‖ŷ_i(t) - y‖²
    std::vector<InformationState> final_states;
    std::vector<Vector> final_estimates;
};

/// T synchronous rounds against a fixed target y, sensors at their true positions.
[[nodiscard]] StaticEstimationRun run_static_estimation(const SensorNetwork& net, const WeightMatrix& weights,
                                                        std::span<const LinearObservation> observations,
                                                        const Vector& y, long rounds, Rng& rng,
                                                        const StateObserver& observe = {});

// ---------------------------------------------------------------------------
// Diagnostics

/// Σ_j π_j M_j: the limit of Ω_{i,t}/(t+1) for a static target.
[[nodiscard]] Matrix information_limit(const Vector& pi, std::span<const Matrix> sensor_information);

/// Ω_{i,t}/(t+1).
[[nodiscard]] Matrix normalized_information(const InformationState& state);

}  // namespace sensornet
