#pragma once

// Joint localization and target estimation: the target filter uses each
// sensor's current location estimate in place of its true configuration,
// with a δ-regularized estimate extraction.

#include "sensornet/estimation.hpp"
#include "sensornet/localization.hpp"

#include <span>
#include <vector>

namespace sensornet {

struct JointConfig {
    double delta = 0.05;
    LocalizationConfig localization{};

    void validate() const;
};

/// ŷ = (Ω + t δ I)⁻¹ ω with t = state.time.
[[nodiscard]] Vector regularized_estimate(const InformationState& state, double delta);

struct JointUpdate {
    InformationState state;
    Vector estimate;
};

/// Neighbourhood average plus a measurement update whose H and V are
/// evaluated at the sensor's estimated configuration x_hat.
[[nodiscard]] JointUpdate joint_update(std::span<const WeightedState> neighborhood, const LinearObservation& obs,
                                       const Vector& x_hat, const Vector& z, double delta);

/// δ² yᵀ (Σ_j π_j M_j + δ I)⁻² y.
[[nodiscard]] double predict_asymptotic_mse(const Vector& pi, std::span<const Matrix> sensor_information,
                                            double delta, const Vector& y);

/// Same quantity from the information limit C = Σ_j π_j M_j.
[[nodiscard]] double predict_asymptotic_mse(const Matrix& information_limit, double delta, const Vector& y);

struct JointRun {
    Matrix location_squared_error;  ///< (T+1) x n, row t = ‖x̂_i(t) - x_i‖²
    Matrix target_squared_error;    ///< T x n, row t-1 = ‖ŷ_i(t) - y‖²
    double predicted_mse = 0.0;
    std::vector<InformationState> final_states;
    LocalizationState final_localization;
};

/// Runs localization and target estimation side by side for `rounds` rounds.
/// Each round: target measurements at true positions, joint update using
/// x̂(t), then one relative-measurement round advancing x̂ to t+1.
[[nodiscard]] JointRun run_joint(const SensorNetwork& net, const WeightMatrix& weights,
                                 std::span<const LinearObservation> observations, const Vector& y,
                                 const JointConfig& cfg, long rounds, Rng& rng, const StateObserver& observe = {});

}  // namespace sensornet
