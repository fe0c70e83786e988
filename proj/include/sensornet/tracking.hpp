#pragma once

// Multi-target tracking with linearized range/bearing sensors. Targets are
// dynamically independent and measurements are labelled by target, so every
// sensor runs one distributed filter per target.

#include "sensornet/estimation.hpp"

#include <functional>

namespace sensornet {

struct TrackingSpec {
    int targets = 10;
    double tau = 1.0;
    double q = 0.01;
    RangeBearingParams sensor{};
    double init_position_std = 5.0;  ///< initial target positions ~ N(0, std² I)
    double init_speed = 1.0;         ///< initial speed, uniformly random heading
    double prior_position_std = 1.0;
    double prior_velocity_std = 0.5;
};

struct TrackingRun {
    Matrix position_squared_error;  ///< T x n, summed over targets
    Matrix velocity_squared_error;  ///< T x n, summed over targets
    int targets = 0;
};

using TrackingObserver =
    std::function<void(long t, int node, int target, const InformationState& state, const Vector& estimate)>;

/// Per round: each sensor measures every target, linearizes about its own
/// predicted mean, runs the consensus update, extracts its estimate, then predicts.
[[nodiscard]] TrackingRun run_tracking(const SensorNetwork& net, const WeightMatrix& weights, const TrackingSpec& spec,
                                       long rounds, Rng& rng, const TrackingObserver& observe = {});

}  // namespace sensornet
