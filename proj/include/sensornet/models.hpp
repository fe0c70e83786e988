#pragma once

// Target dynamics, sensor observation models and relative-measurement sampling.

#include "sensornet/linalg.hpp"
#include "sensornet/network.hpp"
#include "sensornet/random.hpp"

#include <functional>
#include <utility>

namespace sensornet {

/// y(t+1) = F y(t) + η(t), η ~ N(0, W).
struct TargetModel {
    Matrix dynamics;       ///< F
    Matrix process_noise;  ///< W (symmetric PSD)

    /// Validates shapes and W ⪰ 0.
    static TargetModel make(Matrix f, Matrix w);
    /// F = I, W = 0.
    static TargetModel stationary(int state_dim);

    [[nodiscard]] int state_dim() const noexcept { return static_cast<int>(dynamics.rows()); }
    [[nodiscard]] bool is_static() const;
};

[[nodiscard]] Vector step_target(const TargetModel& model, const Vector& y, Rng& rng);

/// Planar constant-velocity target with state (p1, p2, v1, v2), sampling
/// period tau and diffusion strength q.
[[nodiscard]] TargetModel double_integrator(double tau, double q);

struct Measurement {
    int sensor = 0;
    long time = 0;
    Vector z;
};

/// One linear-Gaussian observation z = H y + v, v ~ N(0, V), ready to be
/// folded into an information state.
struct LinearMeasurement {
    Matrix h;
    Matrix v;
    Vector z;
};

/// Configuration-dependent linear sensor: x ↦ (H(x), V(x)).
struct LinearObservation {
    std::function<Matrix(const Vector&)> h;
    std::function<Matrix(const Vector&)> v;

    /// M(x) = H(x)ᵀ V(x)⁻¹ H(x).
    [[nodiscard]] Matrix information_matrix(const Vector& x) const;
    [[nodiscard]] LinearMeasurement linearize(const Vector& x, Vector z) const { return {h(x), v(x), std::move(z)}; }
};

/// Constant H and V, independent of configuration.
[[nodiscard]] LinearObservation constant_observation(Matrix h, Matrix v);

[[nodiscard]] Measurement observe_linear(const LinearObservation& obs, const Vector& x, const Vector& y, Rng& rng,
                                         int sensor = 0, long time = 0);

// ---------------------------------------------------------------------------
// Range and bearing

/// Noise standard deviations grow as σ0 (1 + α d) with the sensor–target distance d.
struct RangeBearingParams {
    double range_std = 0.5;    ///< σ_r0 [m]
    double bearing_std = 0.02; ///< σ_b0 [rad]
    double growth = 0.05;      ///< α [1/m]

    void validate() const;
    [[nodiscard]] Matrix noise_covariance(double distance) const;
};

/// Wrap to (-π, π].
[[nodiscard]] double wrap_angle(double a);

/// Noise-free (range, bearing) of target position y_pos seen from sensor x.
[[nodiscard]] Vector range_bearing_mean(const Vector& x, const Vector& y_pos);

[[nodiscard]] Measurement observe_range_bearing(const RangeBearingParams& params, const Vector& x,
                                                const Vector& y_pos, Rng& rng, int sensor = 0, long time = 0);

struct Linearization {
    Matrix h;  ///< 2 x state_dim, zero on the non-position columns
    Matrix v;  ///< noise covariance at the linearization distance
};

/// Jacobian of the range/bearing map at the estimated target position.
[[nodiscard]] Linearization linearize_range_bearing(const RangeBearingParams& params, const Vector& x,
                                                    const Vector& y_pos_hat, int state_dim = 4);

/// Converts a raw range/bearing measurement into the linear measurement
/// z̃ = z - h(ŷ) + H ŷ about the linearization state ŷ. The bearing residual
/// is taken on the branch nearest the predicted bearing.
[[nodiscard]] LinearMeasurement range_bearing_linear_measurement(const RangeBearingParams& params,
                                                                 const Vector& x, const Vector& z,
                                                                 const Vector& y_lin);

// ---------------------------------------------------------------------------
// Relative measurements

/// s = x_about - x_from + ε, taken by sensor `from`.
struct RelativeMeasurement {
    int from = 0;
    int about = 0;
    long time = 0;
    Vector s;
};

/// Both directed measurements over edge {i, j}, with independent noise draws.
[[nodiscard]] std::pair<RelativeMeasurement, RelativeMeasurement> sample_relative(const SensorNetwork& net, int i,
                                                                                   int j, Rng& rng, long time = 0);

}  // namespace sensornet
