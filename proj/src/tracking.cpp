#include "sensornet/tracking.hpp"
#include "sensornet/error.hpp"

#include <cmath>
#include <numbers>

namespace sensornet {

namespace {

// Below this distance the bearing Jacobian is not meaningful; the sensor skips the target.
constexpr double kMinLinearizationDistance = 1e-6;

}  // namespace

TrackingRun run_tracking(const SensorNetwork& net, const WeightMatrix& weights, const TrackingSpec& spec, long rounds,
                         Rng& rng, const TrackingObserver& observe) {
    spec.sensor.validate();
    if (net.dim() != 2) fail(ErrorCode::DimensionMismatch, "tracking needs planar sensor positions");
    const int n = net.size();
    const auto targets = static_cast<std::size_t>(spec.targets);
    const TargetModel model = double_integrator(spec.tau, spec.q);

    Matrix prior_cov = Matrix::Zero(4, 4);
    prior_cov.diagonal() << Vector::Constant(2, spec.prior_position_std * spec.prior_position_std),
        Vector::Constant(2, spec.prior_velocity_std * spec.prior_velocity_std);

    std::vector<Vector> truth(targets);
    std::vector<std::vector<InformationState>> states(targets);
    for (std::size_t j = 0; j < targets; ++j) {
        Vector y(4);
        const double heading = uniform(-std::numbers::pi, std::numbers::pi, rng);
        y.head(2) = spec.init_position_std * standard_normal(2, rng);
        y.tail(2) << spec.init_speed * std::cos(heading), spec.init_speed * std::sin(heading);
        truth[j] = y;
        const Vector prior_mean = y + sample_gaussian(prior_cov, rng);
        states[j].assign(static_cast<std::size_t>(n), InformationState::from_moments(prior_mean, prior_cov));
    }

    TrackingRun run;
    run.targets = spec.targets;
    run.position_squared_error = Matrix::Zero(rounds, n);
    run.velocity_squared_error = Matrix::Zero(rounds, n);

    std::vector<LinearMeasurement> meas(static_cast<std::size_t>(n));
    for (long t = 0; t < rounds; ++t) {
        for (std::size_t j = 0; j < targets; ++j) {
            const Vector& y = truth[j];
            for (int i = 0; i < n; ++i) {
                const Vector& x = net.position(i);
                const Measurement z = observe_range_bearing(spec.sensor, x, y.head(2), rng, i, t);
                const Vector y_lin = estimate(states[j][static_cast<std::size_t>(i)]);
                auto& m = meas[static_cast<std::size_t>(i)];
                if ((y_lin.head(2) - x).norm() < kMinLinearizationDistance) {
                    m = LinearMeasurement{Matrix::Zero(0, 4), Matrix::Zero(0, 0), Vector::Zero(0)};
                } else {
                    m = range_bearing_linear_measurement(spec.sensor, x, z.z, y_lin);
                }
            }
            auto round = run_round(net, weights, states[j], meas, model, true);
            for (int i = 0; i < n; ++i) {
                const Vector& est = round.estimates[static_cast<std::size_t>(i)];
                run.position_squared_error(t, i) += (est.head(2) - y.head(2)).squaredNorm();
                run.velocity_squared_error(t, i) += (est.tail(2) - y.tail(2)).squaredNorm();
                if (observe) observe(t + 1, i, static_cast<int>(j), round.states[static_cast<std::size_t>(i)], est);
            }
            states[j] = std::move(round.states);
            truth[j] = step_target(model, y, rng);
        }
    }
    return run;
}

}  // namespace sensornet
