#include "sensornet/joint.hpp"
#include "sensornet/error.hpp"

namespace sensornet {

void JointConfig::validate() const {
    if (!(delta > 0.0)) fail(ErrorCode::NonPositiveDelta, "regularization delta must be positive");
}

Vector regularized_estimate(const InformationState& state, double delta) {
    if (!(delta > 0.0)) fail(ErrorCode::NonPositiveDelta, "regularization delta must be positive");
    Matrix reg = state.info_matrix;
    reg.diagonal().array() += static_cast<double>(state.time) * delta;
    auto solved = spd_solve(reg, state.info_vector);
    if (solved.degraded) fail(ErrorCode::SingularMatrix, "regularized information matrix is not positive definite");
    return solved.x;
}

JointUpdate joint_update(std::span<const WeightedState> neighborhood, const LinearObservation& obs,
                         const Vector& x_hat, const Vector& z, double delta) {
    if (!(delta > 0.0)) fail(ErrorCode::NonPositiveDelta, "regularization delta must be positive");
    InformationState next = update(neighborhood, obs.linearize(x_hat, z));
    Vector y_hat = regularized_estimate(next, delta);
    return {std::move(next), std::move(y_hat)};
}

double predict_asymptotic_mse(const Matrix& information_limit, double delta, const Vector& y) {
    if (!(delta > 0.0)) fail(ErrorCode::NonPositiveDelta, "regularization delta must be positive");
    if (information_limit.rows() != y.size() || information_limit.cols() != y.size())
        fail(ErrorCode::DimensionMismatch, "information limit and target state sizes differ");
    Matrix reg = information_limit;
    reg.diagonal().array() += delta;
    Eigen::LLT<Matrix> llt(reg);
    if (llt.info() != Eigen::Success) fail(ErrorCode::SingularMatrix, "Σπ_jM_j + δI is not positive definite");
    const Vector w = llt.solve(y);
    return delta * delta * w.squaredNorm();
}

double predict_asymptotic_mse(const Vector& pi, std::span<const Matrix> sensor_information, double delta,
                              const Vector& y) {
    return predict_asymptotic_mse(information_limit(pi, sensor_information), delta, y);
}

JointRun run_joint(const SensorNetwork& net, const WeightMatrix& weights, std::span<const LinearObservation> observations,
                   const Vector& y, const JointConfig& cfg, long rounds, Rng& rng, const StateObserver& observe) {
    cfg.validate();
    const int n = net.size();
    if (static_cast<int>(observations.size()) != n)
        fail(ErrorCode::DimensionMismatch, "need one observation model per sensor");
    if (!net.is_connected()) fail(ErrorCode::DisconnectedGraph, "joint estimation requires a connected graph");

    std::vector<Matrix> info_at_truth;
    info_at_truth.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) info_at_truth.push_back(observations[static_cast<std::size_t>(i)].information_matrix(net.position(i)));

    JointRun run;
    run.predicted_mse = predict_asymptotic_mse(stationary_distribution(weights.matrix()), info_at_truth, cfg.delta, y);
    run.location_squared_error = Matrix::Zero(rounds + 1, n);
    run.target_squared_error = Matrix::Zero(rounds, n);

    const JacobiLocalizer loc(net, cfg.localization.order);
    LocalizationState where = loc.initial(draw_initial_estimates(net, cfg.localization, rng));
    std::vector<InformationState> states(static_cast<std::size_t>(n), InformationState::uninformed(static_cast<int>(y.size())));

    auto record_location = [&](Eigen::Index row) {
        for (int i = 0; i < n; ++i)
            run.location_squared_error(row, i) = (where.estimate[static_cast<std::size_t>(i)] - net.position(i)).squaredNorm();
    };
    record_location(0);

    std::vector<WeightedState> terms;
    std::vector<InformationState> next(static_cast<std::size_t>(n));
    for (long t = 0; t < rounds; ++t) {
        for (int i = 0; i < n; ++i) {
            const auto& obs = observations[static_cast<std::size_t>(i)];
            const Vector z = observe_linear(obs, net.position(i), y, rng, i, t).z;
            terms.clear();
            terms.push_back({weights(i, i), &states[static_cast<std::size_t>(i)]});
            for (const auto& nb : net.neighbors(i)) terms.push_back({weights(i, nb.node), &states[static_cast<std::size_t>(nb.node)]});
            auto up = joint_update(terms, obs, where.estimate[static_cast<std::size_t>(i)], z, cfg.delta);
            run.target_squared_error(t, i) = (up.estimate - y).squaredNorm();
            if (observe) observe(t + 1, i, up.state, up.estimate);
            next[static_cast<std::size_t>(i)] = std::move(up.state);
        }
        states.swap(next);
        where = loc.step(where, sample_round(net, rng, t, cfg.localization.sampling));
        record_location(t + 1);
    }
    run.final_states = std::move(states);
    run.final_localization = std::move(where);
    return run;
}

}  // namespace sensornet
