#include "sensornet/estimation.hpp"
#include "sensornet/error.hpp"

#include <cmath>

namespace sensornet {

InformationState InformationState::uninformed(int dim, double epsilon) {
    return {Vector::Zero(dim), epsilon * Matrix::Identity(dim, dim), 0};
}

InformationState InformationState::from_moments(const Vector& mean, const Matrix& cov) {
    auto info = spd_inverse(cov);
    if (!info || mean.size() != cov.rows()) fail(ErrorCode::NonSPDNoise, "prior covariance must be SPD");
    return {*info * mean, *info, 0};
}

InformationState geometric_average(std::span<const WeightedState> terms) {
    if (terms.empty()) fail(ErrorCode::WeightSumViolation, "empty neighbourhood");
    const int dim = terms.front().state->dim();
    double total = 0.0;
    InformationState out{Vector::Zero(dim), Matrix::Zero(dim, dim), terms.front().state->time};
    for (const auto& term : terms) {
        if (!(term.weight > 0.0)) fail(ErrorCode::WeightSumViolation, "consensus weights must be positive");
        if (term.state->dim() != dim || term.state->info_matrix.rows() != dim)
            fail(ErrorCode::DimensionMismatch, "neighbour states have inconsistent dimension");
        total += term.weight;
        out.info_vector.noalias() += term.weight * term.state->info_vector;
        out.info_matrix.noalias() += term.weight * term.state->info_matrix;
    }
    if (std::abs(total - 1.0) > 1e-10)
        fail(ErrorCode::WeightSumViolation, "consensus weights sum to " + std::to_string(total));
    out.info_matrix = symmetrized(out.info_matrix);
    return out;
}

InformationState absorb(InformationState state, const LinearMeasurement& m) {
    const auto dim = state.info_vector.size();
    if (m.h.cols() != dim || m.z.size() != m.h.rows() || m.v.rows() != m.h.rows() || m.v.cols() != m.h.rows())
        fail(ErrorCode::DimensionMismatch, "measurement dimensions do not match the state");
    if (m.h.rows() == 0) return state;
    Eigen::LLT<Matrix> llt(m.v);
    if (llt.info() != Eigen::Success || !is_symmetric(m.v))
        fail(ErrorCode::NonSPDNoise, "measurement noise covariance is not SPD");
    const Matrix vinv_h = llt.solve(m.h);
    state.info_vector.noalias() += vinv_h.transpose() * m.z;
    state.info_matrix.noalias() += m.h.transpose() * vinv_h;
    state.info_matrix = symmetrized(state.info_matrix);
    return state;
}

InformationState update(std::span<const WeightedState> neighborhood, const LinearMeasurement& m) {
    InformationState out = absorb(geometric_average(neighborhood), m);
    out.time = neighborhood.front().state->time + 1;
    return out;
}

EstimateResult estimate_checked(const InformationState& state) {
    const Matrix& omega = state.info_matrix;
    Eigen::LLT<Matrix> llt(omega);
    if (llt.info() == Eigen::Success) return {llt.solve(state.info_vector), false};
    // Cholesky failed: accept only if Ω is still numerically full rank.
    if (omega.size() == 0 || numerical_rank(omega, 1e-12) < omega.rows())
        fail(ErrorCode::SingularInformation, "information matrix is singular; not enough information accumulated");
    auto solved = spd_solve(omega, state.info_vector);
    return {std::move(solved.x), true};
}

Vector estimate(const InformationState& state) { return estimate_checked(state).mean; }

InformationState predict(const InformationState& state, const TargetModel& model) {
    if (model.dynamics.rows() != state.dim())
        fail(ErrorCode::DimensionMismatch, "target model does not match state dimension");
    if (model.is_static()) return state;

    Eigen::LLT<Matrix> llt(state.info_matrix);
    if (llt.info() != Eigen::Success)
        fail(ErrorCode::SingularInformation, "prediction needs a positive-definite information matrix");
    const Matrix& f = model.dynamics;
    const Matrix cov = llt.solve(Matrix::Identity(state.dim(), state.dim()));
    const Vector mean = llt.solve(state.info_vector);
    const Matrix predicted_cov = symmetrized(f * cov * f.transpose() + model.process_noise);
    auto info = spd_inverse(predicted_cov);
    if (!info) fail(ErrorCode::NonInvertiblePrediction, "F Ω⁻¹ Fᵀ + W is not positive definite");
    InformationState out{*info * (f * mean), std::move(*info), state.time};
    return out;
}

Eigen::Index stacked_rank(std::span<const Matrix> observation_matrices) {
    if (observation_matrices.empty()) return 0;
    const auto cols = observation_matrices.front().cols();
    Eigen::Index rows = 0;
    for (const auto& h : observation_matrices) {
        if (h.cols() != cols) fail(ErrorCode::DimensionMismatch, "observation matrices have different column counts");
        rows += h.rows();
    }
    Matrix stacked(rows, cols);
    Eigen::Index r = 0;
    for (const auto& h : observation_matrices) {
        stacked.middleRows(r, h.rows()) = h;
        r += h.rows();
    }
    return numerical_rank(stacked, 1e-10);
}

bool check_rank_condition(std::span<const Matrix> observation_matrices) {
    if (observation_matrices.empty()) return false;
    return stacked_rank(observation_matrices) == observation_matrices.front().cols();
}

namespace {

std::vector<WeightedState> neighborhood_terms(const SensorNetwork& net, const WeightMatrix& weights,
                                              std::span<const InformationState> states, int i) {
    std::vector<WeightedState> terms;
    terms.reserve(static_cast<std::size_t>(net.degree(i)) + 1);
    terms.push_back({weights(i, i), &states[static_cast<std::size_t>(i)]});
    for (const auto& nb : net.neighbors(i)) terms.push_back({weights(i, nb.node), &states[static_cast<std::size_t>(nb.node)]});
    return terms;
}

void check_round_inputs(const SensorNetwork& net, const WeightMatrix& weights, std::size_t states,
                        std::size_t measurements) {
    const auto n = static_cast<std::size_t>(net.size());
    if (states != n || measurements != n || weights.size() != net.size())
        fail(ErrorCode::DimensionMismatch, "round needs one state and one measurement per sensor");
}

}  // namespace

std::vector<InformationState> consensus_update(const SensorNetwork& net, const WeightMatrix& weights,
                                               std::span<const InformationState> states,
                                               std::span<const LinearMeasurement> measurements) {
    check_round_inputs(net, weights, states.size(), measurements.size());
    std::vector<InformationState> next;
    next.reserve(states.size());
    for (int i = 0; i < net.size(); ++i) {
        const auto terms = neighborhood_terms(net, weights, states, i);
        next.push_back(update(terms, measurements[static_cast<std::size_t>(i)]));
    }
    return next;
}

RoundResult run_round(const SensorNetwork& net, const WeightMatrix& weights, std::span<const InformationState> states,
                      std::span<const LinearMeasurement> measurements, const TargetModel& model, bool dynamic) {
    RoundResult out;
    out.states = consensus_update(net, weights, states, measurements);
    out.estimates.reserve(out.states.size());
    for (auto& s : out.states) {
        out.estimates.push_back(estimate(s));
        if (dynamic) s = predict(s, model);
    }
    return out;
}

StaticEstimationRun run_static_estimation(const SensorNetwork& net, const WeightMatrix& weights,
                                          std::span<const LinearObservation> observations, const Vector& y,
                                          long rounds, Rng& rng, const StateObserver& observe) {
    const int n = net.size();
    if (static_cast<int>(observations.size()) != n)
        fail(ErrorCode::DimensionMismatch, "need one observation model per sensor");
    StaticEstimationRun run;
    run.squared_error = Matrix::Zero(rounds, n);
    std::vector<InformationState> states(static_cast<std::size_t>(n), InformationState::uninformed(static_cast<int>(y.size())));
    std::vector<LinearMeasurement> meas(static_cast<std::size_t>(n));
    std::vector<Vector> estimates(static_cast<std::size_t>(n));
    for (long t = 0; t < rounds; ++t) {
        for (int i = 0; i < n; ++i) {
            const auto& obs = observations[static_cast<std::size_t>(i)];
            meas[static_cast<std::size_t>(i)] = obs.linearize(net.position(i), observe_linear(obs, net.position(i), y, rng, i, t).z);
        }
        states = consensus_update(net, weights, states, meas);
        for (int i = 0; i < n; ++i) {
            auto& est = estimates[static_cast<std::size_t>(i)];
            est = estimate(states[static_cast<std::size_t>(i)]);
            run.squared_error(t, i) = (est - y).squaredNorm();
            if (observe) observe(t + 1, i, states[static_cast<std::size_t>(i)], est);
        }
    }
    run.final_states = std::move(states);
    run.final_estimates = std::move(estimates);
    return run;
}

Matrix information_limit(const Vector& pi, std::span<const Matrix> sensor_information) {
    if (static_cast<std::size_t>(pi.size()) != sensor_information.size() || sensor_information.empty())
        fail(ErrorCode::DimensionMismatch, "need one sensor information matrix per stationary weight");
    Matrix c = Matrix::Zero(sensor_information.front().rows(), sensor_information.front().cols());
    for (std::size_t j = 0; j < sensor_information.size(); ++j) c += pi(static_cast<Eigen::Index>(j)) * sensor_information[j];
    return symmetrized(c);
}

Matrix normalized_information(const InformationState& state) {
    return state.info_matrix / static_cast<double>(state.time + 1);
}

}  // namespace sensornet
