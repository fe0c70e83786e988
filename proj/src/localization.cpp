#include "sensornet/localization.hpp"
#include "sensornet/error.hpp"

namespace sensornet {

JacobiLocalizer::JacobiLocalizer(const SensorNetwork& net, FoldOrder order) : net_(&net), order_(order) {
    const int d = net.dim();
    degree_inverse_.assign(static_cast<std::size_t>(net.size()), Matrix::Zero(d, d));
    for (int i = 1; i < net.size(); ++i) {
        if (net.degree(i) == 0)
            fail(ErrorCode::DisconnectedGraph, "sensor " + std::to_string(i + 1) + " has no neighbours to localize from");
        Matrix deg = Matrix::Zero(d, d);
        for (const auto& nb : net.neighbors(i)) deg += net.edge_info(nb.edge);
        auto inv = spd_inverse(deg);
        if (!inv) fail(ErrorCode::SingularDegreeBlock, "degree block of sensor " + std::to_string(i + 1) + " is singular");
        degree_inverse_[static_cast<std::size_t>(i)] = std::move(*inv);
    }
}

LocalizationState JacobiLocalizer::initial(std::vector<Vector> estimates) const {
    const int d = net_->dim();
    if (static_cast<int>(estimates.size()) != net_->size())
        fail(ErrorCode::DimensionMismatch, "need one initial estimate per sensor");
    for (const auto& e : estimates)
        if (e.size() != d) fail(ErrorCode::DimensionMismatch, "initial estimate has wrong dimension");
    estimates.front().setZero();
    std::vector<Vector> sigma(estimates.size(), Vector::Zero(d));
    return {std::move(estimates), std::move(sigma), 0};
}

LocalizationState JacobiLocalizer::zero_initial() const {
    return initial(std::vector<Vector>(static_cast<std::size_t>(net_->size()), Vector::Zero(net_->dim())));
}

std::vector<Vector> JacobiLocalizer::fold(const LocalizationState& state, const RelativeRound& round) const {
    const int n = net_->size();
    if (static_cast<int>(round.size()) != n)
        fail(ErrorCode::MissingMeasurement, "round must list measurements for every sensor");
    const double t = static_cast<double>(state.time);
    std::vector<Vector> sigma = state.sigma;
    for (int i = 1; i < n; ++i) {
        const auto nbrs = net_->neighbors(i);
        const auto& meas = round[static_cast<std::size_t>(i)];
        if (meas.size() != nbrs.size())
            fail(ErrorCode::MissingMeasurement,
                 "sensor " + std::to_string(i + 1) + " is missing relative measurements this round");
        Vector fresh = Vector::Zero(net_->dim());
        for (std::size_t k = 0; k < nbrs.size(); ++k) fresh.noalias() += net_->edge_info(nbrs[k].edge) * meas[k];
        auto& s = sigma[static_cast<std::size_t>(i)];
        s = (t * s + fresh) / (t + 1.0);
    }
    return sigma;
}

std::vector<Vector> JacobiLocalizer::jacobi_positions(const std::vector<Vector>& estimate,
                                                      const std::vector<Vector>& sigma) const {
    const int n = net_->size();
    std::vector<Vector> next(static_cast<std::size_t>(n), Vector::Zero(net_->dim()));
    for (int i = 1; i < n; ++i) {
        Vector acc = -sigma[static_cast<std::size_t>(i)];
        for (const auto& nb : net_->neighbors(i))
            acc.noalias() += net_->edge_info(nb.edge) * estimate[static_cast<std::size_t>(nb.node)];
        next[static_cast<std::size_t>(i)] = degree_inverse_[static_cast<std::size_t>(i)] * acc;
    }
    return next;
}

LocalizationState JacobiLocalizer::step(const LocalizationState& state, const RelativeRound& round) const {
    LocalizationState next;
    next.time = state.time + 1;
    if (order_ == FoldOrder::FoldFirst) {
        next.sigma = fold(state, round);
        next.estimate = jacobi_positions(state.estimate, next.sigma);
    } else {
        next.estimate = jacobi_positions(state.estimate, state.sigma);
        next.sigma = fold(state, round);
    }
    return next;
}

LocalizationState JacobiLocalizer::iterate_frozen(const LocalizationState& state) const {
    return {jacobi_positions(state.estimate, state.sigma), state.sigma, state.time};
}

LocalizationState jacobi_step(const LocalizationState& state, const SensorNetwork& net, const RelativeRound& round,
                              FoldOrder order) {
    return JacobiLocalizer(net, order).step(state, round);
}

namespace {

RelativeRound empty_round(const SensorNetwork& net) {
    RelativeRound round(static_cast<std::size_t>(net.size()));
    for (int i = 0; i < net.size(); ++i) round[static_cast<std::size_t>(i)].resize(net.neighbors(i).size());
    return round;
}

// Scatters per-edge directed values into the adjacency-ordered round.
template <typename Forward, typename Backward>
RelativeRound scatter(const SensorNetwork& net, Forward&& forward, Backward&& backward) {
    RelativeRound round = empty_round(net);
    for (int i = 0; i < net.size(); ++i) {
        const auto nbrs = net.neighbors(i);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            const auto& e = net.edges()[static_cast<std::size_t>(nbrs[k].edge)];
            round[static_cast<std::size_t>(i)][k] = (e.i == i) ? forward(nbrs[k].edge) : backward(nbrs[k].edge);
        }
    }
    return round;
}

}  // namespace

RelativeRound sample_round(const SensorNetwork& net, Rng& rng, long time, RelativeSampling sampling) {
    const auto m = static_cast<std::size_t>(net.edge_count());
    std::vector<Vector> fwd(m), bwd(m);
    for (std::size_t k = 0; k < m; ++k) {
        const auto& e = net.edges()[k];
        if (sampling == RelativeSampling::Independent) {
            auto [ij, ji] = sample_relative(net, e.i, e.j, rng, time);
            fwd[k] = std::move(ij.s);
            bwd[k] = std::move(ji.s);
        } else {
            fwd[k] = net.position(e.j) - net.position(e.i) + sample_gaussian(net.edge_cov(static_cast<int>(k)), rng);
            bwd[k] = -fwd[k];
        }
    }
    return scatter(net, [&](int k) { return fwd[static_cast<std::size_t>(k)]; },
                   [&](int k) { return bwd[static_cast<std::size_t>(k)]; });
}

RelativeRound exact_round(const SensorNetwork& net) {
    auto diff = [&](int k) {
        const auto& e = net.edges()[static_cast<std::size_t>(k)];
        return Vector(net.position(e.j) - net.position(e.i));
    };
    return scatter(net, diff, [&](int k) { return Vector(-diff(k)); });
}

RelativeRound round_from_edge_measurements(const SensorNetwork& net, std::span<const Vector> edge_measurements) {
    if (static_cast<int>(edge_measurements.size()) != net.edge_count())
        fail(ErrorCode::DimensionMismatch, "need one measurement per edge");
    return scatter(net, [&](int k) { return edge_measurements[static_cast<std::size_t>(k)]; },
                   [&](int k) { return Vector(-edge_measurements[static_cast<std::size_t>(k)]); });
}

namespace {

Vector solve_reduced(const SensorNetwork& net, const Vector& rhs) {
    if (!net.is_connected()) fail(ErrorCode::DisconnectedGraph, "localization requires a connected graph");
    if (net.size() == 1) return Vector{};
    Eigen::LLT<Matrix> llt(reduced_laplacian(net));
    if (llt.info() != Eigen::Success) fail(ErrorCode::SingularMatrix, "reduced Laplacian is not positive definite");
    return llt.solve(rhs);
}

}  // namespace

Vector blue_estimate(const SensorNetwork& net, std::span<const Vector> edge_measurements) {
    if (static_cast<int>(edge_measurements.size()) != net.edge_count())
        fail(ErrorCode::DimensionMismatch, "need one averaged measurement per edge");
    const int d = net.dim();
    Vector rhs = Vector::Zero((net.size() - 1) * d);
    for (int k = 0; k < net.edge_count(); ++k) {
        const auto& e = net.edges()[static_cast<std::size_t>(k)];
        const Vector w = net.edge_info(k) * edge_measurements[static_cast<std::size_t>(k)];
        if (e.i > 0) rhs.segment((e.i - 1) * d, d) -= w;
        if (e.j > 0) rhs.segment((e.j - 1) * d, d) += w;
    }
    return solve_reduced(net, rhs);
}

Vector jacobi_fixed_point(const SensorNetwork& net, std::span<const Vector> sigma) {
    if (static_cast<int>(sigma.size()) != net.size()) fail(ErrorCode::DimensionMismatch, "need one σ per sensor");
    return solve_reduced(net, -stack_non_anchor(sigma));
}

Vector stack_non_anchor(std::span<const Vector> per_node) {
    if (per_node.size() <= 1) return Vector{};
    const auto d = per_node.front().size();
    Vector out((static_cast<Eigen::Index>(per_node.size()) - 1) * d);
    for (std::size_t i = 1; i < per_node.size(); ++i) out.segment((static_cast<Eigen::Index>(i) - 1) * d, d) = per_node[i];
    return out;
}

Vector localization_error(const SensorNetwork& net, const LocalizationState& state) {
    return stack_non_anchor(net.positions()) - stack_non_anchor(state.estimate);
}

std::vector<Vector> draw_initial_estimates(const SensorNetwork& net, const LocalizationConfig& cfg, Rng& rng) {
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(net.size()));
    for (int i = 0; i < net.size(); ++i) {
        if (cfg.prior == PriorKind::Zeros || i == 0) {
            out.push_back(Vector::Zero(net.dim()));
        } else {
            out.push_back(net.position(i) + cfg.prior_std * standard_normal(net.dim(), rng));
        }
    }
    return out;
}

namespace {

void record_errors(const SensorNetwork& net, const LocalizationState& s, Matrix& sq, Eigen::Index row) {
    for (int i = 0; i < net.size(); ++i)
        sq(row, i) = (s.estimate[static_cast<std::size_t>(i)] - net.position(i)).squaredNorm();
}

}  // namespace

LocalizationRun run_localization(const SensorNetwork& net, long rounds, const LocalizationConfig& cfg, Rng& rng,
                                 const LocalizationObserver& observe) {
    if (rounds < 0) fail(ErrorCode::NonPositiveParam, "number of rounds must be non-negative");
    if (!net.is_connected()) fail(ErrorCode::DisconnectedGraph, "localization requires a connected graph");
    const JacobiLocalizer loc(net, cfg.order);
    LocalizationRun run;
    run.squared_error = Matrix::Zero(rounds + 1, net.size());
    LocalizationState state = loc.initial(draw_initial_estimates(net, cfg, rng));
    record_errors(net, state, run.squared_error, 0);
    if (cfg.keep_history) run.history.push_back(state);
    if (observe) observe(0, state, nullptr);
    for (long t = 0; t < rounds; ++t) {
        const RelativeRound round = sample_round(net, rng, t, cfg.sampling);
        state = loc.step(state, round);
        record_errors(net, state, run.squared_error, t + 1);
        if (cfg.keep_history) run.history.push_back(state);
        if (observe) observe(t + 1, state, &round);
    }
    run.final_state = std::move(state);
    return run;
}

}  // namespace sensornet
