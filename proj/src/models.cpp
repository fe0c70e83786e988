#include "sensornet/models.hpp"
#include "sensornet/error.hpp"

#include <cmath>
#include <numbers>

namespace sensornet {

TargetModel TargetModel::make(Matrix f, Matrix w) {
    if (f.rows() != f.cols() || w.rows() != f.rows() || w.cols() != f.cols())
        fail(ErrorCode::DimensionMismatch, "target model needs square F and W of equal size");
    if (!w.isZero(0.0) && !is_psd(w)) fail(ErrorCode::NonSPDNoise, "process noise W must be symmetric PSD");
    return TargetModel{std::move(f), std::move(w)};
}

TargetModel TargetModel::stationary(int state_dim) {
    return TargetModel{Matrix::Identity(state_dim, state_dim), Matrix::Zero(state_dim, state_dim)};
}

bool TargetModel::is_static() const {
    return dynamics.isIdentity(0.0) && process_noise.isZero(0.0);
}

Vector step_target(const TargetModel& model, const Vector& y, Rng& rng) {
    if (y.size() != model.dynamics.cols()) fail(ErrorCode::DimensionMismatch, "target state has wrong dimension");
    return model.dynamics * y + sample_gaussian(model.process_noise, rng);
}

TargetModel double_integrator(double tau, double q) {
    if (!(tau > 0.0)) fail(ErrorCode::NonPositiveParam, "sampling period tau must be positive");
    if (!(q >= 0.0)) fail(ErrorCode::NonPositiveParam, "diffusion strength q must be non-negative");
    const Matrix i2 = Matrix::Identity(2, 2);
    Matrix f = Matrix::Identity(4, 4);
    f.topRightCorner(2, 2) = tau * i2;
    Matrix w(4, 4);
    w << tau * tau * tau / 3.0 * i2, tau * tau / 2.0 * i2,
         tau * tau / 2.0 * i2,       tau * i2;
    return TargetModel{f, q * w};
}

Matrix LinearObservation::information_matrix(const Vector& x) const {
    const Matrix hx = h(x);
    Eigen::LLT<Matrix> llt(v(x));
    if (llt.info() != Eigen::Success) fail(ErrorCode::NonSPDNoise, "observation noise V(x) is not SPD");
    return symmetrized(hx.transpose() * llt.solve(hx));
}

LinearObservation constant_observation(Matrix h, Matrix v) {
    if (v.rows() != h.rows() || v.cols() != h.rows())
        fail(ErrorCode::DimensionMismatch, "V must be d_z x d_z with d_z = rows(H)");
    if (!is_spd(v)) fail(ErrorCode::NonSPDNoise, "observation noise V must be SPD");
    return LinearObservation{[h](const Vector&) { return h; }, [v](const Vector&) { return v; }};
}

Measurement observe_linear(const LinearObservation& obs, const Vector& x, const Vector& y, Rng& rng, int sensor,
                           long time) {
    const Matrix hx = obs.h(x);
    if (hx.cols() != y.size()) fail(ErrorCode::DimensionMismatch, "H(x) columns do not match target dimension");
    return {sensor, time, hx * y + sample_gaussian(obs.v(x), rng)};
}

// ---------------------------------------------------------------------------

void RangeBearingParams::validate() const {
    if (!(range_std > 0.0) || !(bearing_std > 0.0))
        fail(ErrorCode::NonPositiveParam, "range and bearing noise stds must be positive");
    if (!(growth >= 0.0)) fail(ErrorCode::NonPositiveParam, "noise growth coefficient must be non-negative");
}

Matrix RangeBearingParams::noise_covariance(double distance) const {
    const double scale = 1.0 + growth * distance;
    Matrix v = Matrix::Zero(2, 2);
    v(0, 0) = std::pow(range_std * scale, 2);
    v(1, 1) = std::pow(bearing_std * scale, 2);
    return v;
}

double wrap_angle(double a) {
    constexpr double pi = std::numbers::pi;
    double r = std::remainder(a, 2.0 * pi);  // in [-π, π]
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

namespace {

Vector planar_offset(const Vector& x, const Vector& y_pos) {
    if (x.size() != 2 || y_pos.size() < 2)
        fail(ErrorCode::DimensionMismatch, "range/bearing sensing is planar");
    Vector delta = y_pos.head(2) - x;
    if (delta.squaredNorm() == 0.0)
        fail(ErrorCode::CoincidentTargetSensor, "target coincides with sensor position");
    return delta;
}

}  // namespace

Vector range_bearing_mean(const Vector& x, const Vector& y_pos) {
    const Vector delta = planar_offset(x, y_pos);
    Vector z(2);
    z << delta.norm(), std::atan2(delta(1), delta(0));
    return z;
}

Measurement observe_range_bearing(const RangeBearingParams& params, const Vector& x, const Vector& y_pos, Rng& rng,
                                  int sensor, long time) {
    params.validate();
    Vector z = range_bearing_mean(x, y_pos);
    z += sample_gaussian(params.noise_covariance(z(0)), rng);
    return {sensor, time, z};
}

Linearization linearize_range_bearing(const RangeBearingParams& params, const Vector& x, const Vector& y_pos_hat,
                                      int state_dim) {
    params.validate();
    if (state_dim < 2) fail(ErrorCode::DimensionMismatch, "state must contain a planar position");
    const Vector delta = planar_offset(x, y_pos_hat);
    const double d2 = delta.squaredNorm();
    const double d = std::sqrt(d2);
    Matrix h = Matrix::Zero(2, state_dim);
    h(0, 0) = delta(0) / d;
    h(0, 1) = delta(1) / d;
    h(1, 0) = -delta(1) / d2;
    h(1, 1) = delta(0) / d2;
    return {h, params.noise_covariance(d)};
}

LinearMeasurement range_bearing_linear_measurement(const RangeBearingParams& params, const Vector& x,
                                                   const Vector& z, const Vector& y_lin) {
    if (z.size() != 2) fail(ErrorCode::DimensionMismatch, "range/bearing measurement must have two entries");
    auto lin = linearize_range_bearing(params, x, y_lin.head(2), static_cast<int>(y_lin.size()));
    const Vector predicted = range_bearing_mean(x, y_lin.head(2));
    Vector residual = z - predicted;
    residual(1) = wrap_angle(residual(1));
    Vector pseudo = residual + lin.h * y_lin;
    return {std::move(lin.h), std::move(lin.v), std::move(pseudo)};
}

std::pair<RelativeMeasurement, RelativeMeasurement> sample_relative(const SensorNetwork& net, int i, int j, Rng& rng,
                                                                     long time) {
    const auto k = net.edge_index(i, j);
    if (!k) fail(ErrorCode::NotAnEdge, "{" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "} is not an edge");
    const Matrix& cov = net.edge_cov(*k);
    const Vector diff = net.position(j) - net.position(i);
    RelativeMeasurement ij{i, j, time, diff + sample_gaussian(cov, rng)};
    RelativeMeasurement ji{j, i, time, -diff + sample_gaussian(cov, rng)};
    return {std::move(ij), std::move(ji)};
}

}  // namespace sensornet
