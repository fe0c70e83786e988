#include "sensornet/field.hpp"
#include "sensornet/error.hpp"

#include <algorithm>
#include <cmath>

namespace sensornet {

Vector FieldGrid::center(int c) const {
    Vector p(2);
    p << origin_x + (c % nx + 0.5) * cell, origin_y + (c / nx + 0.5) * cell;
    return p;
}

FieldGrid FieldGrid::centered(int nx, int ny, double cell) {
    return FieldGrid{nx, ny, cell, -0.5 * nx * cell, -0.5 * ny * cell};
}

void FieldGrid::validate() const {
    if (nx < 1 || ny < 1) fail(ErrorCode::NonPositiveParam, "field grid needs at least one cell per axis");
    if (!(cell > 0.0)) fail(ErrorCode::NonPositiveParam, "field cell size must be positive");
}

namespace {

// Bilinear weights along one axis: lower centre index and the fraction toward the next.
std::pair<int, double> axis_weights(double coord, double origin, double cell, int count) {
    if (count == 1) return {0, 0.0};
    const double u = (coord - origin) / cell - 0.5;
    const int lo = std::clamp(static_cast<int>(std::floor(u)), 0, count - 2);
    return {lo, std::clamp(u - lo, 0.0, 1.0)};
}

}  // namespace

Matrix field_row(const FieldGrid& grid, FieldInterpolation interp, const Vector& x) {
    if (x.size() != 2) fail(ErrorCode::DimensionMismatch, "field sensors are planar");
    Matrix row = Matrix::Zero(1, grid.cells());
    if (interp == FieldInterpolation::NearestCell) {
        const int ix = std::clamp(static_cast<int>(std::floor((x(0) - grid.origin_x) / grid.cell)), 0, grid.nx - 1);
        const int iy = std::clamp(static_cast<int>(std::floor((x(1) - grid.origin_y) / grid.cell)), 0, grid.ny - 1);
        row(0, grid.index(ix, iy)) = 1.0;
        return row;
    }
    const auto [ix, fx] = axis_weights(x(0), grid.origin_x, grid.cell, grid.nx);
    const auto [iy, fy] = axis_weights(x(1), grid.origin_y, grid.cell, grid.ny);
    const int ix1 = std::min(ix + 1, grid.nx - 1);
    const int iy1 = std::min(iy + 1, grid.ny - 1);
    row(0, grid.index(ix, iy)) += (1 - fx) * (1 - fy);
    row(0, grid.index(ix1, iy)) += fx * (1 - fy);
    row(0, grid.index(ix, iy1)) += (1 - fx) * fy;
    row(0, grid.index(ix1, iy1)) += fx * fy;
    return row;
}

LinearObservation field_observation(const FieldGrid& grid, FieldInterpolation interp, double noise_var) {
    grid.validate();
    if (!(noise_var > 0.0)) fail(ErrorCode::NonSPDNoise, "field sensor noise variance must be positive");
    Matrix v = Matrix::Constant(1, 1, noise_var);
    return LinearObservation{[grid, interp](const Vector& x) { return field_row(grid, interp, x); },
                             [v](const Vector&) { return v; }};
}

Vector sample_field(const FieldGrid& grid, double mean, double std, double corr_len, Rng& rng) {
    grid.validate();
    if (!(std >= 0.0) || !(corr_len > 0.0)) fail(ErrorCode::NonPositiveParam, "invalid field prior parameters");
    const int c = grid.cells();
    Matrix cov(c, c);
    for (int a = 0; a < c; ++a)
        for (int b = 0; b < c; ++b)
            cov(a, b) = std * std * std::exp(-(grid.center(a) - grid.center(b)).norm() / corr_len);
    return Vector::Constant(c, mean) + sample_gaussian(cov, rng);
}

std::vector<Vector> boundary_positions(const FieldGrid& grid, int n, Rng& rng) {
    grid.validate();
    std::vector<Vector> pos;
    pos.reserve(static_cast<std::size_t>(n));
    const double w = grid.nx * grid.cell;
    const double h = grid.ny * grid.cell;
    std::uniform_int_distribution<int> vertical(0, grid.nx);
    std::uniform_int_distribution<int> horizontal(0, grid.ny);
    std::bernoulli_distribution pick_vertical(grid.ny < 2 ? 1.0 : grid.nx < 2 ? 0.0 : 0.5);
    for (int i = 0; i < n; ++i) {
        Vector p(2);
        if (pick_vertical(rng)) {
            p << grid.origin_x + vertical(rng) * grid.cell, grid.origin_y + uniform(0.0, h, rng);
        } else {
            p << grid.origin_x + uniform(0.0, w, rng), grid.origin_y + horizontal(rng) * grid.cell;
        }
        pos.push_back(p);
    }
    if (n > 0) pos.front().setZero();
    return pos;
}

std::vector<Vector> interior_positions(const FieldGrid& grid, int n, Rng& rng) {
    grid.validate();
    std::vector<Vector> pos;
    pos.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Vector p(2);
        p << uniform(grid.origin_x, grid.origin_x + grid.nx * grid.cell, rng),
             uniform(grid.origin_y, grid.origin_y + grid.ny * grid.cell, rng);
        pos.push_back(p);
    }
    if (n > 0) pos.front().setZero();
    return pos;
}

}  // namespace sensornet
