#pragma once

// Synthetic static field on a regular grid of cells, observed by scalar point
// sensors. The sensor row H(x) either interpolates bilinearly between the
// four surrounding cell centres (continuous in x) or selects the cell that
// contains x (piecewise constant, discontinuous on cell boundaries).

#include "sensornet/models.hpp"

namespace sensornet {

enum class FieldInterpolation { Bilinear, NearestCell };

struct FieldGrid {
    int nx = 4;
    int ny = 4;
    double cell = 10.0;
    double origin_x = -20.0;  ///< lower-left corner
    double origin_y = -20.0;

    [[nodiscard]] int cells() const noexcept { return nx * ny; }
    [[nodiscard]] int index(int ix, int iy) const noexcept { return iy * nx + ix; }
    [[nodiscard]] Vector center(int c) const;
    /// Grid covering [-nx*cell/2, nx*cell/2] x [-ny*cell/2, ny*cell/2].
    static FieldGrid centered(int nx, int ny, double cell);
    void validate() const;
};

/// 1 x cells row of weights (non-negative, summing to one).
[[nodiscard]] Matrix field_row(const FieldGrid& grid, FieldInterpolation interp, const Vector& x);

/// Scalar sensor z = H(x) y + v with constant noise variance.
[[nodiscard]] LinearObservation field_observation(const FieldGrid& grid, FieldInterpolation interp,
                                                  double noise_var);

/// Gaussian random field over cell centres: mean + N(0, std² exp(-|c_a - c_b| / corr_len)).
[[nodiscard]] Vector sample_field(const FieldGrid& grid, double mean, double std, double corr_len, Rng& rng);

/// Uniform points on the cell boundary lines of the grid, outer border included. Node 0 at the origin.
[[nodiscard]] std::vector<Vector> boundary_positions(const FieldGrid& grid, int n, Rng& rng);

/// Uniform points inside the grid. Node 0 at the origin.
[[nodiscard]] std::vector<Vector> interior_positions(const FieldGrid& grid, int n, Rng& rng);

}  // namespace sensornet
