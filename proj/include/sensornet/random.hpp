#pragma once

#include "sensornet/linalg.hpp"

#include <cstdint>
#include <random>

namespace sensornet {

/// Explicitly passed random stream. Callers own it; one stream per replicate.
using Rng = std::mt19937_64;

[[nodiscard]] inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Vector of iid standard normals.
[[nodiscard]] Vector standard_normal(Eigen::Index dim, Rng& rng);

/// Draw from N(0, cov). cov must be symmetric PSD; a zero matrix yields an
/// exact zero vector without consuming the stream.
[[nodiscard]] Vector sample_gaussian(const Matrix& cov, Rng& rng);

/// Factor L with L Lᵀ = cov for PSD cov (Cholesky, eigen-decomposition fallback).
[[nodiscard]] Matrix covariance_factor(const Matrix& cov);

[[nodiscard]] double uniform(double lo, double hi, Rng& rng);

}  // namespace sensornet
