#pragma once

// Plain-text graph files. All indices in files are 1-based; '#' starts a comment.
//
//   edge list:        i j
//   positions:        i x_1 ... x_d
//   edge covariances: i j c_11 c_12 ... c_dd   (row-major d x d)

#include "sensornet/network.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace sensornet {

[[nodiscard]] std::vector<Edge> parse_edge_list(std::istream& in);
[[nodiscard]] std::vector<Edge> read_edge_list(const std::filesystem::path& path);

/// Returns n positions; every node must appear exactly once.
[[nodiscard]] std::vector<Vector> parse_positions(std::istream& in, int n);
[[nodiscard]] std::vector<Vector> read_positions(const std::filesystem::path& path, int n);

/// Covariances aligned with `edges`; every edge must be listed (either orientation).
[[nodiscard]] std::vector<Matrix> parse_edge_covariances(std::istream& in, const std::vector<Edge>& edges, int dim);
[[nodiscard]] std::vector<Matrix> read_edge_covariances(const std::filesystem::path& path,
                                                        const std::vector<Edge>& edges, int dim);

void write_edge_list(std::ostream& out, const SensorNetwork& net);
void write_positions(std::ostream& out, const SensorNetwork& net);

}  // namespace sensornet
