#pragma once

// Scenario orchestration: network construction, seeded Monte Carlo replicates
// and RMSE aggregation.

#include "sensornet/metrics.hpp"
#include "sensornet/scenario.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sensornet {

enum class StructureStream : std::uint32_t { Network = 1, Field = 2 };

/// Stream for drawn structure (graph geometry, field truth). Shared across
/// replicates unless the matching resample_per_replicate flag is set.
[[nodiscard]] Rng structure_rng(const Scenario& s, StructureStream stream, int replicate);

/// Builds the configured network. Throws DisconnectedGraph for a disconnected edge list.
[[nodiscard]] SensorNetwork make_network(const Scenario& s, Rng& rng);

[[nodiscard]] std::vector<LinearObservation> field_observations(const Scenario& s, int n);
[[nodiscard]] Vector draw_field(const Scenario& s, Rng& rng);

/// Throws RankDeficient when the stacked H_i(x_i) lose rank.
void require_rank_condition(const SensorNetwork& net, std::span<const LinearObservation> observations);

struct ReplicateEntry {
    std::string metric;
    Matrix squared_error;      ///< one row per round
    double divisor = 1.0;      ///< e.g. target count when errors are summed over targets
    bool exclude_anchor = false;
    bool rooted = true;        ///< RMSE when true, plain MSE otherwise
    bool per_node = true;
};

struct ReplicateResult {
    std::vector<ReplicateEntry> entries;
    std::optional<double> predicted_mse;
};

/// Replicate k with seed base_seed + k. Writes dumps into dump_dir when non-empty.
[[nodiscard]] ReplicateResult run_replicate(const Scenario& s, int k, const std::filesystem::path& dump_dir = {});

[[nodiscard]] MetricsSeries aggregate(const Scenario& s, std::span<const ReplicateResult> replicates);

struct RunOptions {
    std::filesystem::path dump_dir;  ///< replicate 0 dumps land here when dump flags are set
    unsigned threads = 0;            ///< 0 = hardware concurrency
};

[[nodiscard]] MetricsSeries run_scenario(const Scenario& s, const RunOptions& options = {});

}  // namespace sensornet
