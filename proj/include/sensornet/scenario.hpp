#pragma once

// Scenario description and its INI-style configuration file.

#include "sensornet/field.hpp"
#include "sensornet/localization.hpp"
#include "sensornet/models.hpp"
#include "sensornet/network.hpp"
#include "sensornet/tracking.hpp"

#include <boost/property_tree/ptree_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace sensornet {

enum class ScenarioKind { StaticField, Tracking, Localization, Joint };

[[nodiscard]] std::string to_string(ScenarioKind kind);
[[nodiscard]] std::optional<ScenarioKind> parse_kind(const std::string& text);

enum class GraphSource { Geometric, GeometricEdges, ErdosRenyi, EdgeList };
enum class Placement { Uniform, FieldInterior, FieldBoundary };
enum class EdgeNoise { Isotropic, Random };

struct NetworkSpec {
    GraphSource source = GraphSource::Geometric;
    int nodes = 40;
    double radius = 30.0;
    int edges = 0;
    double probability = 0.1;
    Region region{};
    Placement placement = Placement::Uniform;
    std::filesystem::path edge_file;
    std::filesystem::path positions_file;
    std::filesystem::path covariance_file;
    EdgeNoise edge_noise = EdgeNoise::Isotropic;
    double edge_noise_std = 0.5;
    WeightRule weights = WeightRule::Metropolis;
    bool resample_per_replicate = false;
};

struct FieldSpec {
    FieldGrid grid = FieldGrid::centered(4, 4, 10.0);
    FieldInterpolation interpolation = FieldInterpolation::Bilinear;
    double noise_std = 0.1;
    double mean = 1.0;
    double std = 1.0;
    double correlation_length = 15.0;
    bool resample_per_replicate = false;
};

struct Scenario {
    std::string name = "scenario";
    ScenarioKind kind = ScenarioKind::StaticField;
    NetworkSpec network{};
    FieldSpec field{};
    TrackingSpec tracking{};
    LocalizationConfig localization{};
    double delta = 0.05;
    long horizon = 100;
    int replicates = 1;
    std::uint64_t seed = 1;
    bool dump_states = false;
    bool dump_edges = false;
    std::optional<Vector> reference_target;  ///< analyze only; defaults to the drawn field

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

/// Parses a configuration; relative file paths resolve against base_dir.
[[nodiscard]] Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {});
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

/// Fully resolved configuration, suitable for echoing next to results.
void write_scenario(std::ostream& out, const Scenario& scenario);

}  // namespace sensornet
