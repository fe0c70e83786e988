#include "sensornet/scenario.hpp"
#include "sensornet/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sensornet {

namespace pt = boost::property_tree;

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::StaticField: return "static-field";
        case ScenarioKind::Tracking: return "tracking";
        case ScenarioKind::Localization: return "localization";
        case ScenarioKind::Joint: return "joint";
    }
    return "unknown";
}

std::optional<ScenarioKind> parse_kind(const std::string& text) {
    static const std::map<std::string, ScenarioKind> kinds{{"static-field", ScenarioKind::StaticField},
                                                           {"tracking", ScenarioKind::Tracking},
                                                           {"localization", ScenarioKind::Localization},
                                                           {"localization-only", ScenarioKind::Localization},
                                                           {"joint", ScenarioKind::Joint}};
    if (auto it = kinds.find(text); it != kinds.end()) return it->second;
    return std::nullopt;
}

namespace {

[[noreturn]] void config_error(const std::string& what) { fail(ErrorCode::ConfigError, what); }

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"scenario", {"kind", "name", "horizon", "replicates", "seed", "delta"}},
        {"network",
         {"source", "nodes", "radius", "edges", "probability", "region_min", "region_max", "placement", "edge_file",
          "positions_file", "covariance_file", "edge_noise", "edge_noise_std", "weights", "resample_per_replicate"}},
        {"field",
         {"nx", "ny", "cell", "model", "noise_std", "mean", "std", "correlation_length", "resample_per_replicate"}},
        {"tracking",
         {"targets", "tau", "q", "range_std", "bearing_std", "growth", "init_position_std", "init_speed",
          "prior_position_std", "prior_velocity_std"}},
        {"localization", {"prior", "prior_std", "order", "sampling"}},
        {"output", {"dump_states", "dump_edges"}},
        {"analyze", {"reference_target"}},
    };
    return keys;
}

void check_keys(const pt::ptree& tree) {
    for (const auto& [section, body] : tree) {
        auto it = known_keys().find(section);
        if (it == known_keys().end()) config_error("unknown section [" + section + "]");
        if (!body.data().empty() && body.empty()) config_error("key '" + section + "' outside of a section");
        for (const auto& [key, value] : body)
            if (!it->second.count(key)) config_error("unknown key '" + key + "' in section [" + section + "]");
    }
}

template <typename T>
void read(const pt::ptree& tree, const std::string& path, T& out) {
    auto node = tree.get_child_optional(path);
    if (!node) return;
    try {
        out = node->get_value<T>();
    } catch (const pt::ptree_error&) {
        config_error("invalid value '" + node->data() + "' for " + path);
    }
}

void read_bool(const pt::ptree& tree, const std::string& path, bool& out) {
    auto value = tree.get_optional<std::string>(path);
    if (!value) return;
    if (*value == "true" || *value == "1" || *value == "yes") out = true;
    else if (*value == "false" || *value == "0" || *value == "no") out = false;
    else config_error("invalid boolean '" + *value + "' for " + path);
}

template <typename Enum>
void read_enum(const pt::ptree& tree, const std::string& path, const std::map<std::string, Enum>& choices, Enum& out) {
    auto value = tree.get_optional<std::string>(path);
    if (!value) return;
    auto it = choices.find(*value);
    if (it == choices.end()) {
        std::string allowed;
        for (const auto& [name, e] : choices) allowed += (allowed.empty() ? "" : "|") + name;
        config_error("invalid value '" + *value + "' for " + path + " (expected " + allowed + ")");
    }
    out = it->second;
}

template <typename Enum>
std::string enum_name(const std::map<std::string, Enum>& choices, Enum value) {
    for (const auto& [name, e] : choices)
        if (e == value) return name;
    return "?";
}

void read_path(const pt::ptree& tree, const std::string& path, const std::filesystem::path& base,
               std::filesystem::path& out) {
    auto value = tree.get_optional<std::string>(path);
    if (!value || value->empty()) return;
    std::filesystem::path p(*value);
    out = (p.is_relative() && !base.empty()) ? base / p : p;
}

const std::map<std::string, GraphSource> kSources{{"geometric", GraphSource::Geometric},
                                                  {"geometric_edges", GraphSource::GeometricEdges},
                                                  {"erdos_renyi", GraphSource::ErdosRenyi},
                                                  {"edge_list", GraphSource::EdgeList}};
const std::map<std::string, Placement> kPlacements{{"uniform", Placement::Uniform},
                                                   {"field_interior", Placement::FieldInterior},
                                                   {"field_boundary", Placement::FieldBoundary}};
const std::map<std::string, EdgeNoise> kEdgeNoise{{"isotropic", EdgeNoise::Isotropic}, {"random", EdgeNoise::Random}};
const std::map<std::string, WeightRule> kWeights{{"metropolis", WeightRule::Metropolis},
                                                 {"lazy_uniform", WeightRule::LazyUniform}};
const std::map<std::string, FieldInterpolation> kInterp{{"bilinear", FieldInterpolation::Bilinear},
                                                        {"nearest", FieldInterpolation::NearestCell}};
const std::map<std::string, PriorKind> kPrior{{"gaussian", PriorKind::Gaussian}, {"zeros", PriorKind::Zeros}};
const std::map<std::string, FoldOrder> kOrder{{"fold_first", FoldOrder::FoldFirst}, {"literal", FoldOrder::Literal}};
const std::map<std::string, RelativeSampling> kSampling{{"independent", RelativeSampling::Independent},
                                                        {"antisymmetric", RelativeSampling::Antisymmetric}};

}  // namespace

void Scenario::validate() const {
    if (horizon < 1) config_error("scenario.horizon must be >= 1");
    if (replicates < 1) config_error("scenario.replicates must be >= 1");
    if (!(delta > 0.0)) config_error("scenario.delta must be positive");
    const auto& net = network;
    if (net.source != GraphSource::EdgeList && net.nodes < 1) config_error("network.nodes must be >= 1");
    if (net.source == GraphSource::EdgeList && net.edge_file.empty())
        config_error("network.edge_file is required for source = edge_list");
    if (net.source == GraphSource::Geometric && !(net.radius > 0.0)) config_error("network.radius must be positive");
    if (net.source == GraphSource::GeometricEdges && net.edges < net.nodes - 1)
        config_error("network.edges must be at least nodes - 1");
    if (net.source == GraphSource::ErdosRenyi && !(net.probability > 0.0 && net.probability <= 1.0))
        config_error("network.probability must lie in (0, 1]");
    if (!(net.region.hi > net.region.lo) || net.region.lo > 0.0 || net.region.hi < 0.0)
        config_error("network region must contain the origin");
    if (!(net.edge_noise_std > 0.0)) config_error("network.edge_noise_std must be positive");
    if (field.grid.nx < 1 || field.grid.ny < 1 || !(field.grid.cell > 0.0))
        config_error("field grid needs nx, ny >= 1 and cell > 0");
    if (!(field.noise_std > 0.0)) config_error("field.noise_std must be positive");
    if (!(field.std >= 0.0) || !(field.correlation_length > 0.0))
        config_error("field.std must be >= 0 and field.correlation_length > 0");
    if (tracking.targets < 1) config_error("tracking.targets must be >= 1");
    if (!(tracking.tau > 0.0) || !(tracking.q >= 0.0)) config_error("tracking.tau must be > 0 and tracking.q >= 0");
    if (!(tracking.sensor.range_std > 0.0) || !(tracking.sensor.bearing_std > 0.0) || !(tracking.sensor.growth >= 0.0))
        config_error("tracking sensor noise parameters out of range");
    if (!(tracking.prior_position_std > 0.0) || !(tracking.prior_velocity_std > 0.0))
        config_error("tracking prior stds must be positive");
    if (!(localization.prior_std >= 0.0)) config_error("localization.prior_std must be >= 0");
    if (reference_target && reference_target->size() != field.grid.cells())
        config_error("analyze.reference_target must list one value per field cell");
}

Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        config_error(std::string("malformed configuration: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    check_keys(tree);

    Scenario s;
    auto kind = tree.get_optional<std::string>("scenario.kind");
    if (kind) {
        auto parsed = parse_kind(*kind);
        if (!parsed) config_error("invalid value '" + *kind + "' for scenario.kind");
        s.kind = *parsed;
    }
    read(tree, "scenario.name", s.name);
    read(tree, "scenario.horizon", s.horizon);
    read(tree, "scenario.replicates", s.replicates);
    read(tree, "scenario.seed", s.seed);
    read(tree, "scenario.delta", s.delta);

    auto& net = s.network;
    read_enum(tree, "network.source", kSources, net.source);
    read(tree, "network.nodes", net.nodes);
    read(tree, "network.radius", net.radius);
    read(tree, "network.edges", net.edges);
    read(tree, "network.probability", net.probability);
    read(tree, "network.region_min", net.region.lo);
    read(tree, "network.region_max", net.region.hi);
    read_enum(tree, "network.placement", kPlacements, net.placement);
    read_path(tree, "network.edge_file", base_dir, net.edge_file);
    read_path(tree, "network.positions_file", base_dir, net.positions_file);
    read_path(tree, "network.covariance_file", base_dir, net.covariance_file);
    read_enum(tree, "network.edge_noise", kEdgeNoise, net.edge_noise);
    read(tree, "network.edge_noise_std", net.edge_noise_std);
    read_enum(tree, "network.weights", kWeights, net.weights);
    read_bool(tree, "network.resample_per_replicate", net.resample_per_replicate);

    auto& f = s.field;
    int nx = f.grid.nx, ny = f.grid.ny;
    double cell = f.grid.cell;
    read(tree, "field.nx", nx);
    read(tree, "field.ny", ny);
    read(tree, "field.cell", cell);
    f.grid = FieldGrid::centered(nx, ny, cell);
    read_enum(tree, "field.model", kInterp, f.interpolation);
    read(tree, "field.noise_std", f.noise_std);
    read(tree, "field.mean", f.mean);
    read(tree, "field.std", f.std);
    read(tree, "field.correlation_length", f.correlation_length);
    read_bool(tree, "field.resample_per_replicate", f.resample_per_replicate);

    auto& tr = s.tracking;
    read(tree, "tracking.targets", tr.targets);
    read(tree, "tracking.tau", tr.tau);
    read(tree, "tracking.q", tr.q);
    read(tree, "tracking.range_std", tr.sensor.range_std);
    read(tree, "tracking.bearing_std", tr.sensor.bearing_std);
    read(tree, "tracking.growth", tr.sensor.growth);
    read(tree, "tracking.init_position_std", tr.init_position_std);
    read(tree, "tracking.init_speed", tr.init_speed);
    read(tree, "tracking.prior_position_std", tr.prior_position_std);
    read(tree, "tracking.prior_velocity_std", tr.prior_velocity_std);

    read_enum(tree, "localization.prior", kPrior, s.localization.prior);
    read(tree, "localization.prior_std", s.localization.prior_std);
    read_enum(tree, "localization.order", kOrder, s.localization.order);
    read_enum(tree, "localization.sampling", kSampling, s.localization.sampling);

    read_bool(tree, "output.dump_states", s.dump_states);
    read_bool(tree, "output.dump_edges", s.dump_edges);

    if (auto ref = tree.get_optional<std::string>("analyze.reference_target")) {
        std::istringstream values(*ref);
        std::vector<double> v;
        double x = 0.0;
        while (values >> x) v.push_back(x);
        if (!values.eof()) config_error("analyze.reference_target must be a whitespace-separated list of numbers");
        s.reference_target = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
    }

    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open configuration file '" + path.string() + "'");
    return parse_scenario(in, path.parent_path());
}

void write_scenario(std::ostream& out, const Scenario& s) {
    pt::ptree tree;
    tree.put("scenario.kind", to_string(s.kind));
    tree.put("scenario.name", s.name);
    tree.put("scenario.horizon", s.horizon);
    tree.put("scenario.replicates", s.replicates);
    tree.put("scenario.seed", s.seed);
    tree.put("scenario.delta", s.delta);

    const auto& net = s.network;
    tree.put("network.source", enum_name(kSources, net.source));
    tree.put("network.nodes", net.nodes);
    tree.put("network.radius", net.radius);
    tree.put("network.edges", net.edges);
    tree.put("network.probability", net.probability);
    tree.put("network.region_min", net.region.lo);
    tree.put("network.region_max", net.region.hi);
    tree.put("network.placement", enum_name(kPlacements, net.placement));
    tree.put("network.edge_file", net.edge_file.string());
    tree.put("network.positions_file", net.positions_file.string());
    tree.put("network.covariance_file", net.covariance_file.string());
    tree.put("network.edge_noise", enum_name(kEdgeNoise, net.edge_noise));
    tree.put("network.edge_noise_std", net.edge_noise_std);
    tree.put("network.weights", enum_name(kWeights, net.weights));
    tree.put("network.resample_per_replicate", net.resample_per_replicate);

    const auto& f = s.field;
    tree.put("field.nx", f.grid.nx);
    tree.put("field.ny", f.grid.ny);
    tree.put("field.cell", f.grid.cell);
    tree.put("field.model", enum_name(kInterp, f.interpolation));
    tree.put("field.noise_std", f.noise_std);
    tree.put("field.mean", f.mean);
    tree.put("field.std", f.std);
    tree.put("field.correlation_length", f.correlation_length);
    tree.put("field.resample_per_replicate", f.resample_per_replicate);

    const auto& tr = s.tracking;
    tree.put("tracking.targets", tr.targets);
    tree.put("tracking.tau", tr.tau);
    tree.put("tracking.q", tr.q);
    tree.put("tracking.range_std", tr.sensor.range_std);
    tree.put("tracking.bearing_std", tr.sensor.bearing_std);
    tree.put("tracking.growth", tr.sensor.growth);
    tree.put("tracking.init_position_std", tr.init_position_std);
    tree.put("tracking.init_speed", tr.init_speed);
    tree.put("tracking.prior_position_std", tr.prior_position_std);
    tree.put("tracking.prior_velocity_std", tr.prior_velocity_std);

    tree.put("localization.prior", enum_name(kPrior, s.localization.prior));
    tree.put("localization.prior_std", s.localization.prior_std);
    tree.put("localization.order", enum_name(kOrder, s.localization.order));
    tree.put("localization.sampling", enum_name(kSampling, s.localization.sampling));

    tree.put("output.dump_states", s.dump_states);
    tree.put("output.dump_edges", s.dump_edges);
    if (s.reference_target) {
        std::ostringstream os;
        for (Eigen::Index k = 0; k < s.reference_target->size(); ++k) os << (k ? " " : "") << (*s.reference_target)(k);
        tree.put("analyze.reference_target", os.str());
    }
    pt::write_ini(out, tree);
}

}  // namespace sensornet
