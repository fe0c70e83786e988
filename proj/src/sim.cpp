#include "sensornet/sim.hpp"
#include "sensornet/error.hpp"
#include "sensornet/graph_io.hpp"
#include "sensornet/joint.hpp"
#include "sensornet/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <random>
#include <thread>

namespace sensornet {

namespace {

constexpr int kPlacementAttempts = 1000;

std::ofstream open_dump(const std::filesystem::path& dir, const char* name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name);
    if (!out) fail(ErrorCode::IoError, "cannot write " + (dir / name).string());
    out.precision(10);
    return out;
}

void write_row(std::ostream& out, long t, int node, int target, const Vector& v, double extra) {
    out << t << ',' << node + 1;
    if (target >= 0) out << ',' << target + 1;
    for (Eigen::Index c = 0; c < v.size(); ++c) out << ',' << v(c);
    out << ',' << extra << '\n';
}

void write_header(std::ostream& out, bool with_target, Eigen::Index dim, const char* extra) {
    out << "t,node";
    if (with_target) out << ",target";
    for (Eigen::Index c = 0; c < dim; ++c) out << ",e" << c + 1;
    out << ',' << extra << '\n';
}

double covariance_trace(const InformationState& s) {
    auto inv = spd_inverse(s.info_matrix);
    return inv ? inv->trace() : std::numeric_limits<double>::infinity();
}

bool covers_every_cell(const FieldGrid& grid, const std::vector<Vector>& positions) {
    std::vector<bool> hit(static_cast<std::size_t>(grid.cells()), false);
    for (const auto& x : positions) {
        const Matrix row = field_row(grid, FieldInterpolation::NearestCell, x);
        Eigen::Index c = 0;
        row.row(0).maxCoeff(&c);
        hit[static_cast<std::size_t>(c)] = true;
    }
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

GraphSample placed_geometric(const Scenario& s, Rng& rng) {
    const auto& ns = s.network;
    for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
        GraphSample g;
        g.positions = ns.placement == Placement::FieldBoundary ? boundary_positions(s.field.grid, ns.nodes, rng)
                                                               : interior_positions(s.field.grid, ns.nodes, rng);
        g.edges = geometric_edges(g.positions, ns.radius);
        if (edges_connected(ns.nodes, g.edges) && covers_every_cell(s.field.grid, g.positions)) return g;
    }
    fail(ErrorCode::DisconnectedGraph, "no connected placement covering every field cell after " +
                                           std::to_string(kPlacementAttempts) + " attempts; increase network.radius or nodes");
}

}  // namespace

Rng structure_rng(const Scenario& s, StructureStream stream, int replicate) {
    const bool resample = stream == StructureStream::Network ? s.network.resample_per_replicate
                                                             : s.field.resample_per_replicate;
    const auto k = resample ? static_cast<std::uint32_t>(replicate) : 0xffffffffu;
    std::seed_seq seq{static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32),
                      static_cast<std::uint32_t>(stream), k};
    return Rng(seq);
}

SensorNetwork make_network(const Scenario& s, Rng& rng) {
    const auto& ns = s.network;
    GraphSample g;
    int n = ns.nodes;
    switch (ns.source) {
        case GraphSource::EdgeList: {
            g.edges = read_edge_list(ns.edge_file);
            n = 0;
            for (const auto& e : g.edges) n = std::max({n, e.i + 1, e.j + 1});
            g.positions = ns.positions_file.empty() ? uniform_positions(n, ns.region, rng)
                                                    : read_positions(ns.positions_file, n);
            break;
        }
        case GraphSource::Geometric:
            g = ns.placement == Placement::Uniform ? random_geometric_graph(n, ns.radius, ns.region, rng)
                                                   : placed_geometric(s, rng);
            break;
        case GraphSource::GeometricEdges:
            g = random_geometric_graph_with_edges(n, ns.edges, ns.region, rng);
            break;
        case GraphSource::ErdosRenyi:
            g = erdos_renyi_graph(n, ns.probability, ns.region, rng);
            break;
    }
    if (!edges_connected(n, g.edges))
        fail(ErrorCode::DisconnectedGraph, "graph is not connected; consensus and localization require a connected network");
    const int m = static_cast<int>(g.edges.size());
    std::vector<Matrix> covs;
    if (!ns.covariance_file.empty())
        covs = read_edge_covariances(ns.covariance_file, g.edges, 2);
    else if (ns.edge_noise == EdgeNoise::Random)
        covs = random_edge_covariances(m, 2, ns.edge_noise_std, rng);
    else
        covs = isotropic_edge_covariances(m, 2, ns.edge_noise_std);
    return SensorNetwork::build(n, std::move(g.edges), std::move(g.positions), std::move(covs));
}

std::vector<LinearObservation> field_observations(const Scenario& s, int n) {
    const double var = s.field.noise_std * s.field.noise_std;
    return std::vector<LinearObservation>(static_cast<std::size_t>(n),
                                          field_observation(s.field.grid, s.field.interpolation, var));
}

Vector draw_field(const Scenario& s, Rng& rng) {
    return sample_field(s.field.grid, s.field.mean, s.field.std, s.field.correlation_length, rng);
}

void require_rank_condition(const SensorNetwork& net, std::span<const LinearObservation> observations) {
    std::vector<Matrix> hs;
    hs.reserve(observations.size());
    for (int i = 0; i < net.size(); ++i) hs.push_back(observations[static_cast<std::size_t>(i)].h(net.position(i)));
    if (!check_rank_condition(hs)) {
        const auto cols = hs.empty() ? Eigen::Index{0} : hs.front().cols();
        fail(ErrorCode::RankDeficient, "rank condition violated: stacked observation matrix has rank " +
                                           std::to_string(stacked_rank(hs)) + " < " + std::to_string(cols));
    }
}

ReplicateResult run_replicate(const Scenario& s, int k, const std::filesystem::path& dump_dir) {
    Rng net_rng = structure_rng(s, StructureStream::Network, k);
    const SensorNetwork net = make_network(s, net_rng);
    Rng rng = make_rng(s.seed + static_cast<std::uint64_t>(k));
    const long T = s.horizon;
    const int n = net.size();

    const bool dump_states = s.dump_states && !dump_dir.empty();
    if (s.dump_edges && !dump_dir.empty()) {
        auto edges = open_dump(dump_dir, "network.edges");
        write_edge_list(edges, net);
        auto pos = open_dump(dump_dir, "network.positions");
        write_positions(pos, net);
    }

    ReplicateResult out;
    switch (s.kind) {
        case ScenarioKind::StaticField: {
            Rng field_rng = structure_rng(s, StructureStream::Field, k);
            const Vector y = draw_field(s, field_rng);
            const auto obs = field_observations(s, n);
            require_rank_condition(net, obs);
            const auto weights = consensus_weights(net, s.network.weights);
            std::ofstream dump;
            StateObserver observe;
            if (dump_states) {
                dump = open_dump(dump_dir, "estimates.csv");
                write_header(dump, false, y.size(), "trace_cov");
                observe = [&](long t, int i, const InformationState& st, const Vector& est) {
                    write_row(dump, t, i, -1, est, covariance_trace(st));
                };
            }
            auto run = run_static_estimation(net, weights, obs, y, T, rng, observe);
            out.entries.push_back({"target_rmse", run.squared_error});
            out.entries.push_back({"target_mse", std::move(run.squared_error), 1.0, false, false, false});
            break;
        }
        case ScenarioKind::Tracking: {
            const auto weights = consensus_weights(net, s.network.weights);
            std::ofstream dump;
            TrackingObserver observe;
            if (dump_states) {
                dump = open_dump(dump_dir, "estimates.csv");
                write_header(dump, true, 4, "trace_cov");
                observe = [&](long t, int i, int j, const InformationState& st, const Vector& est) {
                    write_row(dump, t, i, j, est, covariance_trace(st));
                };
            }
            auto run = run_tracking(net, weights, s.tracking, T, rng, observe);
            const double targets = s.tracking.targets;
            out.entries.push_back({"position_rmse", std::move(run.position_squared_error), targets});
            out.entries.push_back({"velocity_rmse", std::move(run.velocity_squared_error), targets});
            break;
        }
        case ScenarioKind::Localization: {
            std::ofstream dump;
            LocalizationObserver observe;
            if (dump_states) {
                dump = open_dump(dump_dir, "locations.csv");
                write_header(dump, false, net.dim(), "error");
                observe = [&](long t, const LocalizationState& st, const RelativeRound*) {
                    for (int i = 0; i < n; ++i) {
                        const Vector& x = st.estimate[static_cast<std::size_t>(i)];
                        write_row(dump, t, i, -1, x, (x - net.position(i)).norm());
                    }
                };
            }
            auto run = run_localization(net, T, s.localization, rng, observe);
            out.entries.push_back({"location_rmse", run.squared_error.bottomRows(T), 1.0, true});
            break;
        }
        case ScenarioKind::Joint: {
            Rng field_rng = structure_rng(s, StructureStream::Field, k);
            const Vector y = draw_field(s, field_rng);
            const auto obs = field_observations(s, n);
            require_rank_condition(net, obs);
            const auto weights = consensus_weights(net, s.network.weights);
            std::ofstream dump;
            StateObserver observe;
            if (dump_states) {
                dump = open_dump(dump_dir, "estimates.csv");
                write_header(dump, false, y.size(), "trace_cov");
                observe = [&](long t, int i, const InformationState& st, const Vector& est) {
                    write_row(dump, t, i, -1, est, covariance_trace(st));
                };
            }
            auto run = run_joint(net, weights, obs, y, JointConfig{s.delta, s.localization}, T, rng, observe);
            out.entries.push_back({"target_rmse", run.target_squared_error});
            out.entries.push_back({"target_mse", std::move(run.target_squared_error), 1.0, false, false, false});
            out.entries.push_back({"location_rmse", run.location_squared_error.bottomRows(T), 1.0, true});
            out.predicted_mse = run.predicted_mse;
            break;
        }
    }
    return out;
}

MetricsSeries aggregate(const Scenario& s, std::span<const ReplicateResult> replicates) {
    MetricsSeries m;
    m.scenario = s.name;
    m.replicates = static_cast<int>(replicates.size());
    m.horizon = s.horizon;
    if (replicates.empty()) return m;
    const double R = static_cast<double>(replicates.size());
    const auto& first = replicates.front();
    for (std::size_t e = 0; e < first.entries.size(); ++e) {
        const auto& proto = first.entries[e];
        const Eigen::Index rows = proto.squared_error.rows();
        const Eigen::Index cols = proto.squared_error.cols();
        Matrix sum = Matrix::Zero(rows, cols);
        for (const auto& r : replicates) {
            const auto& entry = r.entries.at(e);
            if (entry.squared_error.rows() != rows || entry.squared_error.cols() != cols)
                fail(ErrorCode::DimensionMismatch, "replicates disagree on the shape of " + proto.metric);
            sum += entry.squared_error;
        }
        const Matrix mean = sum / (R * proto.divisor);
        const Eigen::Index first_col = proto.exclude_anchor ? 1 : 0;
        const Eigen::Index designated = std::max<Eigen::Index>(cols - first_col, 1);
        auto finish = [&](double v) { return proto.rooted ? std::sqrt(v) : v; };

        Series agg{proto.metric, kAggregate, std::vector<double>(static_cast<std::size_t>(rows))};
        for (Eigen::Index t = 0; t < rows; ++t)
            agg.values[static_cast<std::size_t>(t)] = finish(mean.row(t).tail(cols - first_col).sum() / static_cast<double>(designated));
        m.series.push_back(std::move(agg));
        if (!proto.per_node) continue;
        for (Eigen::Index i = 0; i < cols; ++i) {
            Series node{proto.metric, static_cast<int>(i), std::vector<double>(static_cast<std::size_t>(rows))};
            for (Eigen::Index t = 0; t < rows; ++t) node.values[static_cast<std::size_t>(t)] = finish(mean(t, i));
            m.series.push_back(std::move(node));
        }
    }
    if (first.predicted_mse) {
        double p = 0.0;
        for (const auto& r : replicates) p += r.predicted_mse.value_or(0.0);
        m.series.push_back({"predicted_mse", kAggregate, std::vector<double>(static_cast<std::size_t>(s.horizon), p / R)});
    }
    return m;
}

MetricsSeries run_scenario(const Scenario& s, const RunOptions& options) {
    s.validate();
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(s.replicates));
    std::vector<ReplicateResult> results(static_cast<std::size_t>(s.replicates));
    auto job = [&](int k) { return run_replicate(s, k, k == 0 ? options.dump_dir : std::filesystem::path{}); };
    if (threads <= 1) {
        for (int k = 0; k < s.replicates; ++k) results[static_cast<std::size_t>(k)] = job(k);
    } else {
        for (int start = 0; start < s.replicates; start += static_cast<int>(threads)) {
            const int stop = std::min(s.replicates, start + static_cast<int>(threads));
            std::vector<std::future<ReplicateResult>> batch;
            for (int k = start; k < stop; ++k) batch.push_back(std::async(std::launch::async, job, k));
            for (int k = start; k < stop; ++k) results[static_cast<std::size_t>(k)] = batch[static_cast<std::size_t>(k - start)].get();
        }
    }
    return aggregate(s, results);
}

}  // namespace sensornet
