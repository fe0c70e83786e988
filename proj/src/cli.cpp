#include "sensornet/cli.hpp"
#include "sensornet/error.hpp"
#include "sensornet/joint.hpp"
#include "sensornet/sim.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace sensornet {

namespace {

const std::map<std::string, ScenarioKind>& subcommand_kinds() {
    static const std::map<std::string, ScenarioKind> kinds{{"estimate", ScenarioKind::StaticField},
                                                           {"localize", ScenarioKind::Localization},
                                                           {"joint", ScenarioKind::Joint},
                                                           {"track", ScenarioKind::Tracking}};
    return kinds;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c == '\n' ? ' ' : c;
    }
    return out;
}

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
    err << "error: code=" << code << " message=\"" << escape(message) << "\"\n";
}

std::filesystem::path output_dir(const std::string& flag, const Scenario& s) {
    if (!flag.empty()) return flag;
    const char* root = std::getenv(kOutRootEnv);
    return std::filesystem::path(root && *root ? root : "runs") / s.name;
}

void write_outputs(const std::filesystem::path& dir, const Scenario& s, const MetricsSeries& metrics) {
    auto open = [&](const char* name) {
        std::ofstream f(dir / name);
        if (!f) fail(ErrorCode::IoError, "cannot write " + (dir / name).string());
        return f;
    };
    auto csv = open("metrics.csv");
    write_metrics_csv(csv, metrics);
    auto echo = open("config.echo");
    write_scenario(echo, s);
    auto plot = open("plot.gp");
    write_plot_script(plot, metrics);
}

}  // namespace

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConfigError:
        case ErrorCode::IoError: return kExitConfig;
        case ErrorCode::DisconnectedGraph:
        case ErrorCode::RankDeficient: return kExitValidation;
        default: return kExitRuntime;
    }
}

AnalyzeReport analyze(const Scenario& s) {
    Rng net_rng = structure_rng(s, StructureStream::Network, 0);
    const SensorNetwork net = make_network(s, net_rng);
    AnalyzeReport r;
    r.nodes = net.size();
    r.edges = net.edge_count();
    r.connected = net.is_connected();
    r.spectral_radius = jacobi_spectral_radius(net);
    const auto weights = consensus_weights(net, s.network.weights);
    r.stationary = stationary_distribution(weights.matrix());
    if (s.kind == ScenarioKind::StaticField || s.kind == ScenarioKind::Joint) {
        const auto obs = field_observations(s, net.size());
        std::vector<Matrix> hs, ms;
        for (int i = 0; i < net.size(); ++i) {
            hs.push_back(obs[static_cast<std::size_t>(i)].h(net.position(i)));
            ms.push_back(obs[static_cast<std::size_t>(i)].information_matrix(net.position(i)));
        }
        r.rank = stacked_rank(hs);
        r.state_dim = s.field.grid.cells();
        r.rank_ok = r.rank == r.state_dim;
        Vector y;
        if (s.reference_target) {
            y = *s.reference_target;
        } else {
            Rng field_rng = structure_rng(s, StructureStream::Field, 0);
            y = draw_field(s, field_rng);
        }
        r.predicted_mse = predict_asymptotic_mse(r.stationary, ms, s.delta, y);
    }
    return r;
}

void print_report(std::ostream& out, const Scenario& s, const AnalyzeReport& r) {
    out << "scenario: " << s.name << " (" << to_string(s.kind) << ")\n";
    out << "network: nodes=" << r.nodes << " edges=" << r.edges << " connected=" << (r.connected ? "yes" : "no") << '\n';
    if (r.rank_ok) {
        if (*r.rank_ok)
            out << "rank condition: satisfied (rank " << r.rank << " of " << r.state_dim << ")\n";
        else
            out << "rank condition violated: stacked observation matrix has rank " << r.rank << " < " << r.state_dim
                << "; consistency precondition violated\n";
    } else {
        out << "rank condition: not applicable\n";
    }
    out.precision(6);
    out << "jacobi spectral radius: " << r.spectral_radius << '\n';
    out << "stationary distribution:";
    for (Eigen::Index i = 0; i < r.stationary.size(); ++i) out << ' ' << r.stationary(i);
    out << '\n';
    if (r.predicted_mse)
        out << "predicted joint mse (delta=" << s.delta << "): " << *r.predicted_mse << '\n';
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Distributed estimation and localization in sensor networks"};
    app.require_subcommand(1);
    std::string config, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> replicates;
    bool quiet = false;
    int verbosity = 0;
    std::map<std::string, CLI::App*> subs;
    const std::map<std::string, std::string> help{{"estimate", "static field estimation"},
                                                  {"localize", "localization from relative measurements"},
                                                  {"joint", "joint localization and field estimation"},
                                                  {"track", "multi-target tracking"},
                                                  {"analyze", "report connectivity, rank, spectral radius and limits"}};
    app.add_option("-c,--config", config, "scenario configuration file")->required();
    app.add_option("-o,--out", out_dir, "output directory (default $SENSORNET_OUT_ROOT/<name> or runs/<name>)");
    app.add_option("--seed", seed, "override the base seed");
    app.add_option("--replicates", replicates, "override the replicate count");
    app.add_flag("-q,--quiet", quiet, "suppress all non-error output");
    app.add_flag("-v,--verbose", verbosity, "progress and summary on stderr");
    for (const auto& [name, text] : help) subs[name] = app.add_subcommand(name, text)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        report_error(err, "ConfigError", e.what());
        return kExitConfig;
    }

    std::string command;
    for (const auto& [name, sub] : subs)
        if (sub->parsed()) command = name;

    try {
        Scenario s = load_scenario(config);
        if (seed) s.seed = *seed;
        if (replicates) s.replicates = *replicates;
        s.validate();

        if (command == "analyze") {
            const auto report = analyze(s);
            if (!quiet) print_report(out, s, report);
            return kExitOk;
        }
        const ScenarioKind expected = subcommand_kinds().at(command);
        if (s.kind != expected)
            fail(ErrorCode::ConfigError, "subcommand '" + command + "' expects scenario.kind = " + to_string(expected) +
                                             ", got " + to_string(s.kind));

        const auto dir = output_dir(out_dir, s);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) fail(ErrorCode::IoError, "cannot create output directory '" + dir.string() + "': " + ec.message());

        if (verbosity > 0 && !quiet)
            err << "running " << s.name << ": " << s.replicates << " replicates x " << s.horizon << " rounds\n";
        RunOptions options;
        if (s.dump_states || s.dump_edges) options.dump_dir = dir;
        const auto metrics = run_scenario(s, options);
        write_outputs(dir, s, metrics);
        if (verbosity > 0 && !quiet) {
            for (const auto& series : metrics.series)
                if (series.node == kAggregate && !series.values.empty())
                    err << series.metric << "(T=" << s.horizon << ") = " << series.values.back() << '\n';
            err << "wrote " << (dir / "metrics.csv").string() << '\n';
        }
        return kExitOk;
    } catch (const Error& e) {
        report_error(err, std::string(to_string(e.code())), e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        report_error(err, "RuntimeFailure", e.what());
        return kExitRuntime;
    }
}

}  // namespace sensornet
