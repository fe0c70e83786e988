#pragma once

// Command-line front end: sensornet <estimate|localize|joint|track|analyze> --config FILE.

#include "sensornet/error.hpp"
#include "sensornet/scenario.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace sensornet {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;
inline constexpr int kExitValidation = 4;

/// Environment variable naming the default output root.
inline constexpr const char* kOutRootEnv = "SENSORNET_OUT_ROOT";

[[nodiscard]] int exit_code_for(ErrorCode code);

struct AnalyzeReport {
    int nodes = 0;
    int edges = 0;
    bool connected = false;
    std::optional<bool> rank_ok;         ///< absent when the scenario has no field model
    Eigen::Index rank = 0;
    Eigen::Index state_dim = 0;
    double spectral_radius = 0.0;
    Vector stationary;
    std::optional<double> predicted_mse;
};

/// Throws DisconnectedGraph for a disconnected network.
[[nodiscard]] AnalyzeReport analyze(const Scenario& s);
void print_report(std::ostream& out, const Scenario& s, const AnalyzeReport& report);

/// Full CLI; returns the process exit code. Errors go to `err` as one line:
/// error: code=<Code> message="<text>"
[[nodiscard]] int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sensornet
