#pragma once

#include "sensornet/linalg.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sensornet {

inline constexpr int kAggregate = -1;

struct Series {
    std::string metric;
    int node = kAggregate;       ///< 0-based node, or kAggregate
    std::vector<double> values;  ///< index t-1 holds round t
};

struct MetricsSeries {
    std::string scenario;
    int replicates = 0;
    long horizon = 0;
    std::vector<Series> series;

    [[nodiscard]] const Series* find(const std::string& metric, int node = kAggregate) const;
    /// Throws std::out_of_range when absent.
    [[nodiscard]] const Series& at(const std::string& metric, int node = kAggregate) const;
};

/// sqrt(mean over `nodes` of ‖estimate_i - truth_i‖²).
[[nodiscard]] double rmse(std::span<const Vector> estimates, std::span<const Vector> truths, std::span<const int> nodes);

/// Per-time RMSE: estimates[t][i] against truths[t][i].
[[nodiscard]] std::vector<double> rmse_series(std::span<const std::vector<Vector>> estimates,
                                              std::span<const std::vector<Vector>> truths, std::span<const int> nodes);

/// Long format: scenario,replicates,t,metric,node,value. Aggregates use node "all", nodes are 1-based.
void write_metrics_csv(std::ostream& out, const MetricsSeries& metrics);

/// Gnuplot script plotting every aggregate series from metrics.csv.
void write_plot_script(std::ostream& out, const MetricsSeries& metrics);

}  // namespace sensornet
