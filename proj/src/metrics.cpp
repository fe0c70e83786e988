#include "sensornet/metrics.hpp"
#include "sensornet/error.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <stdexcept>

namespace sensornet {

const Series* MetricsSeries::find(const std::string& metric, int node) const {
    for (const auto& s : series)
        if (s.metric == metric && s.node == node) return &s;
    return nullptr;
}

const Series& MetricsSeries::at(const std::string& metric, int node) const {
    if (const auto* s = find(metric, node)) return *s;
    throw std::out_of_range("no series '" + metric + "' for node " + std::to_string(node));
}

double rmse(std::span<const Vector> estimates, std::span<const Vector> truths, std::span<const int> nodes) {
    if (estimates.size() != truths.size()) fail(ErrorCode::DimensionMismatch, "estimates and truths are not aligned");
    if (nodes.empty()) fail(ErrorCode::DimensionMismatch, "empty node set");
    double acc = 0.0;
    for (int i : nodes) {
        if (i < 0 || static_cast<std::size_t>(i) >= estimates.size())
            fail(ErrorCode::InvalidIndex, "node " + std::to_string(i) + " outside the estimate set");
        const auto& e = estimates[static_cast<std::size_t>(i)];
        const auto& x = truths[static_cast<std::size_t>(i)];
        if (e.size() != x.size()) fail(ErrorCode::DimensionMismatch, "estimate and truth dimensions differ");
        acc += (e - x).squaredNorm();
    }
    return std::sqrt(acc / static_cast<double>(nodes.size()));
}

std::vector<double> rmse_series(std::span<const std::vector<Vector>> estimates,
                                 std::span<const std::vector<Vector>> truths, std::span<const int> nodes) {
    if (estimates.size() != truths.size()) fail(ErrorCode::DimensionMismatch, "series lengths differ");
    std::vector<double> out;
    out.reserve(estimates.size());
    for (std::size_t t = 0; t < estimates.size(); ++t) out.push_back(rmse(estimates[t], truths[t], nodes));
    return out;
}

void write_metrics_csv(std::ostream& out, const MetricsSeries& metrics) {
    out << "scenario,replicates,t,metric,node,value\n";
    out << std::setprecision(17);
    for (const auto& s : metrics.series) {
        for (std::size_t t = 0; t < s.values.size(); ++t) {
            out << metrics.scenario << ',' << metrics.replicates << ',' << t + 1 << ',' << s.metric << ',';
            if (s.node == kAggregate) out << "all";
            else out << s.node + 1;
            out << ',' << s.values[t] << '\n';
        }
    }
}

void write_plot_script(std::ostream& out, const MetricsSeries& metrics) {
    std::set<std::string> names;
    for (const auto& s : metrics.series)
        if (s.node == kAggregate) names.insert(s.metric);
    out << "# gnuplot script generated for scenario '" << metrics.scenario << "'\n"
        << "set datafile separator ','\n"
        << "set terminal pngcairo size 900,600\n"
        << "set xlabel 't'\n"
        << "set grid\n";
    for (const auto& name : names) {
        out << "set output '" << name << ".png'\n"
            << "set title '" << name << " (" << metrics.replicates << " replicates)'\n"
            << "plot 'metrics.csv' using (strcol(4) eq '" << name << "' && strcol(5) eq 'all' ? $3 : 1/0):6"
            << " with lines title '" << name << "'\n";
    }
}

}  // namespace sensornet
