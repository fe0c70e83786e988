#include "sensornet/graph_io.hpp"
#include "sensornet/error.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace sensornet {

namespace {

// Yields the non-empty, comment-stripped lines of a stream with their line numbers.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string probe;
        if (!(fields >> probe)) continue;
        fields.clear();
        fields.seekg(0);
        fn(fields, lineno);
    }
}

[[noreturn]] void parse_error(int lineno, const std::string& what) {
    fail(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": " + what);
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ConfigError, "cannot open file '" + path.string() + "'");
    return in;
}

}  // namespace

std::vector<Edge> parse_edge_list(std::istream& in) {
    std::vector<Edge> edges;
    for_each_record(in, [&](std::istringstream& fields, int lineno) {
        int i = 0, j = 0;
        if (!(fields >> i >> j)) parse_error(lineno, "expected 'i j'");
        std::string extra;
        if (fields >> extra) parse_error(lineno, "unexpected trailing field '" + extra + "'");
        if (i < 1 || j < 1) parse_error(lineno, "node indices are 1-based");
        edges.push_back({i - 1, j - 1});
    });
    return edges;
}

std::vector<Edge> read_edge_list(const std::filesystem::path& path) {
    auto in = open(path);
    return parse_edge_list(in);
}

std::vector<Vector> parse_positions(std::istream& in, int n) {
    std::vector<Vector> positions(static_cast<std::size_t>(n));
    int dim = -1;
    for_each_record(in, [&](std::istringstream& fields, int lineno) {
        int i = 0;
        if (!(fields >> i)) parse_error(lineno, "expected node index");
        if (i < 1 || i > n) parse_error(lineno, "node index out of range");
        std::vector<double> coords;
        double v = 0.0;
        while (fields >> v) coords.push_back(v);
        if (!fields.eof()) parse_error(lineno, "malformed coordinate");
        if (coords.empty()) parse_error(lineno, "missing coordinates");
        if (dim < 0) dim = static_cast<int>(coords.size());
        if (static_cast<int>(coords.size()) != dim) parse_error(lineno, "inconsistent position dimension");
        auto& slot = positions[static_cast<std::size_t>(i - 1)];
        if (slot.size() != 0) parse_error(lineno, "duplicate position for node " + std::to_string(i));
        slot = Eigen::Map<const Vector>(coords.data(), dim);
    });
    for (int i = 0; i < n; ++i)
        if (positions[static_cast<std::size_t>(i)].size() == 0)
            fail(ErrorCode::ConfigError, "missing position for node " + std::to_string(i + 1));
    return positions;
}

std::vector<Vector> read_positions(const std::filesystem::path& path, int n) {
    auto in = open(path);
    return parse_positions(in, n);
}

std::vector<Matrix> parse_edge_covariances(std::istream& in, const std::vector<Edge>& edges, int dim) {
    std::map<std::pair<int, int>, Matrix> by_pair;
    for_each_record(in, [&](std::istringstream& fields, int lineno) {
        int i = 0, j = 0;
        if (!(fields >> i >> j)) parse_error(lineno, "expected 'i j' followed by covariance entries");
        Matrix c(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int k = 0; k < dim; ++k)
                if (!(fields >> c(r, k))) parse_error(lineno, "expected " + std::to_string(dim * dim) + " entries");
        if (i > j) std::swap(i, j);
        by_pair[{i - 1, j - 1}] = c;
    });
    std::vector<Matrix> out;
    out.reserve(edges.size());
    for (const auto& e : edges) {
        auto it = by_pair.find({std::min(e.i, e.j), std::max(e.i, e.j)});
        if (it == by_pair.end())
            fail(ErrorCode::ConfigError, "no covariance given for edge {" + std::to_string(e.i + 1) + "," +
                                             std::to_string(e.j + 1) + "}");
        out.push_back(it->second);
    }
    return out;
}

std::vector<Matrix> read_edge_covariances(const std::filesystem::path& path, const std::vector<Edge>& edges,
                                          int dim) {
    auto in = open(path);
    return parse_edge_covariances(in, edges, dim);
}

void write_edge_list(std::ostream& out, const SensorNetwork& net) {
    for (const auto& e : net.edges()) out << e.i + 1 << ' ' << e.j + 1 << '\n';
}

void write_positions(std::ostream& out, const SensorNetwork& net) {
    const auto precision = out.precision(17);
    for (int i = 0; i < net.size(); ++i) {
        out << i + 1;
        for (Eigen::Index k = 0; k < net.position(i).size(); ++k) out << ' ' << net.position(i)(k);
        out << '\n';
    }
    out.precision(precision);
}

}  // namespace sensornet
