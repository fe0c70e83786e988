#include "helpers.hpp"

#include "sensornet/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sensornet;
using namespace testing;

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "sensornet");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("sensornet_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const fs::path& path, const std::string& text) {
    std::ofstream(path) << text;
    return path;
}

const fs::path kConfigs = SENSORNET_CONFIG_DIR;

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("localize writes outputs") {
    auto dir = scratch("localize");
    auto cfg = write_file(dir / "loc.cfg",
                          "[scenario]\nkind = localization\nname = loc\nhorizon = 10\nreplicates = 2\n"
                          "[network]\nnodes = 30\nradius = 40\n[output]\ndump_states = true\ndump_edges = true\n");
    auto r = cli({"localize", "--config", cfg.string(), "--out", (dir / "runs/1").string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.empty());
    CHECK(r.err.empty());
    for (const char* f : {"metrics.csv", "config.echo", "plot.gp", "locations.csv", "network.edges", "network.positions"})
        CHECK(fs::exists(dir / "runs/1" / f));
}

TEST_CASE("seed override changes results") {
    auto dir = scratch("seed");
    auto cfg = write_file(dir / "loc.cfg",
                          "[scenario]\nkind = localization\nname = loc\nhorizon = 5\n[network]\nnodes = 20\nradius = 40\n");
    auto read = [](const fs::path& p) {
        std::ifstream in(p);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    REQUIRE(cli({"localize", "-c", cfg.string(), "-o", (dir / "a").string(), "--seed", "1"}).code == 0);
    REQUIRE(cli({"localize", "-c", cfg.string(), "-o", (dir / "b").string(), "--seed", "1"}).code == 0);
    REQUIRE(cli({"localize", "-c", cfg.string(), "-o", (dir / "c").string(), "--seed", "2", "--replicates", "3"}).code == 0);
    CHECK(read(dir / "a/metrics.csv") == read(dir / "b/metrics.csv"));
    CHECK(read(dir / "a/metrics.csv") != read(dir / "c/metrics.csv"));
    CHECK(read(dir / "c/config.echo").find("replicates=3") != std::string::npos);
}

TEST_CASE("missing config") {
    auto r = cli({"estimate", "--config", "/no/such/config.cfg"});
    CHECK(r.code == kExitConfig);
    CHECK(r.err.rfind("error: code=ConfigError", 0) == 0);
    CHECK(r.err.find("/no/such/config.cfg") != std::string::npos);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
}

TEST_CASE("bad arguments") {
    CHECK(cli({}).code == kExitConfig);
    CHECK(cli({"frobnicate"}).code == kExitConfig);
    CHECK(cli({"estimate"}).code == kExitConfig);
    CHECK(cli({"--help"}).code == kExitOk);
    auto dir = scratch("kind");
    auto cfg = write_file(dir / "k.cfg", "[scenario]\nkind = tracking\n");
    auto r = cli({"localize", "-c", cfg.string(), "-o", dir.string()});
    CHECK(r.code == kExitConfig);
}

TEST_CASE("disconnected graph") {
    auto dir = scratch("disconnected");
    write_file(dir / "split.edges", "1 2\n3 4\n");
    auto cfg = write_file(dir / "split.cfg",
                          "[scenario]\nkind = localization\n[network]\nsource = edge_list\nedge_file = split.edges\n");
    auto r = cli({"localize", "-c", cfg.string(), "-o", (dir / "out").string()});
    CHECK(r.code == kExitValidation);
    CHECK(r.err.find("DisconnectedGraph") != std::string::npos);
    CHECK(r.err.find("connected") != std::string::npos);
    CHECK(cli({"analyze", "-c", cfg.string()}).code == kExitValidation);
}

TEST_CASE("analyze") {
    auto r = cli({"analyze", "-c", (kConfigs / "path3.cfg").string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("jacobi spectral radius: 0.707107") != std::string::npos);
    CHECK(r.out.find("connected=yes") != std::string::npos);
    CHECK(r.out.find("rank condition: satisfied") != std::string::npos);
    CHECK(r.out.find("predicted joint mse") != std::string::npos);
    CHECK(cli({"analyze", "-q", "-c", (kConfigs / "path3.cfg").string()}).out.empty());

    auto dir = scratch("rank");
    write_file(dir / "p.edges", "1 2\n2 3\n");
    auto cfg = write_file(dir / "rank.cfg",
                          "[scenario]\nkind = static-field\n[network]\nsource = edge_list\nedge_file = p.edges\n"
                          "[field]\nnx = 4\nny = 4\n");
    auto flagged = cli({"analyze", "-c", cfg.string()});
    CHECK(flagged.code == kExitOk);
    CHECK(flagged.out.find("rank condition violated") != std::string::npos);
    CHECK(cli({"estimate", "-c", cfg.string(), "-o", (dir / "out").string()}).code == kExitValidation);
}

TEST_CASE("output root from the environment") {
    auto dir = scratch("env");
    auto cfg = write_file(dir / "e.cfg",
                          "[scenario]\nkind = localization\nname = envrun\nhorizon = 3\n[network]\nnodes = 10\nradius = 60\n");
    ::setenv(kOutRootEnv, (dir / "root").string().c_str(), 1);
    auto r = cli({"localize", "-c", cfg.string()});
    ::unsetenv(kOutRootEnv);
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "root/envrun/metrics.csv"));
}

TEST_CASE("exit code mapping") {
    CHECK(exit_code_for(ErrorCode::ConfigError) == 2);
    CHECK(exit_code_for(ErrorCode::IoError) == 2);
    CHECK(exit_code_for(ErrorCode::SingularInformation) == 3);
    CHECK(exit_code_for(ErrorCode::DisconnectedGraph) == 4);
    CHECK(exit_code_for(ErrorCode::RankDeficient) == 4);
}

}
