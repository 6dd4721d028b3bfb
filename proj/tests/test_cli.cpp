#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "json.hpp"
#include "radialfs/field_io.hpp"

using namespace radialfs;
namespace fs = std::filesystem;

namespace {

fs::path workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("radialfs_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

int run(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = std::string(RADIALFS_CLI) + " " + args;
    cmd += stdout_file.empty() ? " > /dev/null" : " > " + stdout_file;
    cmd += " 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json read_json(const std::string& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

void write_text(const std::string& p, const std::string& text) { std::ofstream(p) << text; }

double manufactured_source(int k, double r, double z) {
    // u = r^k e^{-z^2}: only the axial part of the Laplacian survives
    return std::pow(r, k) * (4 * z * z - 2) * std::exp(-z * z);
}

}  // namespace

TEST(Cli, TransformRoundTrip) {
    const auto grid = RadialGrid::gauss(512, 40.0);
    const ModeField f = ModeField::sample_radial(0, grid, [](double r) { return (1 + r * r) * std::exp(-r * r / 2); });
    write_field(f, path("gauss.json"));
    ASSERT_EQ(run("transform --in " + path("gauss.json") + " --out " + path("h.json")), 0);
    ASSERT_EQ(run("transform --inverse --in " + path("h.json") + " --out " + path("hh.json")), 0);
    const ModeField back = read_field(path("hh.json"));
    EXPECT_LE((back.values - f.values).norm() / f.values.norm(), 1e-6);
}

TEST(Cli, TransformCsvOutput) {
    const auto grid = RadialGrid::gauss(512, 40.0);
    write_field(ModeField::sample_radial(1, grid, [](double r) { return r * std::exp(-r * r / 2); }), path("g1.json"));
    ASSERT_EQ(run("transform --in " + path("g1.json") + " --out " + path("g1.csv")), 0);
    std::ifstream in(path("g1.csv"));
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "r,z,re,im");
}

TEST(Cli, MalformedInputIsUsageError) {
    write_text(path("empty.json"), R"({"k":0,"grid":{"type":"gauss","N":4,"R":1},"axial":null,"values":[]})");
    EXPECT_EQ(run("transform --in " + path("empty.json") + " --out " + path("x.json")), 2);
    write_text(path("broken.json"), "{not json");
    EXPECT_EQ(run("transform --in " + path("broken.json") + " --out " + path("x.json")), 2);
    EXPECT_EQ(run("transform --k -1 --in " + path("empty.json") + " --out " + path("x.json")), 2);
    EXPECT_EQ(run("transform"), 2);
}

TEST(Cli, SolveManufactured) {
    const int k = 2;
    const auto grid = RadialGrid::gauss(64, 1.0);
    const AxialGrid ax{10.0, 256};
    write_field(ModeField::sample(k, grid, ax, [](double r, double z) { return cplx(manufactured_source(k, r, z), 0.0); }),
                path("f.json"));
    std::ostringstream trace;
    trace << "z,re,im\n";
    trace.precision(17);
    for (int j = 0; j < ax.N; ++j) trace << ax.z(j) << ',' << std::exp(-ax.z(j) * ax.z(j)) << ",0\n";
    write_text(path("g.csv"), trace.str());

    ASSERT_EQ(run("solve --k 2 --f " + path("f.json") + " --g " + path("g.csv") + " --nr 64 --nz 256 --out " + path("u.json"),
                  path("diag.json")),
              0);
    const auto diag = read_json(path("diag.json"));
    EXPECT_LE(diag["interior_residual"].get<double>(), 1e-6);
    const ModeField u = read_field(path("u.json"));
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < u.nr(); ++i)
        for (int j = 0; j < u.nz(); ++j) {
            const double r = u.grid->nodes()[i], z = ax.z(j);
            err = std::max(err, std::abs(u.values(i, j) - std::pow(r, k) * std::exp(-z * z)));
            scale = std::max(scale, std::pow(r, k) * std::exp(-z * z));
        }
    EXPECT_LE(err / scale, 1e-6);
}

TEST(Cli, SolveZeroData) {
    ASSERT_EQ(run("solve --k 1 --nr 16 --nz 32 --out " + path("u0.json")), 0);
    EXPECT_EQ(read_field(path("u0.json")).values.norm(), 0.0);
}

TEST(Cli, SolveUnresolvedBoundaryData) {
    const AxialGrid ax{10.0, 8};
    nlohmann::json t{{"axial", {{"L", ax.L}, {"N", ax.N}}}, {"values", nlohmann::json::array()}};
    // cos(1.25 z) sits at the Nyquist frequency of an 8-point grid of period 20
    for (int j = 0; j < ax.N; ++j) t["values"].push_back({std::cos(1.25 * ax.z(j)), 0.0});
    write_text(path("nyq.json"), t.dump());
    EXPECT_EQ(run("solve --k 0 --g " + path("nyq.json") + " --nr 16 --nz 8"), 4);
}

TEST(Cli, Verify) {
    EXPECT_EQ(run("verify --suite nonsense"), 2);
    ASSERT_EQ(run("verify --suite ops", path("ops.json")), 0);
    const auto rep = read_json(path("ops.json"));
    EXPECT_EQ(rep["suite"], "ops");
    EXPECT_TRUE(rep["pass"].get<bool>());
    EXPECT_FALSE(rep["checks"].empty());
}

TEST(Cli, NormAndClassify) {
    const auto grid = RadialGrid::gauss(64, 6.0);
    write_field(ModeField::sample_radial(0, grid, [](double r) { return std::exp(-r * r); }), path("n.json"));
    ASSERT_EQ(run("norm --in " + path("n.json") + " --m 0", path("norm.json")), 0);
    EXPECT_NEAR(read_json(path("norm.json"))["total"].get<double>(), std::sqrt(M_PI / 2), 1e-8);
    EXPECT_EQ(run("classify --in " + path("n.json") + " --space Q"), 2);
    EXPECT_EQ(run("classify --in " + path("n.json") + " --m 1 --space S"), 0);
}
