#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kBin = ACDISC_CLI_BIN;
const std::string kConfigs = ACDISC_CONFIG_DIR;

int run_cli(const std::string& args) {
    const std::string cmd = kBin + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::path("cli_test_out") / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

json read_json(const fs::path& p) {
    std::ifstream is(p);
    EXPECT_TRUE(is) << p;
    json j;
    is >> j;
    return j;
}

int csv_rows(const fs::path& p, std::string* header = nullptr) {
    std::ifstream is(p);
    EXPECT_TRUE(is) << p;
    std::string line;
    int rows = -1;  // don't count the header
    while (std::getline(is, line)) {
        if (rows < 0 && header) *header = line;
        ++rows;
    }
    return rows;
}

TEST(Cli, ModelScenarioPassesWithTinyResiduals) {
    const fs::path out = fresh_dir("model");
    ASSERT_EQ(run_cli("model --config " + kConfigs + "/model.json --out " + out.string()), 0);
    const json rep = read_json(out / "model_report.json");
    EXPECT_TRUE(rep.at("pass").get<bool>());
    for (const json& c : rep.at("checks")) {
        EXPECT_TRUE(c.at("pass").get<bool>()) << c.dump();
        EXPECT_LE(c.at("value").get<double>(), 1e-12) << c.dump();
    }
    std::string header;
    EXPECT_EQ(csv_rows(out / "model_samples.csv", &header), 64 + 8 * 8);
    EXPECT_EQ(header.substr(0, 33), "on_boundary,re_zeta,im_zeta,re_f0");
}

TEST(Cli, ModelSamplesStayOnTheHypersurface) {
    const fs::path out = fresh_dir("model_samples");
    ASSERT_EQ(run_cli("model --config " + kConfigs + "/model.json --out " + out.string() +
                      " --format json"),
              0);
    const json rows = read_json(out / "model_samples.json");
    int boundary = 0;
    for (const json& r : rows)
        if (r.at("on_boundary").get<double>() == 1.0) {
            ++boundary;
            EXPECT_LE(std::abs(r.at("surface_value").get<double>()), 1e-12);
            EXPECT_LE(r.at("stationarity_residual").get<double>(), 1e-12);
        }
    EXPECT_EQ(boundary, 64);
}

TEST(Cli, KernelScenarioReportsFullRank) {
    const fs::path out = fresh_dir("kernel");
    ASSERT_EQ(run_cli("kernel --config " + kConfigs + "/kernel.json --out " + out.string()), 0);
    const json rep = read_json(out / "kernel_report.json");
    EXPECT_EQ(rep.at("rank").get<int>(), 12);
    EXPECT_EQ(rep.at("basis_size").get<int>(), 12);
    EXPECT_TRUE(rep.at("pass").get<bool>());
}

TEST(Cli, ValidateLeviAndNormalizeScenariosPass) {
    for (const std::string name : {"validate", "levi", "normalize"}) {
        const fs::path out = fresh_dir(name);
        EXPECT_EQ(run_cli(name + " --config " + kConfigs + "/" + name + ".json --out " +
                          out.string()),
                  0)
            << name;
        const json rep = read_json(out / (name + "_report.json"));
        EXPECT_TRUE(rep.at("pass").get<bool>()) << name;
        EXPECT_EQ(rep.at("config").at("command").get<std::string>(), name);
    }
}

TEST(Cli, MalformedCouplingIsAValidationFailure) {
    const fs::path out = fresh_dir("bad_coupling");
    const fs::path cfg = out / "config.json";
    std::ofstream(cfg) << R"({"n": 2, "A": [[[0.5, 0]]], "a": [1, 0]})";
    ASSERT_EQ(run_cli("model --config " + cfg.string() + " --out " + out.string()), 1);
    const json rep = read_json(out / "model_report.json");
    EXPECT_FALSE(rep.at("pass").get<bool>());
    ASSERT_TRUE(rep.contains("violations"));
    EXPECT_NE(rep["violations"][0].get<std::string>().find("antisymmetric"), std::string::npos);
}

TEST(Cli, UnreadableOrBrokenConfigIsAParseError) {
    const fs::path out = fresh_dir("parse_error");
    EXPECT_EQ(run_cli("model --config " + (out / "missing.json").string()), 2);
    const fs::path cfg = out / "broken.json";
    std::ofstream(cfg) << "{broken";
    EXPECT_EQ(run_cli("model --config " + cfg.string()), 2);
    EXPECT_EQ(run_cli("frobnicate --config " + cfg.string()), 2);  // unknown subcommand
}

TEST(Cli, ZeroSampleGridWritesHeaderOnly) {
    const fs::path out = fresh_dir("zero_grid");
    const fs::path cfg = out / "config.json";
    std::ofstream(cfg) << R"({"n": 2, "samples": {"boundary": 0, "rays": 0, "per_ray": 0}})";
    ASSERT_EQ(run_cli("model --config " + cfg.string() + " --out " + out.string()), 0);
    EXPECT_EQ(csv_rows(out / "model_samples.csv"), 0);
}

// config -> report -> re-run from the embedded config reproduces the numbers
TEST(Cli, ContinueScenarioConvergesAndRoundTrips) {
    const fs::path out1 = fresh_dir("continue1");
    ASSERT_EQ(
        run_cli("continue --config " + kConfigs + "/continue.json --out " + out1.string()), 0);
    const json rep1 = read_json(out1 / "continue_report.json");
    EXPECT_TRUE(rep1.at("converged").get<bool>());
    EXPECT_TRUE(rep1.at("pass").get<bool>());
    ASSERT_GE(rep1.at("trace").size(), 6u);
    for (const json& st : rep1.at("trace")) EXPECT_TRUE(st.at("accepted").get<bool>());

    const fs::path out2 = fresh_dir("continue2");
    const fs::path cfg2 = out2 / "echoed.json";
    std::ofstream(cfg2) << rep1.at("config").dump();
    ASSERT_EQ(run_cli("continue --config " + cfg2.string() + " --out " + out2.string()), 0);
    const json rep2 = read_json(out2 / "continue_report.json");
    EXPECT_EQ(rep1.at("checks").dump(), rep2.at("checks").dump());
    EXPECT_EQ(rep1.at("trace").dump(), rep2.at("trace").dump());

    std::string header;
    EXPECT_EQ(csv_rows(out1 / "continue_samples.csv", &header), 64 + 8 * 8);
}

}  // namespace
