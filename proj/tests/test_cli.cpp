#include "cli.hpp"

#include "sgap/discrete_spaces.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

struct Result {
    int code;
    json report;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "sgap");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = sgap::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    json report;
    if (!out.str().empty() && out.str().front() == '{') report = json::parse(out.str());
    return {code, report, err.str()};
}

const json* check(const json& report, const std::string& name) {
    for (const auto& r : report["results"])
        if (r["type"] == "check" && r["check_name"] == name) return &r;
    return nullptr;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(CliBound, FlatIncludesZhongYang) {
    const Result r = run({"bound", "--K", "0", "--n", "3", "--d", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.report["values"]["zhong_yang"].get<double>(), 9.8696044010893586, 1e-12);
    EXPECT_EQ(r.report["schema_version"], "1.0.0");
    EXPECT_EQ(r.report["versions"]["seed"], 42);
}

TEST(CliBound, SphereModel) {
    const Result r = run({"bound", "--K", "1", "--n", "2", "--d", "3.14159265", "--model"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.report["values"]["model"].get<double>(), 2.0, 1e-6);
}

TEST(CliBound, DiameterGate) {
    const Result r = run({"bound", "--K", "1", "--n", "2", "--d", "4"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("d exceeds π/√K"), std::string::npos) << r.err;
}

TEST(CliBound, CsvRows) {
    const auto path = std::filesystem::temp_directory_path() / "sgap_cli_bound.csv";
    const Result r = run({"bound", "--K", "-1", "--n", "2", "--d", "1", "--csv", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string text = slurp(path);
    EXPECT_EQ(text.substr(0, text.find('\n')), "name,value,applicable");
    EXPECT_NE(text.find("chen_wang_negative_2,9.2988080742944"), std::string::npos) << text;
}

TEST(CliModel, SphereExtremum) {
    const Result r = run({"model", "--R", "1", "--l", "2", "--lambda", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.report["values"]["b"].get<double>(), 1.5707963267948966, 1e-8);
    EXPECT_NEAR(r.report["values"]["m"].get<double>(), 1.0, 1e-8);
}

TEST(CliModel, FlatExtremum) {
    const Result r = run({"model", "--R", "0", "--l", "5", "--lambda", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.report["values"]["b"].get<double>(), std::numbers::pi / 2, 1e-8);
    EXPECT_NEAR(r.report["values"]["m"].get<double>(), 1.0, 1e-8);
}

TEST(CliModel, NegativeCurvatureAndSolutionTable) {
    const auto path = std::filesystem::temp_directory_path() / "sgap_cli_model.csv";
    const Result r = run({"model", "--R", "-1", "--l", "2", "--lambda", "0.5", "--emit-solution", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_LT(r.report["values"]["m"].get<double>(), 1.0);
    std::istringstream rows(slurp(path));
    std::string line;
    std::getline(rows, line);
    EXPECT_EQ(line, "x,v,v_prime");
    std::getline(rows, line);
    EXPECT_EQ(line, "0,-1,0");
}

TEST(CliModel, BadParameters) {
    EXPECT_EQ(run({"model", "--R", "1", "--l", "1", "--lambda", "2"}).code, 2);
    EXPECT_EQ(run({"model", "--R", "1", "--l", "2"}).code, 2);
    EXPECT_EQ(run({"model", "--R", "abc", "--l", "2", "--lambda", "1"}).code, 2);
}

TEST(CliVerify, CircleAllChecks) {
    const Result r = run({"verify", "--space", "circle", "--resolution", "2048", "--checks", "all"});
    ASSERT_EQ(r.code, 0) << r.err;
    int passed = 0;
    for (const auto& x : r.report["results"])
        if (x["type"] == "check" && x["passed"].get<bool>()) ++passed;
    EXPECT_EQ(passed, 3);
}

TEST(CliVerify, FootballEigen) {
    const Result r = run({"verify", "--space", "football", "--c", "3.14159", "--checks", "eigen"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json* c = check(r.report, "eigenvalue_bound");
    ASSERT_NE(c, nullptr);
    EXPECT_TRUE((*c)["passed"].get<bool>());
    EXPECT_NEAR((*c)["lhs"].get<double>(), 2.0, 0.06);
    EXPECT_NEAR((*c)["rhs"].get<double>(), 2.0, 1e-3);
    EXPECT_EQ(check(r.report, "max_comparison"), nullptr);
}

TEST(CliVerify, ResolutionCap) {
    const Result r = run({"verify", "--space", "sphere", "--resolution", "9"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("cap"), std::string::npos) << r.err;
}

TEST(CliVerify, MeshRequiresPath) {
    EXPECT_EQ(run({"verify", "--space", "mesh"}).code, 2);
    EXPECT_EQ(run({"verify", "--space", "torus"}).code, 2);
}

TEST(CliVerify, LoadedMesh) {
    const auto off = std::filesystem::temp_directory_path() / "sgap_cli_sphere.off";
    std::filesystem::remove(off);
    {
        std::ofstream meta(off.string() + ".meta.json");
        meta << R"({"n_dim": 2, "K": 1, "diameter": "estimate"})";
    }
    EXPECT_EQ(run({"verify", "--space", "mesh", "--mesh", off.string()}).code, 2);

    const sgap::DiscreteSpace ico = sgap::build_icosphere(3);
    sgap::write_off(off, ico.positions, ico.faces);
    const Result r = run({"verify", "--space", "mesh", "--mesh", off.string(), "--checks", "eigen"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.report["parameters"]["diameter"].get<double>(), std::numbers::pi, 1e-12);
    EXPECT_TRUE((*check(r.report, "eigenvalue_bound"))["passed"].get<bool>());
}

TEST(CliHeat, CircleLiYau) {
    const Result r = run({"heat", "--space", "circle", "--tmin", "0.01", "--tmax", "1", "--tsteps", "20"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_LE(r.report["values"]["worst_li_yau_ratio"].get<double>(), 1.01);
}

TEST(CliHeat, FootballHarnack) {
    const Result r = run({"heat", "--space", "football", "--pairs", "100", "--seed", "42"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json* c = check(r.report, "harnack");
    ASSERT_NE(c, nullptr);
    EXPECT_TRUE((*c)["passed"].get<bool>());
    EXPECT_EQ(r.report["versions"]["seed"], 42);
}

TEST(CliHeat, IntervalRejected) {
    const Result r = run({"heat", "--space", "interval"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("space has boundary"), std::string::npos) << r.err;
}

TEST(CliHeat, DeterministicForFixedSeed) {
    const Result a = run({"heat", "--space", "sphere", "--resolution", "3", "--pairs", "30", "--seed", "7"});
    const Result b = run({"heat", "--space", "sphere", "--resolution", "3", "--pairs", "30", "--seed", "7"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.report["results"], b.report["results"]);
    EXPECT_EQ(a.report["values"], b.report["values"]);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}
