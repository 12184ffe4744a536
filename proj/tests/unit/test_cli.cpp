#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"

namespace spillover::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "spillover-eq");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(SPILLOVER_CONFIG_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("spillover_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    [[nodiscard]] fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

TEST(Cli, SolveWritesCsvAndSummary) {
    TempDir dir;
    const auto csv = dir / "eq.csv";
    const Result r = run_cli({"solve", "--config", config("rankedcost_lambda4.json"), "--grid-n", "500", "--out",
                              csv.string()});
    ASSERT_EQ(r.code, kOk) << r.err;
    const std::string text = slurp(csv);
    EXPECT_EQ(text.rfind("node,G1,G2,g1,g2\n", 0), 0u);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 502);
    const auto summary = nlohmann::json::parse(slurp(dir / "eq.summary.json"));
    EXPECT_NEAR(summary["s_bar"].get<double>(), 0.842, 5e-3);
}

TEST(Cli, SolveIsDeterministic) {
    const std::vector<std::string> args{"solve", "--config", config("woa_costly_prep.json"), "--grid-n", "400"};
    const Result a = run_cli(args);
    const Result b = run_cli(args);
    ASSERT_EQ(a.code, kOk);
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
}

TEST(Cli, VerifyPassesOnCanonicalContest) {
    const Result r = run_cli({"verify", "--config", config("canonical_allpay.json"), "--grid-n", "500"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_TRUE(doc["passed"].get<bool>());
    for (const auto& [pair, gap] : doc["method_agreement"].items()) EXPECT_LE(gap.get<double>(), 5e-3) << pair;
}

TEST(Cli, VerifyReportsApplicationOracle) {
    const Result r = run_cli({"verify", "--config", config("offense_defense.json")});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_LE(doc["oracle_agreement"]["application"].get<double>(), 2e-3);
}

TEST(Cli, MonotonicityViolationIsNamed) {
    const Result r = run_cli({"solve", "--config", config("a2_violation.json")});
    EXPECT_EQ(r.code, kFailed);
    EXPECT_NE(r.err.find("monotonicity"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run_cli({}).code, kUsage);
    EXPECT_EQ(run_cli({"solve"}).code, kUsage);
    EXPECT_EQ(run_cli({"solve", "--config", config("canonical_allpay.json"), "--grid-n", "4"}).code, kUsage);
    EXPECT_EQ(run_cli({"solve", "--config", config("canonical_allpay.json"), "--method", "lu"}).code, kUsage);
    EXPECT_EQ(run_cli({"frobnicate"}).code, kUsage);
    const Result missing = run_cli({"solve", "--config", "/nonexistent.json"});
    EXPECT_EQ(missing.code, kUsage);
    EXPECT_NE(missing.err.find("config error"), std::string::npos);
}

TEST(Cli, MalformedConfigNamesThePath) {
    TempDir dir;
    const auto path = dir / "bad.json";
    std::ofstream(path) << R"({"family": "logistic_spillover", "params": {"lambda": "x"}})";
    const Result r = run_cli({"solve", "--config", path.string()});
    EXPECT_EQ(r.code, kUsage);
    EXPECT_NE(r.err.find("$.params.lambda"), std::string::npos) << r.err;
}

TEST(Cli, SweepCsvColumns) {
    const Result r = run_cli({"sweep", "--config", config("rankedcost.json"), "--param", "lambda", "--from", "0",
                              "--to", "4", "--steps", "5", "--grid-n", "400"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(r.out.rfind("param_value,payoff_1,payoff_2,atom_1,atom_2,s_bar,win_prob_1\n", 0), 0u);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 6);
}

TEST(Cli, SweepCrossoverJson) {
    const Result r = run_cli({"sweep", "--config", config("rankedcost.json"), "--param", "lambda", "--from", "0",
                              "--to", "4", "--steps", "9", "--grid-n", "1000", "--crossover", "payoff", "--format",
                              "json"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_NEAR(doc["crossover"].get<double>(), 1.489, 0.02);
}

TEST(Cli, SweepWinProbabilityCrossover) {
    const Result r = run_cli({"sweep", "--config", config("woa_costly_prep.json"), "--param", "delta", "--from",
                              "0.02", "--to", "0.2", "--steps", "5", "--crossover", "win_prob", "--format", "json"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_NEAR(nlohmann::json::parse(r.out)["crossover"].get<double>(), 0.0486, 0.002);
}

TEST(Cli, BalanceReportsGamma) {
    const Result r = run_cli({"balance", "--config", config("rankedcost.json")});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_NEAR(doc["gamma"].get<double>(), 0.9, 2e-3);
    EXPECT_EQ(doc["scaled_player"].get<int>(), 1);
}

TEST(Cli, MultiRequiresADuo) {
    TempDir dir;
    const auto path = dir / "m.json";
    std::ofstream(path) << R"({"family": "multi", "players": [{"v": "1", "c": "s"}, {"v": "1", "c": "2*s"}, {"v": "0.01", "c": "s"}]})";
    EXPECT_EQ(run_cli({"multi", "--config", path.string()}).code, kUsage);
    const Result r = run_cli({"multi", "--config", path.string(), "--duo", "1,2", "--grid-n", "400"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_TRUE(nlohmann::json::parse(r.out)["certified"].get<bool>());
}

}  // namespace
}  // namespace spillover::cli
