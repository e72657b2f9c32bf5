#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("wproj_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = (dir_ / name).string();
    std::ofstream(path) << text;
    return path;
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "wproj");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return wproj::cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  std::vector<json> records() const {
    std::vector<json> recs;
    std::istringstream in(out_.str());
    for (std::string line; std::getline(in, line);) recs.push_back(json::parse(line));
    return recs;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

const char* kDelta0 = R"({"atoms": [{"x": 0, "w": 1}]})";
const char* kTwoPointHalf = R"({"atoms": [{"x": -0.25, "w": 0.5}, {"x": 1, "w": 0.5}]})";

TEST_F(CliTest, ProjectTwoPointExample) {
  const auto mu = write("mu.json", kDelta0);
  const auto nu = write("nu.json", kTwoPointHalf);
  ASSERT_EQ(run({"project", mu, nu, "--p", "1"}), 0) << err_.str();
  const auto r = records().at(0);
  ASSERT_EQ(r["I_atoms"].size(), 1u);
  EXPECT_NEAR(r["I_atoms"][0]["x"].get<double>(), 0.375, 1e-15);
  EXPECT_NEAR(r["W_I_mu"].get<double>(), 0.375, 1e-15);
  EXPECT_NEAR(r["W_I_nu"].get<double>(), 0.625, 1e-15);
  EXPECT_NEAR(r["W_J_mu"].get<double>(), 0.625, 1e-15);
  EXPECT_TRUE(r["ok"].get<bool>());
}

TEST_F(CliTest, ProjectIdenticalInputs) {
  const auto a = write("a.json", kTwoPointHalf);
  ASSERT_EQ(run({"project", a, a}), 0);
  const auto r = records().at(0);
  EXPECT_EQ(r["I_atoms"], r["J_atoms"]);
  EXPECT_EQ(r["I_atoms"], json::parse(kTwoPointHalf)["atoms"]);
  EXPECT_EQ(r["W_I_mu"].get<double>(), 0.0);
  EXPECT_EQ(r["W_J_nu"].get<double>(), 0.0);
}

TEST_F(CliTest, ProjectQuantilePieces) {
  const auto mu = write("mu.json", R"({"quantile_pieces": [
      {"u_hi": 0.5, "slope": 1, "value_hi": 0.5}, {"u_hi": 1, "slope": 0.5, "value_hi": 1}]})");
  const auto nu = write("nu.json", R"({"quantile_pieces": [{"u_hi": 1, "slope": 0.5, "value_hi": 0.5}]})");
  ASSERT_EQ(run({"project", mu, nu, "--p", "2", "--discretize-n", "4096"}), 0) << err_.str();
  const auto atoms = records().at(0)["I_atoms"];
  ASSERT_EQ(atoms.size(), 4096u);
  double worst = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    worst = std::max(worst, std::abs(atoms[i]["x"].get<double>() - 0.5 * (i + 0.5) / 4096.0));
  EXPECT_LE(worst, 1e-3);
}

TEST_F(CliTest, DistanceAndOrderCheck) {
  const auto a = write("a.json", kDelta0);
  const auto b = write("b.json", kTwoPointHalf);
  ASSERT_EQ(run({"distance", a, b, "--p", "1"}), 0);
  EXPECT_NEAR(records().at(0)["W"].get<double>(), 0.625, 1e-15);

  const auto c = write("c.json", R"({"atoms": [{"x": 0.375, "w": 1}]})");
  ASSERT_EQ(run({"order-check", c, b}), 0);
  EXPECT_TRUE(records().at(0)["ordered"].get<bool>());
  ASSERT_EQ(run({"order-check", b, c}), 0);
  EXPECT_FALSE(records().at(0)["ordered"].get<bool>());
  EXPECT_EQ(run({"order-check", a, b}), 3);
}

TEST_F(CliTest, LatticeGridFamily) {
  const auto mu = write("mu.json", R"({"atoms": [{"x": 0.125, "w": 0.25}, {"x": 0.375, "w": 0.25},
      {"x": 0.625, "w": 0.25}, {"x": 0.875, "w": 0.25}]})");
  const auto nu = write("nu.json", R"({"atoms": [{"x": 0, "w": 0.125}, {"x": 0.25, "w": 0.25},
      {"x": 0.5, "w": 0.25}, {"x": 0.75, "w": 0.25}, {"x": 1, "w": 0.125}]})");
  ASSERT_EQ(run({"lattice", mu, nu}), 0) << err_.str();
  const auto r = records().at(0);
  EXPECT_EQ(r["meet_atoms"].size(), 4u);
  EXPECT_EQ(r["join_atoms"].size(), 5u);
  EXPECT_TRUE(r["sandwich"].get<bool>());
}

TEST_F(CliTest, ParseErrorsExitTwo) {
  const auto good = write("good.json", kDelta0);
  EXPECT_EQ(run({"distance", good, write("bad.json", "{not json")}), 2);
  EXPECT_EQ(run({"distance", good, write("nofield.json", R"({"atoms": [{"x": 0}]})")}), 2);
  EXPECT_EQ(run({"distance", good, write("both.json", R"({"atoms": [], "quantile_pieces": []})")}), 2);
  EXPECT_EQ(run({"distance", good, write("empty.json", R"({"atoms": []})")}), 2);
  EXPECT_EQ(run({"distance", good, write("neg.json", R"({"atoms": [{"x": 0, "w": -1}]})")}), 2);
  EXPECT_EQ(run({"distance", good, (dir_ / "missing.json").string()}), 2);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  const auto good = write("good.json", kDelta0);
  EXPECT_EQ(run({}), 1);
  EXPECT_EQ(run({"frobnicate"}), 1);
  EXPECT_EQ(run({"distance", good}), 1);
  EXPECT_EQ(run({"distance", good, good, "--p", "0.5"}), 1);
  EXPECT_EQ(run({"audit", "--trials", "0"}), 1);
}

TEST_F(CliTest, AuditIdenticalQuadrupleIsDegenerate) {
  const auto a = write("a.json", kTwoPointHalf);
  const auto b = write("b.json", kDelta0);
  ASSERT_EQ(run({"audit", a, a, b, b}), 0);
  const auto recs = records();
  EXPECT_EQ(recs.at(0)["ratio_I"], "degenerate");
  EXPECT_EQ(recs.at(0)["ratio_J"], "degenerate");
  EXPECT_EQ(recs.back()["violations"], 0);
}

TEST_F(CliTest, AuditRandomIsDeterministic) {
  const auto csv = (dir_ / "audit.csv").string();
  ASSERT_EQ(run({"audit", "--trials", "300", "--p", "1", "--seed", "0", "--csv", csv}), 0);
  const std::string first = out_.str();
  const auto summary = records().back();
  EXPECT_EQ(summary["violations"], 0);
  EXPECT_LE(summary["max_ratio_I"].get<double>(), 1.0);
  EXPECT_LE(summary["max_ratio_J"].get<double>(), 1.0);
  EXPECT_EQ(summary["trials"], 300);
  ASSERT_EQ(run({"audit", "--trials", "300", "--p", "1", "--seed", "0"}), 0);
  EXPECT_EQ(out_.str(), first);
  ASSERT_EQ(run({"audit", "--trials", "300", "--p", "1", "--seed", "1"}), 0);
  EXPECT_NE(out_.str(), first);
  EXPECT_TRUE(fs::exists(csv));
}

TEST_F(CliTest, ReplayExamplesAllPass) {
  const auto out = (dir_ / "replay.jsonl").string();
  const auto csv = (dir_ / "replay.csv").string();
  ASSERT_EQ(run({"replay-examples", "--out", out, "--csv", csv}), 0);
  std::ifstream in(out);
  bool saw_16_2 = false, saw_alpha = false;
  json summary;
  for (std::string line; std::getline(in, line);) {
    const auto r = json::parse(line);
    if (r.contains("pass")) EXPECT_TRUE(r["pass"].get<bool>()) << r.dump();
    if (r.value("table", "") == "lattice_ratio" && r["n"] == 16 && r["p"] == 2.0) {
      saw_16_2 = true;
      EXPECT_NEAR(r["join"].get<double>(), 2.0, 1e-12);
    }
    if (r.value("table", "") == "alpha_sweep" && r["alpha"] == 0.001) {
      saw_alpha = true;
      EXPECT_NEAR(r["ratio_I"].get<double>(), 1.99601, 1e-3);
    }
    if (r.contains("command")) summary = r;
  }
  EXPECT_TRUE(saw_16_2);
  EXPECT_TRUE(saw_alpha);
  EXPECT_EQ(summary["failed"], 0);
  EXPECT_TRUE(fs::file_size(csv) > 0);
}

}  // namespace
