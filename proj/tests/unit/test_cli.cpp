#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "entcum/convert.hpp"
#include "entcum/engine.hpp"
#include "entcum/symexpr.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = entcum::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("entcum_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string cache() const { return dir_.string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, EvalFirstCumulant) {
  const auto r = run({"eval", "--of", "S", "--order", "1", "--m", "2", "--n", "2", "--digits", "30", "--cache", cache()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "0.333333333333333333333333333333\n");
}

TEST_F(CliTest, LatexSecondCumulant) {
  const auto r = run({"cumulant", "--of", "S", "--order", "2", "--format", "latex", "--cache", cache()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\\psi_1(mn)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\\psi_1(n)"), std::string::npos) << r.out;
}

TEST_F(CliTest, VerifyDegenerateSubsystem) {
  const auto r = run({"verify", "--m", "1", "--n", "5", "--orders", "1,2", "--samples", "1000", "--seed", "7",
                      "--cache", cache()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"exact\": \"0\""), std::string::npos);
  EXPECT_EQ(r.out.find("\"pass\": false"), std::string::npos);
}

TEST_F(CliTest, VerifyFailureExitCode) {
  const auto r = run({"verify", "--m", "2", "--n", "2", "--orders", "1", "--samples", "2000", "--threshold", "1e-9",
                      "--no-cache"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("\"pass\": false"), std::string::npos);
}

TEST_F(CliTest, JsonRoundTrip) {
  for (const char* of : {"S", "T"}) {
    for (const char* order : {"1", "3"}) {
      const auto r = run({"cumulant", "--of", of, "--order", order, "--format", "json", "--cache", cache()});
      ASSERT_EQ(r.code, 0) << r.err;
      entcum::Engine engine;
      const entcum::SymExpr want =
          std::string(of) == "S" ? entcum::cumulant_S(engine, std::stoul(order)) : engine.cumulant_T(std::stoul(order));
      EXPECT_TRUE(entcum::expr_equal(entcum::from_json(r.out), want)) << of << order;
    }
  }
}

TEST_F(CliTest, ColdAndWarmCacheAgree) {
  const std::vector<std::string> args{"cumulant", "--of", "S", "--order", "4", "--format", "text", "--cache", cache()};
  const auto cold = run(args);
  ASSERT_EQ(cold.code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "TK_1_4.json"));
  const auto warm = run(args);
  EXPECT_EQ(cold.out, warm.out);
  const auto list = run({"cache", "list", "--cache", cache()});
  EXPECT_NE(list.out.find("TK_1_4"), std::string::npos);
  const auto check = run({"cache", "check", "--cache", cache()});
  EXPECT_NE(check.out.find(" 0 corrupt"), std::string::npos) << check.out;
  const auto clear = run({"cache", "clear", "--cache", cache()});
  EXPECT_EQ(clear.code, 0);
  EXPECT_FALSE(fs::exists(dir_ / "TK_1_4.json"));
  EXPECT_EQ(run(args).out, cold.out);
}

TEST_F(CliTest, JointAndMean) {
  const auto j = run({"cumulant", "--joint", "TK:0", "--order", "1", "--cache", cache()});
  EXPECT_EQ(j.code, 0) << j.err;
  entcum::Engine engine;
  EXPECT_TRUE(entcum::expr_equal(entcum::parse_expr(j.out, entcum::VarContext::MAlpha),
                                 engine.joint_cumulant({entcum::StatKind::TK, 0, 1})));
  const auto m = run({"mean", "--of", "R", "--order", "2", "--format", "json"});
  EXPECT_EQ(m.code, 0);
  EXPECT_TRUE(entcum::expr_equal(entcum::from_json(m.out), entcum::mean_R(2)));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"cumulant", "--of", "X"}).code, 1);
  EXPECT_EQ(run({"cumulant", "--format", "yaml"}).code, 1);
  EXPECT_EQ(run({"cumulant", "--joint", "QK:1", "--no-cache"}).code, 1);
  EXPECT_EQ(run({"cumulant", "--joint", "TK:x", "--no-cache"}).code, 1);
  EXPECT_EQ(run({"eval", "--m", "3", "--n", "2", "--no-cache"}).code, 1);
  EXPECT_EQ(run({"eval", "--m", "2"}).code, 1);
  EXPECT_EQ(run({"verify", "--m", "2", "--n", "2", "--samples", "10"}).code, 1);
  EXPECT_EQ(run({"verify", "--m", "2", "--n", "2", "--orders", "7"}).code, 1);
  EXPECT_EQ(run({"verify", "--m", "2", "--n", "70", "--no-cache"}).code, 1);
  const auto r = run({"eval", "--m", "0", "--n", "2", "--no-cache"});
  EXPECT_FALSE(r.err.empty());
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, EvalInducedEntropyMean) {
  // 4 psi_0(2) + 3 = 7 - 4 gamma
  const auto r = run({"eval", "--of", "T", "--order", "1", "--m", "2", "--n", "2", "--digits", "15", "--no-cache"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "4.69113734039387\n");
}

TEST_F(CliTest, Help) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verify"), std::string::npos);
}
