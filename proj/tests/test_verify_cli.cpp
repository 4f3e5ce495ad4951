#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "ebcv/commands.hpp"

using namespace ebcv;

namespace {

const VerifyReport& report01() {
  static const VerifyReport r = run_verify({}, load_tables(kDefaultTablesPath));
  return r;
}

std::string temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p.string();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EBCV_CLI) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST(Verify, DefaultRunHasNoFailures) {
  const VerifyReport& r = report01();
  EXPECT_TRUE(r.ok());
  EXPECT_GT(r.count(CheckStatus::Pass), 40);
  EXPECT_GT(r.count(CheckStatus::PaperDiscrepancy), 0);
}

TEST(Verify, IdsSortedAndUnique) {
  const auto& c = report01().checks;
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(c[i - 1].id, c[i].id);
}

TEST(Verify, DiscrepanciesCarryBothForms) {
  for (const auto& c : report01().checks)
    if (c.status == CheckStatus::PaperDiscrepancy) {
      EXPECT_FALSE(c.oracle.empty()) << c.id;
      EXPECT_FALSE(c.printed.empty()) << c.id;
      EXPECT_TRUE(c.witness.has_value()) << c.id;
    }
}

TEST(Verify, ScalarCorollaryIsADiscrepancy) {
  const CheckRecord* c = report01().find("scalar-vs-corollary");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->status, CheckStatus::PaperDiscrepancy);
  EXPECT_NEAR(c->max_residual, 3.0, 1e-9);  // -3 computed, 0 printed
}

TEST(Verify, AppendixBracketAtUnitParameters) {
  VerifyOptions o;
  o.params = {1, 1};
  o.seed = 1;
  o.samples = 50;
  const VerifyReport r = run_verify(o, load_tables(kDefaultTablesPath));
  const CheckRecord* c = r.find("appendix-bracket-45");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->status, CheckStatus::PaperDiscrepancy);
  EXPECT_TRUE(r.ok());
}

TEST(Verify, Deterministic) {
  VerifyOptions o;
  o.samples = 20;
  const auto tab = load_tables(kDefaultTablesPath);
  EXPECT_EQ(to_json(run_verify(o, tab), false).dump(), to_json(run_verify(o, tab), false).dump());
}

TEST(Verify, TinyToleranceFails) {
  VerifyArgs a;
  a.options.samples = 20;
  a.options.tol_scale = 1e-30;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify(a, out, err), kExitCheckFailed);
}

TEST(Verify, DomainAndTableErrors) {
  std::ostringstream out, err;
  VerifyArgs a;
  a.options.params = {-1e7, 1};
  EXPECT_EQ(cmd_verify(a, out, err), kExitDomain);
  VerifyArgs b;
  b.tables = "/nonexistent.json";
  EXPECT_EQ(cmd_verify(b, out, err), kExitMalformedInput);
  VerifyOptions o;
  o.samples = 0;
  EXPECT_THROW(run_verify(o, load_tables(kDefaultTablesPath)), TooFewSamples);
}

TEST(Commands, GeodesicCircle) {
  GeodesicArgs a;
  a.init = {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0};
  a.n = 6283;
  a.out = (std::filesystem::temp_directory_path() / "ebcv_circle.csv").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_geodesic(a, out, err), kExitOk) << err.str();
  EXPECT_NE(out.str().find("verdict circle, radius 1.000000"), std::string::npos) << out.str();
}

TEST(Commands, GeodesicModeMismatchAndDomainExit) {
  std::ostringstream out, err;
  GeodesicArgs a;
  a.params = {1, 1};
  a.random_init = true;
  EXPECT_EQ(cmd_geodesic(a, out, err), kExitUsage);
  GeodesicArgs b;
  b.mode = "riemannian";
  b.params = {-1, 1};
  b.init = {0, 0, 0, 0.5, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0};
  b.h = 1e-2;
  b.n = 10000;
  b.out = (std::filesystem::temp_directory_path() / "ebcv_exit.csv").string();
  EXPECT_EQ(cmd_geodesic(b, out, err), kExitDomainExit);
  EXPECT_NE(err.str().find("domain_exit at step"), std::string::npos);
}

TEST(Commands, KillingListAndCheck) {
  std::ostringstream out, err;
  KillingArgs a;
  ASSERT_EQ(cmd_killing(a, out, err), kExitOk);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["fields"].size(), 13u);

  const auto ok = temp_file("ebcv_x1.json", R"([{"0,0,0,0,0,0,0": 1}, {}, {}, {}, {}, {}, {}])");
  const auto no = temp_file("ebcv_x4.json", R"([{}, {}, {}, {"0,0,0,0,0,0,0": 1}, {}, {}, {}])");
  const auto bad = temp_file("ebcv_bad.json", R"([{"0,0,0,0,0,0,0": "x"}])");
  KillingArgs c;
  c.action = "check";
  for (auto [path, verdict] : {std::pair{ok, "killing"}, std::pair{no, "not-killing"}}) {
    std::ostringstream o;
    c.input = path;
    EXPECT_EQ(cmd_killing(c, o, err), kExitOk);
    EXPECT_EQ(nlohmann::json::parse(o.str())["verdict"], verdict);
  }
  c.input = bad;
  EXPECT_EQ(cmd_killing(c, out, err), kExitMalformedInput);
}

TEST(Commands, Classify) {
  std::ostringstream out, err;
  ClassifyArgs a;
  a.m = 0.25;
  a.l = 1;
  ASSERT_EQ(cmd_classify(a, out, err), kExitOk);
  EXPECT_EQ(out.str(), "Sphere3 (ii)\n");
}

TEST(Commands, CurvatureScalar) {
  std::ostringstream out, err;
  CurvatureArgs a;
  a.point = {0, 0, 0, 0, 0, 0, 0};
  ASSERT_EQ(cmd_curvature(a, out, err), kExitOk);
  EXPECT_NEAR(nlohmann::json::parse(out.str())["scalar"].get<double>(), -3.0, 1e-12);
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(run_cli("verify --samples 20"), 0);
  EXPECT_EQ(run_cli("verify --samples 20 --tol-scale 1e-30"), 1);
  EXPECT_EQ(run_cli("verify --m=-1e7 --l 1"), 2);
  EXPECT_EQ(run_cli("geodesic --mode heisenberg --m 1 --l 1 --random-init"), 64);
  EXPECT_EQ(run_cli("classify --bogus"), 64);
  const auto bad = temp_file("ebcv_bad2.json", "[1, 2]");
  EXPECT_EQ(run_cli("killing check --input " + bad), 4);
}
