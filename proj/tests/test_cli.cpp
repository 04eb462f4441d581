#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "psphere_cli.hpp"

namespace psphere::cli {
namespace {

struct Result {
  int code;
  std::string out, err;
  json body() const { return json::parse(out); }
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(PSPHERE_CONFIG_DIR) + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("psphere_cli_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(Points, ParseAndFormatRoundTrip) {
  EXPECT_TRUE(parse_point("inf").is_infinite());
  EXPECT_EQ(parse_point("2.5,-1").value(), Complex(2.5, -1));
  EXPECT_EQ(parse_point("3").value(), Complex(3, 0));
  const Complex z(0.1, -1.0 / 3.0);
  EXPECT_EQ(parse_point(format_point(z)).value(), z);
  EXPECT_THROW(parse_point("1,x"), Error);
  EXPECT_EQ(point_from_json(json::array({1.5, 2.0})).value(), Complex(1.5, 2.0));
}

TEST(Config, FieldsAreValidated) {
  RunConfig c;
  EXPECT_THROW(apply_config_json(json{{"flavor", "bogus"}}, c), Error);
  EXPECT_THROW(apply_config_json(json{{"mesh", {{"h", -1.0}}}}, c), Error);
  EXPECT_THROW(apply_config_json(json{{"glue", {{"m_glue", 0}}}}, c), Error);
  apply_config_json(json{{"punctures", {"0,0", "inf", 2.0}}, {"seed", 5}}, c);
  EXPECT_EQ(c.punctures.size(), 3u);
  EXPECT_EQ(c.seed, 5u);
}

TEST(Invariants, IntegersUpToFour) {
  const Result r = run_cli({"invariants", "--config", config("integers.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.body()["Q"].get<double>(), std::log(2.0), 1e-12);
  EXPECT_NEAR(r.body()["mQ"].get<double>(), 2.0 * std::log(3.0), 1e-12);
  EXPECT_EQ(r.body()["best_partition"].size(), 2u);
}

TEST(Invariants, ThreePointsAndTen) {
  json a = run_cli({"invariants", "--config", config("three.json")}).body();
  EXPECT_EQ(a["Q"].get<double>(), 0.0);
  EXPECT_EQ(a["mQ"].get<double>(), 0.0);
  json b = run_cli({"invariants", "--config", config("ten.json")}).body();
  EXPECT_NEAR(b["Q"].get<double>(), std::log(9.0), 1e-12);
  EXPECT_EQ(b["rho"].size(), 4u);
  for (const auto& br : b["rho_brackets"]) EXPECT_TRUE(br["ok"].get<bool>());
}

TEST(Invariants, OutputIsDeterministic) {
  EXPECT_EQ(run_cli({"invariants", "--config", config("ten.json")}).out,
            run_cli({"invariants", "--config", config("ten.json")}).out);
}

TEST(Systole, ExactAndBracketed) {
  json a = run_cli({"systole", "--config", config("three.json")}).body();
  EXPECT_NEAR(a["exact"].get<double>(), 1.76275, 1e-5);
  json b = run_cli({"systole", "--config", config("ten.json")}).body();
  EXPECT_NEAR(b["upper"].get<double>(), 1.9248, 1e-4);
  EXPECT_LE(b["lower"].get<double>(), b["upper"].get<double>());
}

TEST(Distance, SamePointAndCrossRegion) {
  json z = run_cli({"distance", "--config", config("three.json"), "--from", "-1,0", "--to", "-1,0"}).body();
  EXPECT_EQ(z["value"].get<double>(), 0.0);
  const Result r = run_cli({"distance", "--config", config("three.json"), "--from", "0.1,0", "--to", "-1,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  json d = r.body();
  EXPECT_EQ(d["regions"][0], "cell 0");
  EXPECT_EQ(d["regions"][1], "W");
  EXPECT_LT(d["diagnostics"]["relative_change"].get<double>(), 0.02);
  EXPECT_EQ(d["diagnostics"]["refined_m_glue"].get<int>(), 256);
}

TEST(Distance, QHatAntipodalOnTheCircleOfOne) {
  const double r = 1.0 / std::numbers::e;
  const Result res = run_cli({"distance", "--config", config("qhat_three.json"), "--mesh-m", "64", "--from",
                              format_point(Complex(1.0 + r, 0.0)), "--to", format_point(Complex(1.0 - r, 0.0))});
  ASSERT_EQ(res.code, 0) << res.err;
  EXPECT_NEAR(res.body()["value"].get<double>(), std::numbers::pi, 1e-12);
}

TEST(Distance, PointAtPunctureIsADomainError) {
  const Result r = run_cli({"distance", "--config", config("three.json"), "--from", "1,0", "--to", "2,0"});
  EXPECT_EQ(r.code, kExitDomain);
  EXPECT_EQ(r.body()["error"]["code"], "PointIsPuncture");
}

TEST(Voronoi, PlainBisectorAndModifiedApollonianCircle) {
  json plain = run_cli({"voronoi", "--config", config("three.json")}).body();
  ASSERT_EQ(plain["cells"].size(), 2u);
  bool bisector = false;
  for (const auto& line : plain["cells"][0]["polylines"])
    for (const auto& p : line) bisector = bisector || std::abs(p[0].get<double>() - 0.5) < 1e-12;
  EXPECT_TRUE(bisector);

  json mod = run_cli({"voronoi", "--modified", "--config", config("three.json")}).body();
  const auto& one = mod["cells"][1];
  EXPECT_EQ(one["nucleus"][0].get<double>(), 1.0);
  EXPECT_TRUE(one["closed"].get<bool>());
  for (const auto& line : one["polylines"])
    for (const auto& p : line)
      EXPECT_NEAR(std::hypot(p[0].get<double>() - 4.0 / 3.0, p[1].get<double>()), 2.0 / 3.0, 1e-12);
}

TEST(Compare, CsvIsByteIdenticalAndSidecarIsWritten) {
  const std::string a = temp_path("a.csv"), b = temp_path("b.csv");
  for (const auto& path : {a, b}) {
    const Result r = run_cli({"compare", "--config", config("three.json"), "--flavor-b", "jhat", "--pairs", "40",
                              "--format", "csv", "--output", path});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  const std::string csv = slurp(a);
  EXPECT_EQ(csv, slurp(b));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "pair_id,z1_re,z1_im,z2_re,z2_im,d_a,d_b,ratio");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 41);
  const json summary = json::parse(slurp(a + ".summary.json"));
  EXPECT_EQ(summary["n_pairs"].get<int>(), 40);
  EXPECT_TRUE(summary["bound"].is_null());
}

TEST(Compare, IdenticalFlavorsGiveUnitRatios) {
  const Result r = run_cli({"compare", "--config", config("three.json"), "--flavor-b", "euclid", "--pairs", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.body()["min_ratio"].get<double>(), 1.0);
  EXPECT_EQ(r.body()["max_ratio"].get<double>(), 1.0);
}

TEST(Constants, EuclidAndQHat) {
  json e = run_cli({"constants", "--config", config("three.json")}).body();
  EXPECT_NEAR(e["B1"].get<double>(), 2.0 / (std::numbers::pi * std::numbers::e), 1e-15);
  EXPECT_NEAR(e["K2"].get<double>(), 105.6, 0.1);
  json q = run_cli({"constants", "--config", config("three.json"), "--flavor", "qhat"}).body();
  EXPECT_EQ(q["B1"].get<double>(), 1.0);
  EXPECT_EQ(q["B2"].get<double>(), 48.0);
  json j = run_cli({"constants", "--config", config("three.json"), "--flavor", "jhat"}).body();
  EXPECT_TRUE(j["B1"].is_null());
}

TEST(Verify, CrossRatioSuitePasses) {
  const Result r = run_cli({"verify", "--suite", "crossratio", "--samples", "1000", "--config", config("three.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.body()["pass"].get<bool>());
}

TEST(Verify, RingSuiteReportsTheNegativeTestAsPass) {
  const Result r = run_cli({"verify", "--suite", "ringmetrics", "--samples", "2000", "--config", config("three.json")});
  EXPECT_EQ(r.code, 0);
  bool found = false;
  const json body = r.body();
  for (const auto& p : body["properties"])
    if (p["name"] == "min_variant_counterexample") {
      found = true;
      EXPECT_TRUE(p["pass"].get<bool>());
    }
  EXPECT_TRUE(found);
}

TEST(Verify, AllOnTenFailsOnlyOnTheInteriorCellForm) {
  const Result r = run_cli({"verify", "--suite", "all", "--samples", "300", "--config", config("ten.json")});
  EXPECT_EQ(r.code, kExitFailed);
  const json body = r.body();
  for (const auto& p : body["properties"]) {
    if (p["name"] == "delta_tilde_interior_cells")
      EXPECT_FALSE(p["pass"].get<bool>());
    else
      EXPECT_TRUE(p["pass"].get<bool>()) << p.dump();
  }
}

TEST(Verify, AllPassesWithoutTheSliver) {
  const Result r = run_cli({"verify", "--suite", "all", "--samples", "300", "--config", config("no_sliver.json")});
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Errors, ExitCodes) {
  EXPECT_EQ(run_cli({"verify", "--suite", "nope", "--config", config("three.json")}).code, kExitConfig);
  EXPECT_EQ(run_cli({"invariants", "--points", "0;1;1"}).code, kExitConfig);
  EXPECT_EQ(run_cli({"invariants", "--config", "/nonexistent.json"}).code, kExitConfig);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kExitConfig);
  std::string many;
  for (int k = 0; k < 22; ++k) many += (k ? ";" : "") + std::to_string(k);
  const Result r = run_cli({"invariants", "--points", many});
  EXPECT_EQ(r.code, kExitResource);
  EXPECT_EQ(r.body()["error"]["code"], "TooManyPunctures");
}

TEST(Errors, CsvOnlyForCompare) {
  EXPECT_EQ(run_cli({"invariants", "--format", "csv", "--config", config("three.json")}).code, kExitConfig);
}

}  // namespace
}  // namespace psphere::cli
