#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "brane/commands.hpp"

using namespace brane;
using cli::Options;
using io::Json;

namespace {

namespace fs = std::filesystem;

std::string fixture(const std::string& name) { return std::string(BRANE_FIXTURE_DIR) + "/" + name; }

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

template <class F>
Run run(F&& f) {
  std::ostringstream out, err;
  Run r;
  r.code = f(out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Options quiet() {
  Options o;
  o.timestamp = false;
  return o;
}

Run verify(const std::string& w, const std::string& f, Options o = quiet()) {
  return run([&](auto& out, auto& err) { return cli::cmdVerify(w, f, o, out, err); });
}
Run quadric(const std::string& w, const std::string& b, Options o = quiet()) {
  return run([&](auto& out, auto& err) { return cli::cmdQuadric(w, b, o, out, err); });
}
Run metric(const std::string& w, const std::string& b, Options o = quiet()) {
  return run([&](auto& out, auto& err) { return cli::cmdMetric(w, b, o, out, err); });
}
Run nijenhuis(const std::string& w, const std::string& f, Options o = quiet()) {
  return run([&](auto& out, auto& err) { return cli::cmdNijenhuis(w, f, o, out, err); });
}

/// Per-row maps from header name to value.
std::vector<std::map<std::string, double>> parseCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::istringstream h(line);
    std::string cell;
    while (std::getline(h, cell, ',')) header.push_back(cell);
  }
  std::vector<std::map<std::string, double>> rows;
  while (std::getline(in, line)) {
    std::istringstream l(line);
    std::string cell;
    std::map<std::string, double> row;
    for (std::size_t i = 0; std::getline(l, cell, ','); ++i) row[header.at(i)] = std::stod(cell);
    EXPECT_EQ(row.size(), header.size());
    rows.push_back(row);
  }
  return rows;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("brane_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST(CliVerify, TorusExampleFilesPassExactly) {
  auto r = verify(fixture("omega0.json"), fixture("F0.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["settings"]["arithmetic"], "rational");
  for (const char* k : {"sb1_resid", "sb2_resid", "sb3_resid", "i_square_resid"}) EXPECT_EQ(j["sb"][k], 0.0) << k;
  EXPECT_EQ(j["hs"]["hs2_resid"], 0.0);
  EXPECT_EQ(j["hs"]["hs1_min"], 4.0);
  EXPECT_TRUE(j["sb_hs_agree"].get<bool>());
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_FALSE(j.contains("timestamp"));
}

TEST(CliVerify, KahlerFormIsABrane) {
  EXPECT_EQ(verify(fixture("omega0.json"), fixture("kappa.json")).code, 0);
}

TEST(CliVerify, RotationFamilyFailsOnClosedness) {
  auto r = verify(fixture("omega0.json"), fixture("rotation_k1000.json"));
  ASSERT_EQ(r.code, 1) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["settings"]["arithmetic"], "double");
  EXPECT_GT(j["sb"]["sb3_resid"].get<double>(), 0.0);
  EXPECT_LE(j["sb"]["sb1_resid"].get<double>(), 1e-9);
  EXPECT_LE(j["sb"]["sb2_resid"].get<double>(), 1e-9);
  EXPECT_FALSE(j["hs"]["hs3"].get<bool>());
  EXPECT_TRUE(j["sb_hs_agree"].get<bool>());
  EXPECT_FALSE(j["pass"].get<bool>());
}

TEST(CliVerify, OmegaAsItsOwnPartnerFails) {
  EXPECT_EQ(verify(fixture("omega0.json"), fixture("omega0.json")).code, 1);
}

TEST(CliVerify, TimestampIsOptional) {
  Options o;
  auto j = verify(fixture("omega0.json"), fixture("F0.json"), o).json();
  ASSERT_TRUE(j.contains("timestamp"));
  EXPECT_EQ(j["timestamp"].get<std::string>().size(), 20u);
}

TEST_F(TempDir, MalformedInputsExitWithTwo) {
  const std::string cases[] = {
      "{not json",
      R"({"kind":"constant2","coeffs":{}})",
      R"({"version":2,"kind":"constant2","coeffs":{}})",
      R"({"version":1,"kind":"constant3","coeffs":{}})",
      R"({"version":1,"kind":"constant2","coeffs":{"12":"one"}})",
      R"({"version":1,"kind":"constant2","coeffs":{"21":1}})",
      R"({"version":1,"kind":"constant2","coeffs":{"12":1},"extra":0})",
      R"({"version":1,"kind":"trigpoly2","coeffs":{"12":[{"k":[1,0,0],"cos":1}]}})",
      R"({"version":1,"kind":"trigpoly2","coeffs":{"12":[{"k":[1.5,0,0,0],"cos":1}]}})",
      R"({"version":1,"kind":"trigpoly2","coeffs":{"12":5}})",
      R"({"version":1,"kind":"class","space":"k4","coeffs":[]})",
      R"([1,2,3])",
  };
  int n = 0;
  for (const auto& text : cases) {
    auto bad = write("bad" + std::to_string(n++) + ".json", text);
    auto r = verify(fixture("omega0.json"), bad);
    EXPECT_EQ(r.code, 2) << text;
    EXPECT_TRUE(r.out.empty()) << text;
    EXPECT_FALSE(r.err.empty()) << text;
  }
  EXPECT_EQ(verify(path("missing.json"), fixture("F0.json")).code, 2);
}

TEST_F(TempDir, DegenerateOmegaExitsWithTwo) {
  auto zero = write("zero.json", R"({"version":1,"kind":"constant2","coeffs":{"12":1}})");
  EXPECT_EQ(verify(zero, fixture("F0.json")).code, 2);
  EXPECT_EQ(nijenhuis(zero, fixture("F0.json")).code, 2);
}

TEST_F(TempDir, NonConstantOmegaIsRejected) {
  EXPECT_EQ(verify(fixture("rotation_k1000.json"), fixture("F0.json")).code, 2);
}

TEST_F(TempDir, NoPartialWriteOnInputError) {
  Options o = quiet();
  o.out = path("report.json");
  auto r = verify(fixture("omega0.json"), write("bad.json", "{"), o);
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(fs::exists(o.out));
  EXPECT_FALSE(fs::exists(o.out + ".tmp"));

  std::ofstream(o.out) << "previous";
  r = quadric(fixture("omega0.json"), fixture("omega0.json"), o);
  EXPECT_EQ(r.code, 2);
  std::ifstream in(o.out);
  std::string kept((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(kept, "previous");
}

TEST_F(TempDir, OutWritesTheSameBytesAsStdout) {
  Options o = quiet();
  auto direct = verify(fixture("omega0.json"), fixture("F0.json"), o);
  o.out = path("report.json");
  auto r = verify(fixture("omega0.json"), fixture("F0.json"), o);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(o.out);
  std::string written((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(written, direct.out);
}

TEST(CliQuadric, HundredSamplesAllReconstruct) {
  Options o = quiet();
  o.samples = 100;
  o.seed = 7;
  auto r = quadric(fixture("omega0.json"), fixture("F0.json"), o);
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  ASSERT_EQ(j["samples"].size(), 100u);
  for (const auto& s : j["samples"]) {
    EXPECT_TRUE(s["pass"].get<bool>());
    EXPECT_EQ(s["ybar"].size(), 3u);
    EXPECT_EQ(s["class"].size(), 6u);
    EXPECT_EQ(s["form"].size(), 6u);
  }
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(CliQuadric, DeterministicForFixedSeed) {
  Options o = quiet();
  o.samples = 20;
  o.seed = 11;
  auto a = quadric(fixture("omega0.json"), fixture("F0.json"), o);
  auto b = quadric(fixture("omega0.json"), fixture("F0.json"), o);
  EXPECT_EQ(a.out, b.out);
  o.seed = 12;
  auto c = quadric(fixture("omega0.json"), fixture("F0.json"), o);
  EXPECT_NE(a.out, c.out);
}

TEST(CliQuadric, ZeroSamples) {
  Options o = quiet();
  o.samples = 0;
  auto r = quadric(fixture("omega0.json"), fixture("F0.json"), o);
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.json()["samples"].empty());
}

TEST(CliQuadric, NonBraneBaseIsAnInputError) {
  auto r = quadric(fixture("omega0.json"), fixture("omega0.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliQuadric, K3ClassFiles) {
  Options o = quiet();
  o.space = SpaceName::K3;
  o.samples = 10;
  auto r = quadric(fixture("k3_omega.json"), fixture("k3_base.json"), o);
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["chart"]["fiber_dim"], 19);
  for (const auto& s : j["samples"]) EXPECT_EQ(s["class"].size(), 22u);
  EXPECT_EQ(quadric(fixture("omega0.json"), fixture("F0.json"), o).code, 2);
  EXPECT_EQ(quadric(fixture("k3_omega.json"), fixture("k3_base.json")).code, 2);
}

TEST(CliMetric, BasePointRow) {
  auto r = metric(fixture("omega0.json"), fixture("F0.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = parseCsv(r.out);
  ASSERT_EQ(rows.size(), 1u);
  auto& row = rows[0];
  EXPECT_EQ(row["g_0_0"], 2.0);
  for (int i = 1; i <= 3; ++i) EXPECT_EQ(row["g_" + std::to_string(i) + "_" + std::to_string(i)], -2.0);
  EXPECT_EQ(row["g_0_1"], 0.0);
  EXPECT_EQ(row["g_1_2"], 0.0);
  EXPECT_EQ(row["sig_pos"], 1);
  EXPECT_EQ(row["sig_neg"], 3);
}

TEST(CliMetric, ErratumColumnAtUnitRadius) {
  Options o = quiet();
  o.theta = 0.0;
  o.ybar = {1, 0, 0};
  auto rows = parseCsv(metric(fixture("omega0.json"), fixture("F0.json"), o).out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0]["rho_pushforward"], 4.0, 1e-14);
  EXPECT_NEAR(rows[0]["rho_closed_form"], 4.0, 1e-14);
  EXPECT_NEAR(rows[0]["rho_ratio"], std::sqrt(2.0), 1e-14);
}

TEST(CliMetric, SweepIsLorentzianAndDeterministic) {
  Options o = quiet();
  o.sweep = 50;
  o.seed = 3;
  auto r = metric(fixture("omega0.json"), fixture("F0.json"), o);
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = parseCsv(r.out);
  ASSERT_EQ(rows.size(), 50u);
  for (auto& row : rows) {
    EXPECT_EQ(row["sig_pos"], 1);
    EXPECT_EQ(row["sig_neg"], 3);
    EXPECT_LE(row["offdiag_max"], 1e-12);
    EXPECT_LE(row["gamma_resid"], 1e-10);
  }
  EXPECT_EQ(metric(fixture("omega0.json"), fixture("F0.json"), o).out, r.out);
}

TEST(CliMetric, K3Signatures) {
  Options o = quiet();
  o.space = SpaceName::K3;
  o.sweep = 5;
  auto r = metric(fixture("k3_omega.json"), fixture("k3_base.json"), o);
  ASSERT_EQ(r.code, 0) << r.err;
  for (auto& row : parseCsv(r.out)) {
    EXPECT_EQ(row["sig_pos"], 1);
    EXPECT_EQ(row["sig_neg"], 19);
  }
}

TEST(CliMetric, WrongFiberLengthIsAnInputError) {
  Options o = quiet();
  o.ybar = {1, 2};
  auto r = metric(fixture("omega0.json"), fixture("F0.json"), o);
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliNijenhuis, ConstantBraneIsIntegrable) {
  auto r = nijenhuis(fixture("omega0.json"), fixture("F0.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_LE(j["max_defect"].get<double>(), 1e-8);
  EXPECT_EQ(j["max_dF"].get<double>(), 0.0);
  EXPECT_TRUE(j["consistent"].get<bool>());
  EXPECT_TRUE(j["integrable"].get<bool>());
}

TEST(CliNijenhuis, RotationFamilyIsNeither) {
  Options o = quiet();
  o.h = 1e-4;
  auto r = nijenhuis(fixture("omega0.json"), fixture("rotation_k1000.json"), o);
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_GT(j["max_defect"].get<double>(), 1e-2);
  EXPECT_GT(j["max_dF"].get<double>(), 1e-2);
  EXPECT_FALSE(j["integrable"].get<bool>());
  EXPECT_FALSE(j["closed"].get<bool>());
  EXPECT_TRUE(j["consistent"].get<bool>());
  EXPECT_LE(j["identity"]["residual"].get<double>(), 1e-6);
  EXPECT_NEAR(j["identity"]["ratio"].get<double>(), 4.0, 0.5);
  EXPECT_EQ(j["grid_points"], 4096);
}

TEST_F(TempDir, NijenhuisRejectsNonBraneFamilies) {
  auto twice = write("twice.json", R"({"version":1,"kind":"constant2","coeffs":{"13":2,"24":-2}})");
  auto r = nijenhuis(fixture("omega0.json"), twice);
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliExampleTorus, ReportsErrataWithoutFailing) {
  auto r = run([](auto& out, auto& err) { return cli::cmdExampleTorus(quiet(), out, err); });
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_TRUE(j["complex_structure"]["equals_J_plus_J"].get<bool>());
  EXPECT_EQ(j["signatures"]["t4"], Json::array({3, 3}));
  EXPECT_EQ(j["signatures"]["k3"], Json::array({3, 19}));
  EXPECT_EQ(j["deformation"]["normal_form_squares"], Json::array({1, 1, -1, -1, -1}));
  ASSERT_EQ(j["discrepancies"].size(), 2u);
  EXPECT_NEAR(j["discrepancies"][0]["ratio"].get<double>(), std::sqrt(2.0), 1e-14);
  EXPECT_EQ(j["discrepancies"][1]["wedge_derived"], 0.0);
  EXPECT_EQ(j["discrepancies"][1]["alternative"], -6.0);
}

TEST(FormFiles, SerializationRoundTrip) {
  auto in = io::readInput(fixture("rotation_k1000.json"));
  auto again = io::parseInput(io::formJson(in.field), "roundtrip");
  for (std::size_t s = 0; s < 6; ++s) EXPECT_EQ(again.field.c[s].modes(), in.field.c[s].modes());

  auto f0 = io::readInput(fixture("F0.json"));
  auto constant = io::parseInput(io::formJson(io::constantForm(f0)), "roundtrip");
  EXPECT_EQ(io::constantForm(constant), io::constantForm(f0));

  auto k3 = io::readInput(fixture("k3_base.json"));
  auto cls = io::cohomologyClass(k3, k3Space<double>());
  auto back = io::parseInput(io::classJson(cls), "roundtrip");
  EXPECT_EQ(back.classCoeffs, k3.classCoeffs);
}
