#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pdm_tools/artifacts.hpp"
#include "pdm_tools/config.hpp"
#include "pdm_tools/experiments.hpp"

namespace pdm::tools {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pdm_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

TEST(Config, DefaultsAreMaterialized) {
  const ExperimentConfig c = parse_config("experiment = splitting_orders\n");
  EXPECT_EQ(c.M_list, std::vector<int>{64});
  ASSERT_EQ(c.tau_list.size(), 7u);
  EXPECT_DOUBLE_EQ(c.tau_list.back(), 0.1 / 64);
  const auto m = c.materialize();
  for (const char* key : {"seed", "tau_list", "sigma_grid", "fit_band", "growth_exponent", "tau_star", "probes"})
    EXPECT_TRUE(m.count(key)) << key;
  EXPECT_EQ(m.at("probes"), "[\"abs:2\", \"cos:1\"]");
}

TEST(Config, ParsesArraysCommentsAndStrings) {
  const ExperimentConfig c = parse_config(
      "# comment\n"
      "experiment = \"order_gain\"\n"
      "M_list = [8, 16,\n  32]   # trailing\n"
      "probes = [\"abs:2\", cos:0.5]\n"
      "seed = 7\n"
      "fit_band = 0.5\n");
  EXPECT_EQ(c.M_list, (std::vector<int>{8, 16, 32}));
  EXPECT_EQ(c.probes, (std::vector<std::string>{"abs:2", "cos:0.5"}));
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.tol.fit_band, 0.5);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(field_of("experiment = splitting_orders\ntau_list = []\n"), "tau_list");
  EXPECT_EQ(field_of("tau_list = [0.1]\n"), "experiment");
  EXPECT_EQ(field_of("experiment = nope\n"), "experiment");
  EXPECT_EQ(field_of("experiment = waterwave\nK_list = [32, 33]\n"), "K_list");
  EXPECT_EQ(field_of("experiment = waterwave\nK_list = [64, 32]\n"), "K_list");
  EXPECT_EQ(field_of("experiment = waterwave\nfit_band = 0\n"), "fit_band");
  EXPECT_EQ(field_of("experiment = waterwave\nfit_band = abc\n"), "fit_band");
  EXPECT_EQ(field_of("experiment = waterwave\nsamples = 0\n"), "samples");
  EXPECT_EQ(field_of("experiment = waterwave\nbogus = 1\n"), "bogus");
  EXPECT_EQ(field_of("experiment = waterwave\nseed = 1\nseed = 2\n"), "seed");
  EXPECT_EQ(field_of("experiment = waterwave\nprobes = [nosuch]\n"), "probes");
  EXPECT_EQ(field_of("experiment = waterwave\ntau_list = 0.1\n"), "tau_list");
  EXPECT_EQ(field_of("experiment = waterwave\ntau_list = [0.1, -1]\n"), "tau_list");
  EXPECT_EQ(field_of("experiment = sobolev_growth\nprobes = [order2]\n"), "probes");
  EXPECT_EQ(field_of("experiment = loss_scan\nM_list = [16]\n"), "M_list");
}

TEST(Config, SplittingRejectsEqualOrders) {
  // B has order 0: an order-0 A is the unsupported equality case.
  EXPECT_EQ(field_of("experiment = splitting_orders\nprobes = [one, cos:1]\n"), "probes");
  EXPECT_EQ(field_of("experiment = splitting_orders\nprobes = [abs:2, icos]\n"), "probes");
}

TEST(Run, OutputIndependentOfWorkersAndRepeatable) {
  const ExperimentConfig c = parse_config("experiment = invariants_suite\nseed = 1\n");
  const fs::path a = scratch("a"), b = scratch("b"), d = scratch("d");
  write_artifacts(a, c, run_jobs(plan_jobs(c), 1));
  write_artifacts(b, c, run_jobs(plan_jobs(c), 4));
  write_artifacts(d, c, run_jobs(plan_jobs(c), 1));
  const std::string ra = slurp(a / "results.csv");
  EXPECT_FALSE(ra.empty());
  EXPECT_EQ(ra, slurp(b / "results.csv"));
  EXPECT_EQ(ra, slurp(d / "results.csv"));
  EXPECT_EQ(slurp(a / "fits.json"), slurp(b / "fits.json"));
  EXPECT_EQ(ra.substr(0, ra.find('\n')), kResultsSchema);
  for (const auto& p : {a, b, d}) fs::remove_all(p);
}

TEST(Run, ManifestListsEveryFileWithHash) {
  const ExperimentConfig c = parse_config("experiment = approx_rates\n");
  const fs::path dir = scratch("manifest");
  const auto files = write_artifacts(dir, c, run_jobs(plan_jobs(c), 2));
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  std::set<std::string> listed;
  for (const auto& f : m.at("files")) {
    listed.insert(f.at("path").get<std::string>());
    EXPECT_EQ(f.at("sha256").get<std::string>(), sha256_hex(dir / f.at("path").get<std::string>()));
  }
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().filename() == "manifest.json") continue;
    EXPECT_TRUE(listed.count(fs::relative(entry.path(), dir).generic_string())) << entry.path();
  }
  EXPECT_GE(listed.size(), 4u);  // csv, json and at least two plot files
  EXPECT_EQ(m.at("config").at("fit_band"), "0.25");
  EXPECT_EQ(m.at("config").at("seed"), "1");
  fs::remove_all(dir);
}

TEST(Run, FailedJobDoesNotStopOthers) {
  std::vector<Job> jobs{{"boom", [](JobResult&) { throw std::runtime_error("numerical failure"); }},
                        {"fine", [](JobResult& r) { r.check("x", 1.0, 0.0, 2.0); }}};
  const auto res = run_jobs(jobs, 2);
  ASSERT_EQ(res.size(), 2u);
  EXPECT_FALSE(res[0].completed);
  EXPECT_EQ(res[0].error, "numerical failure");
  EXPECT_FALSE(res[0].passed());
  EXPECT_TRUE(res[1].passed());
}

TEST(Report, EmptyDirectoryIsAnError) {
  const fs::path dir = scratch("empty");
  fs::create_directories(dir);
  std::ostringstream os;
  EXPECT_THROW(report(dir, os), std::runtime_error);
  fs::remove_all(dir);
}

TEST(Report, TamperedFileIsCorrupt) {
  const ExperimentConfig c = parse_config("experiment = invariants_suite\n");
  const fs::path dir = scratch("tamper");
  write_artifacts(dir, c, run_jobs(plan_jobs(c), 1));
  std::ofstream(dir / "results.csv", std::ios::app) << "extra\n";
  std::ostringstream os;
  EXPECT_THROW(report(dir, os), std::runtime_error);
  std::ofstream(dir / "manifest.json") << "{ not json";
  EXPECT_THROW(report(dir, os), std::runtime_error);
  fs::remove_all(dir);
}

TEST(Report, PassingSuitePrintsPassLines) {
  const ExperimentConfig c = parse_config("experiment = order_gain\n");
  const fs::path dir = scratch("pass");
  write_artifacts(dir, c, run_jobs(plan_jobs(c), 2));
  std::ostringstream os;
  EXPECT_EQ(report(dir, os), 0);
  EXPECT_NE(os.str().find("PASS  truncated_product  order of AB  measured=2"), std::string::npos) << os.str();
  EXPECT_EQ(os.str().find("FAIL"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Report, NarrowFitBandFailsWithMeasuredSlope) {
  const ExperimentConfig ok = parse_config("experiment = splitting_orders\ns_list = [1]\n");
  const ExperimentConfig tight = parse_config("experiment = splitting_orders\ns_list = [1]\nfit_band = 0.001\n");
  const auto results = run_jobs(plan_jobs(ok), 2);
  std::map<std::string, double> slope;
  for (const auto& r : results) {
    ASSERT_TRUE(r.passed()) << r.name;
    slope[r.name] = r.fits.at(0).fit.slope;
  }
  // Measured exponents from the splitting theory: 2 for Lie and 3 for Strang.
  EXPECT_NEAR(slope.at("lie s=1"), 2.0, 0.25);
  EXPECT_NEAR(slope.at("strang s=1"), 3.0, 0.25);

  const fs::path dir = scratch("tight");
  const auto tight_results = run_jobs(plan_jobs(tight), 2);
  write_artifacts(dir, tight, tight_results);
  std::ostringstream os;
  EXPECT_EQ(report(dir, os), 1);
  const std::string text = os.str();
  EXPECT_NE(text.find("FAIL  "), std::string::npos);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", slope.at("strang s=1"));
  EXPECT_NE(text.find(std::string("measured=") + buf), std::string::npos) << text;
  fs::remove_all(dir);
}

}  // namespace
}  // namespace pdm::tools
