#include "pdm_tools/artifacts.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#ifndef PDM_VERSION
#define PDM_VERSION "unknown"
#endif

namespace pdm::tools {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ? c : '_';
  return out;
}

std::string bound(double v) {
  if (v >= std::numeric_limits<double>::max()) return "inf";
  if (v <= -std::numeric_limits<double>::max()) return "-inf";
  return g17(v);
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

std::string results_csv(const ExperimentConfig& config, const std::vector<JobResult>& results) {
  std::ostringstream os;
  os << kResultsSchema << "\n" << kResultsHeader << "\n";
  for (const auto& r : results)
    for (const auto& row : r.rows)
      os << csv_field(config.experiment) << ',' << csv_field(r.name) << ',' << csv_field(row.series) << ',' << g17(row.s) << ','
         << g17(row.x) << ',' << g17(row.y) << "\n";
  return os.str();
}

json fits_json(const ExperimentConfig& config, const std::vector<JobResult>& results) {
  json jobs = json::array();
  for (const auto& r : results) {
    json fits = json::object();
    for (const auto& f : r.fits)
      fits[f.series] = {{"slope", number(f.fit.slope)},
                        {"intercept", number(f.fit.intercept)},
                        {"residual", number(f.fit.residual)},
                        {"points", f.fit.points}};
    json asserts = json::array();
    for (const auto& a : r.assertions)
      asserts.push_back({{"name", a.name}, {"measured", number(a.measured)}, {"lo", a.lo}, {"hi", a.hi}, {"passed", a.passed}});
    jobs.push_back({{"job", r.name}, {"completed", r.completed}, {"error", r.error}, {"fits", fits}, {"assertions", asserts}});
  }
  return {{"schema", "pdm-fits v1"}, {"experiment", config.experiment}, {"jobs", jobs}};
}

// One two-column file per fitted series: rows whose "series s=<s>" or
// "series" matches a fit name of the same job.
std::vector<std::pair<std::string, std::string>> plot_files(const std::vector<JobResult>& results) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& r : results) {
    for (const auto& f : r.fits) {
      std::ostringstream os;
      os << "# " << r.name << " / " << f.series << "\n# log-log: set logscale xy\n";
      int n = 0;
      for (const auto& row : r.rows) {
        char sbuf[32];
        std::snprintf(sbuf, sizeof sbuf, "%g", row.s);
        if (row.series != f.series && row.series + " s=" + sbuf != f.series) continue;
        if (!(row.x > 0.0) || !(row.y > 0.0)) continue;
        os << g17(row.x) << ' ' << g17(row.y) << "\n";
        ++n;
      }
      if (n >= 2) out.emplace_back(slug(r.name) + "__" + slug(f.series) + ".dat", os.str());
    }
  }
  return out;
}

}  // namespace

std::string results_columns_help() {
  return std::string(kResultsSchema) + "\n" + kResultsHeader +
         "\n"
         "  experiment  experiment name from the config\n"
         "  job         job within the experiment (e.g. 'lie s=1', 'bottom=cos:0.2')\n"
         "  series      measured quantity (e.g. local_error, 'lie sigma=1', 'norm K=64')\n"
         "  s           Sobolev index of the measurement (0 when not applicable)\n"
         "  x           abscissa: tau, K or M, time, or 0 for scalars\n"
         "  y           measured value";
}

std::string sha256_hex(const fs::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + file.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  char buf[1 << 16];
  while (is.read(buf, sizeof buf) || is.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(is.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::vector<fs::path> write_artifacts(const fs::path& dir, const ExperimentConfig& config, const std::vector<JobResult>& results) {
  fs::create_directories(dir / "plots");
  std::vector<std::string> written{"results.csv", "fits.json"};
  write_text(dir / "results.csv", results_csv(config, results));
  write_text(dir / "fits.json", fits_json(config, results).dump(2) + "\n");
  for (const auto& [name, text] : plot_files(results)) {
    write_text(dir / "plots" / name, text);
    written.push_back("plots/" + name);
  }

  json cfg = json::object();
  for (const auto& [k, v] : config.materialize()) cfg[k] = v;
  json jobs = json::array();
  for (const auto& r : results)
    jobs.push_back({{"name", r.name},
                    {"status", !r.completed ? "error" : r.passed() ? "passed" : "failed"},
                    {"error", r.error},
                    {"seconds", r.seconds}});
  json files = json::array();
  for (const auto& f : written)
    files.push_back({{"path", f}, {"sha256", sha256_hex(dir / f)}, {"bytes", fs::file_size(dir / f)}});
  const json manifest{{"schema", "pdm-manifest v1"}, {"code_version", PDM_VERSION}, {"experiment", config.experiment},
                      {"seed", config.seed},         {"config", cfg},                {"jobs", jobs},
                      {"files", files}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");

  std::vector<fs::path> out;
  for (const auto& f : written) out.push_back(dir / f);
  out.push_back(dir / "manifest.json");
  return out;
}

int report(const fs::path& dir, std::ostream& os) {
  const fs::path mpath = dir / "manifest.json";
  if (!fs::exists(mpath)) throw std::runtime_error("report: no manifest.json in " + dir.string());
  json manifest;
  try {
    std::ifstream is(mpath);
    manifest = json::parse(is);
    if (manifest.at("schema") != "pdm-manifest v1") throw std::runtime_error("unknown schema");
    for (const auto& f : manifest.at("files")) {
      const fs::path p = dir / f.at("path").get<std::string>();
      if (!fs::exists(p)) throw std::runtime_error("listed file missing: " + p.string());
      if (sha256_hex(p) != f.at("sha256").get<std::string>()) throw std::runtime_error("hash mismatch for " + p.string());
    }
  } catch (const std::exception& ex) {
    throw std::runtime_error(std::string("report: corrupt manifest: ") + ex.what());
  }

  json fits;
  {
    std::ifstream is(dir / "fits.json");
    fits = json::parse(is);
  }
  int failed = 0, total = 0;
  os << "experiment " << manifest.at("experiment").get<std::string>() << " (seed " << manifest.at("seed") << ")\n";
  for (const auto& job : fits.at("jobs")) {
    const std::string name = job.at("job");
    if (!job.at("completed").get<bool>()) {
      ++total;
      ++failed;
      os << "FAIL  " << name << "  job error: " << job.at("error").get<std::string>() << "\n";
      continue;
    }
    for (const auto& a : job.at("assertions")) {
      ++total;
      const bool ok = a.at("passed").get<bool>();
      failed += !ok;
      const auto& m = a.at("measured");
      os << (ok ? "PASS  " : "FAIL  ") << name << "  " << a.at("name").get<std::string>()
         << "  measured=" << (m.is_null() ? std::string("nan") : g17(m.get<double>())) << "  band=[" << bound(a.at("lo").get<double>())
         << ", " << bound(a.at("hi").get<double>()) << "]\n";
    }
  }
  os << (failed ? "FAIL" : "PASS") << "  " << (total - failed) << "/" << total << " assertions passed\n";
  return failed ? 1 : 0;
}

}  // namespace pdm::tools
