#include "pdm_tools/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "pdm/catalog.hpp"

namespace pdm::tools {

namespace {

struct RawValue {
  std::vector<std::string> items;
  bool array = false;
  int line = 0;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a trailing '#' comment that is not inside quotes.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

std::string unquote(const std::string& field, const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  if (s.find('"') != std::string::npos) throw ConfigError(field, "unbalanced quotes in '" + s + "'");
  return s;
}

std::vector<std::string> split_items(const std::string& field, const std::string& body) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : body) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ConfigError(field, "unterminated string");
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  for (auto& item : out) {
    if (item.empty()) throw ConfigError(field, "empty array element");
    item = unquote(field, item);
  }
  return out;
}

std::map<std::string, RawValue> tokenize(const std::string& text) {
  std::map<std::string, RawValue> out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "missing key");
    if (out.count(key)) throw ConfigError(key, "given twice");
    RawValue raw;
    raw.line = lineno;
    if (!value.empty() && value.front() == '[') {
      // Arrays may span lines until the closing bracket.
      while (value.find(']') == std::string::npos) {
        std::string more;
        if (!std::getline(is, more)) throw ConfigError(key, "unterminated array");
        ++lineno;
        value += " " + trim(strip_comment(more));
      }
      if (value.back() != ']') throw ConfigError(key, "trailing text after array");
      raw.array = true;
      raw.items = split_items(key, value.substr(1, value.size() - 2));
    } else {
      if (value.empty()) throw ConfigError(key, "missing value");
      raw.items = {unquote(key, value)};
    }
    out.emplace(key, std::move(raw));
  }
  return out;
}

double to_double(const std::string& field, const std::string& s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError(field, "'" + s + "' is not a finite number");
  return v;
}

long long to_int(const std::string& field, const std::string& s) {
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(field, "'" + s + "' is not an integer");
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T, class F>
std::string list(const std::vector<T>& xs, F&& f) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + f(xs[i]);
  return out + "]";
}

std::vector<double> default_taus() {
  std::vector<double> t;
  for (int j = 0; j <= 6; ++j) t.push_back(0.1 * std::pow(0.5, j));
  return t;
}

std::vector<double> default_sigmas() {
  std::vector<double> g;
  for (int i = 0; i <= 12; ++i) g.push_back(0.25 * i);
  return g;
}

void apply_defaults(ExperimentConfig& c) {
  c.K_list = {32, 64, 128};
  c.M_list = {16, 32, 64};
  c.tau_list = default_taus();
  c.s_list = {1.0, 2.0};
  c.sigma_grid = default_sigmas();
  const std::string& e = c.experiment;
  if (e == "order_gain") {
    c.K_list = {16, 32, 64, 128};
    c.probes = {"abs:2", "cos:1"};
  } else if (e == "approx_rates") {
    c.K_list = {16, 32, 64, 128};
    c.M_list = {128};
    c.s_list = {3.0};
    c.probes = {"cos:1"};
  } else if (e == "splitting_orders") {
    c.M_list = {64};
    c.s_list = {0.0, 1.0, 2.0};
    c.probes = {"abs:2", "cos:1"};
  } else if (e == "loss_scan") {
    c.s_list = {1.0};
    c.probes = {"cos:1", "cos:0.2"};
  } else if (e == "waterwave") {
    c.s_list = {1.0, 2.0, 3.0};
    c.probes = {"cos:0.2", "rough:1:8"};
  } else if (e == "schroedinger_precond") {
    c.s_list = {0.0, 1.0, 2.0};
    c.probes = {"cos:1"};
  } else if (e == "sobolev_growth") {
    c.probes = {"order0", "order_minus1"};
  } else if (e == "invariants_suite") {
    c.K_list = {4, 8, 16, 32};
    c.s_list = {1.0};
    c.probes = {"exp_decay:1"};
  }
}

template <class T>
void require_nonempty(const char* field, const std::vector<T>& xs) {
  if (xs.empty()) throw ConfigError(field, "must be nonempty");
}

void require_positive(const char* field, double v) {
  if (!(v > 0.0)) throw ConfigError(field, "must be positive");
}

void check_probes(const ExperimentConfig& c) {
  const std::string& e = c.experiment;
  auto need = [&](std::size_t n, const char* what) {
    if (c.probes.size() != n) throw ConfigError("probes", std::string("expected ") + what);
  };
  try {
    if (e == "order_gain" || e == "splitting_orders") {
      need(2, "[symbol, potential]");
      const Symbol a = catalog::symbol_by_name(c.probes[0]);
      const Potential v = catalog::potential_by_name(c.probes[1]);
      if (e == "splitting_orders") {
        if (!v.real) throw ConfigError("probes", "the potential must be real so that B is Hermitian");
        // B has order 0; the local error theorem needs it strictly below A.
        if (!(a.declared_order > 0.0))
          throw ConfigError("probes", "order of B (0) must be strictly below the order of A (" + fmt(a.declared_order) + ")");
      }
    } else if (e == "loss_scan") {
      need(2, "[schroedinger potential, water-wave bottom]");
      for (const auto& p : c.probes) catalog::potential_by_name(p);
    } else if (e == "sobolev_growth") {
      static const std::set<std::string> known{"order0", "order_minus1", "free"};
      for (const auto& p : c.probes)
        if (!known.count(p)) throw ConfigError("probes", "unknown growth probe '" + p + "' (order0, order_minus1, free)");
    } else {
      for (const auto& p : c.probes) catalog::potential_by_name(p);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError("probes", ex.what());
  }
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"order_gain", "approx_rates", "splitting_orders", "loss_scan",
                                              "waterwave",  "schroedinger_precond", "sobolev_growth", "invariants_suite"};
  return names;
}

void validate(const ExperimentConfig& c) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), c.experiment) == names.end())
    throw ConfigError("experiment", "unknown experiment '" + c.experiment + "'");
  require_nonempty("K_list", c.K_list);
  require_nonempty("M_list", c.M_list);
  require_nonempty("tau_list", c.tau_list);
  require_nonempty("s_list", c.s_list);
  require_nonempty("sigma_grid", c.sigma_grid);
  require_nonempty("probes", c.probes);
  for (int K : c.K_list)
    if (K < 4 || K % 2) throw ConfigError("K_list", "periods must be even and >= 4, got " + std::to_string(K));
  for (int M : c.M_list)
    if (M < 4) throw ConfigError("M_list", "radii must be >= 4, got " + std::to_string(M));
  if (!std::is_sorted(c.K_list.begin(), c.K_list.end()) ||
      std::adjacent_find(c.K_list.begin(), c.K_list.end()) != c.K_list.end())
    throw ConfigError("K_list", "must be strictly increasing");
  if (!std::is_sorted(c.M_list.begin(), c.M_list.end()) ||
      std::adjacent_find(c.M_list.begin(), c.M_list.end()) != c.M_list.end())
    throw ConfigError("M_list", "must be strictly increasing");
  for (double t : c.tau_list) require_positive("tau_list", t);
  for (double s : c.sigma_grid)
    if (s < 0.0) throw ConfigError("sigma_grid", "entries must be nonnegative");
  if (!std::is_sorted(c.sigma_grid.begin(), c.sigma_grid.end())) throw ConfigError("sigma_grid", "must be increasing");
  require_positive("algebra_tol", c.tol.algebra_tol);
  require_positive("unitary_tol", c.tol.unitary_tol);
  require_positive("fit_band", c.tol.fit_band);
  require_positive("growth_exponent", c.tol.growth_exponent);
  require_positive("alias_tol", c.tol.alias_tol);
  require_positive("drift_tol", c.tol.drift_tol);
  require_positive("spread_factor", c.tol.spread_factor);
  require_positive("growth_slack", c.tol.growth_slack);
  require_positive("tau_star", c.tau_star);
  require_positive("data_sigma", c.data_sigma);
  require_positive("T", c.T);
  require_positive("delta", c.delta);
  if (c.mu < 0.0) throw ConfigError("mu", "must be nonnegative");
  if (c.samples < 1) throw ConfigError("samples", "must be >= 1");
  if (c.experiment == "approx_rates" && c.M_list.back() < c.K_list.back() / 2)
    throw ConfigError("M_list", "the limit radius must cover K/2 for the largest K");
  if ((c.experiment == "loss_scan" || c.experiment == "schroedinger_precond") && c.M_list.size() < 2)
    throw ConfigError("M_list", "loss estimation needs at least two refinement levels");
  if ((c.experiment == "loss_scan" || c.experiment == "waterwave") && c.K_list.size() < 2)
    throw ConfigError("K_list", "loss estimation needs at least two refinement levels");
  check_probes(c);
}

ExperimentConfig parse_config(const std::string& text) {
  auto raw = tokenize(text);
  ExperimentConfig c;
  const auto exp = raw.find("experiment");
  if (exp == raw.end()) throw ConfigError("experiment", "missing");
  if (exp->second.array) throw ConfigError("experiment", "must be a single name");
  c.experiment = exp->second.items[0];
  apply_defaults(c);
  raw.erase(exp);

  using Setter = std::function<void(const std::string&, const RawValue&)>;
  auto scalar = [](const std::string& key, const RawValue& r) -> const std::string& {
    if (r.array) throw ConfigError(key, "expected a scalar, got an array");
    return r.items[0];
  };
  auto dbl = [&](double& out) -> Setter {
    return [&out, scalar](const std::string& k, const RawValue& r) { out = to_double(k, scalar(k, r)); };
  };
  auto dlist = [](std::vector<double>& out) -> Setter {
    return [&out](const std::string& k, const RawValue& r) {
      if (!r.array) throw ConfigError(k, "expected an array [..]");
      out.clear();
      for (const auto& s : r.items) out.push_back(to_double(k, s));
    };
  };
  auto ilist = [](std::vector<int>& out) -> Setter {
    return [&out](const std::string& k, const RawValue& r) {
      if (!r.array) throw ConfigError(k, "expected an array [..]");
      out.clear();
      for (const auto& s : r.items) out.push_back(static_cast<int>(to_int(k, s)));
    };
  };
  const std::map<std::string, Setter> setters{
      {"seed",
       [&](const std::string& k, const RawValue& r) {
         const long long v = to_int(k, scalar(k, r));
         if (v < 0) throw ConfigError(k, "must be nonnegative");
         c.seed = static_cast<std::uint64_t>(v);
       }},
      {"K_list", ilist(c.K_list)},
      {"M_list", ilist(c.M_list)},
      {"tau_list", dlist(c.tau_list)},
      {"s_list", dlist(c.s_list)},
      {"sigma_grid", dlist(c.sigma_grid)},
      {"probes",
       [&](const std::string& k, const RawValue& r) {
         if (!r.array) throw ConfigError(k, "expected an array [..]");
         c.probes = r.items;
       }},
      {"algebra_tol", dbl(c.tol.algebra_tol)},
      {"unitary_tol", dbl(c.tol.unitary_tol)},
      {"fit_band", dbl(c.tol.fit_band)},
      {"growth_exponent", dbl(c.tol.growth_exponent)},
      {"alias_tol", dbl(c.tol.alias_tol)},
      {"drift_tol", dbl(c.tol.drift_tol)},
      {"spread_factor", dbl(c.tol.spread_factor)},
      {"growth_slack", dbl(c.tol.growth_slack)},
      {"tau_star", dbl(c.tau_star)},
      {"mu", dbl(c.mu)},
      {"data_sigma", dbl(c.data_sigma)},
      {"T", dbl(c.T)},
      {"delta", dbl(c.delta)},
      {"samples", [&](const std::string& k, const RawValue& r) { c.samples = static_cast<int>(to_int(k, scalar(k, r))); }},
      {"output_dir", [&](const std::string& k, const RawValue& r) { c.output_dir = scalar(k, r); }},
  };
  for (const auto& [key, value] : raw) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(key, "unknown key");
    it->second(key, value);
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("path", "cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::map<std::string, std::string> ExperimentConfig::materialize() const {
  auto i2s = [](int v) { return std::to_string(v); };
  auto str = [](const std::string& s) { return "\"" + s + "\""; };
  return {
      {"experiment", experiment},
      {"seed", std::to_string(seed)},
      {"K_list", list(K_list, i2s)},
      {"M_list", list(M_list, i2s)},
      {"tau_list", list(tau_list, fmt)},
      {"s_list", list(s_list, fmt)},
      {"sigma_grid", list(sigma_grid, fmt)},
      {"probes", list(probes, str)},
      {"algebra_tol", fmt(tol.algebra_tol)},
      {"unitary_tol", fmt(tol.unitary_tol)},
      {"fit_band", fmt(tol.fit_band)},
      {"growth_exponent", fmt(tol.growth_exponent)},
      {"alias_tol", fmt(tol.alias_tol)},
      {"drift_tol", fmt(tol.drift_tol)},
      {"spread_factor", fmt(tol.spread_factor)},
      {"growth_slack", fmt(tol.growth_slack)},
      {"tau_star", fmt(tau_star)},
      {"mu", fmt(mu)},
      {"samples", std::to_string(samples)},
      {"data_sigma", fmt(data_sigma)},
      {"T", fmt(T)},
      {"delta", fmt(delta)},
      {"output_dir", output_dir},
  };
}

}  // namespace pdm::tools
