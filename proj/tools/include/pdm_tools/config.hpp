#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdm::tools {

/// Raised for malformed or invalid configs; field() names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

const std::vector<std::string>& experiment_names();

struct Tolerances {
  double algebra_tol = 1e-12;
  double unitary_tol = 1e-10;
  /// Half-width of the band a fitted exponent must fall in.
  double fit_band = 0.25;
  /// Per-refinement growth allowed before a seminorm or loss ratio counts as
  /// growing: value_{n+1} <= value_n (size ratio)^growth_exponent.
  double growth_exponent = 0.125;
  double alias_tol = 1e-10;
  double drift_tol = 1e-8;
  /// Allowed max/min spread of the growth constants across K.
  double spread_factor = 1.2;
  /// Slack added to the predicted growth exponent s/(1 - rho).
  double growth_slack = 0.1;
};

/// Flat key = value config. Grids left out of the file get the defaults of
/// the chosen experiment, and materialize() writes them all back.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::vector<int> K_list;
  std::vector<int> M_list;
  std::vector<double> tau_list;
  std::vector<double> s_list;
  std::vector<double> sigma_grid;
  std::vector<std::string> probes;
  Tolerances tol;
  double tau_star = 0.02;
  double mu = 1.0;
  int samples = 3;
  /// Regularity margin of rough local-error data (x in h^{s + data_sigma}).
  double data_sigma = 3.0;
  double T = 50.0;
  double delta = 1e-2;
  std::string output_dir;

  /// Ordered key -> value text, every field present.
  std::map<std::string, std::string> materialize() const;
};

/// Parses the text, applies experiment defaults and validates.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError naming the first bad field.
void validate(const ExperimentConfig& c);

}  // namespace pdm::tools
