#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pdm/fit.hpp"
#include "pdm_tools/config.hpp"

namespace pdm::tools {

/// One results.csv line: a point (x, y) of a named series.
struct Row {
  std::string series;
  double s = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct SeriesFit {
  std::string series;
  LineFit fit;
};

/// measured must lie in [lo, hi].
struct Assertion {
  std::string name;
  double measured = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool passed = false;
};

struct JobResult {
  std::string name;
  bool completed = false;
  std::string error;
  double seconds = 0.0;
  std::vector<Row> rows;
  std::vector<SeriesFit> fits;
  std::vector<Assertion> assertions;

  void check(const std::string& what, double measured, double lo, double hi);
  bool passed() const;
};

struct Job {
  std::string name;
  std::function<void(JobResult&)> body;
};

/// The independent jobs of a validated config, in output order.
std::vector<Job> plan_jobs(const ExperimentConfig& config);

/// Runs jobs on `workers` threads. Results keep plan order, and a job that
/// throws is recorded as not completed while the others continue.
std::vector<JobResult> run_jobs(const std::vector<Job>& jobs, int workers);

}  // namespace pdm::tools
