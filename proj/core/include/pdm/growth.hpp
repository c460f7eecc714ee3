#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pdm/fit.hpp"
#include "pdm/spectral.hpp"

namespace pdm {

/// x' = i A x + i B(t) x on Z_K with A = A_{Phi,K} diagonal and B(t) a
/// Hermitian family of order rho < 1, here separable:
/// B(t) = modulation(t) * coupling(K).
struct GrowthModel {
  std::string name;
  Symbol phi;
  double rho = 0.0;
  std::function<OpMatrix(int K)> coupling;
  std::function<double(double t)> modulation;

  OpMatrix b_of_t(double t, int K) const { return modulation(t) * coupling(K); }
};

/// Phi = |k|^2, B(t) = cos(t) M_{W,K}, W = 2 cos x.
GrowthModel growth_probe_order0();
/// Phi = |k|^2, B(t) = cos(t) <D>^{-1/2} M_{W,K} <D>^{-1/2}, W = 2 cos x.
GrowthModel growth_probe_order_minus1();
/// B = 0: the flow is an h^s isometry.
GrowthModel growth_probe_free();

struct GrowthSeries {
  double s = 0.0;
  std::vector<double> times;
  std::vector<double> norms;
  /// max_t ||x(t)||_s / (<t>^{s/(1-rho)} ||x(0)||_s).
  double ratio_max = 0.0;
  /// log-log fit of ||x(t)||_s against <t> over t >= 1.
  LineFit growth_fit;
};

struct GrowthRun {
  int K = 0;
  double horizon = 0.0;
  /// max_t |(||x(t)||_0 - ||x(0)||_0)| / (||x(0)||_0 max(t, 1)).
  double l2_drift_per_time = 0.0;
  /// Relative change of ||x(horizon)||_s (largest s) when delta is halved;
  /// negative when the check was skipped.
  double richardson = -1.0;
  std::vector<GrowthSeries> series;
};

struct GrowthOptions {
  std::vector<int> K_list{32, 64, 128};
  std::vector<double> s_list{1.0, 2.0};
  double T = 50.0;
  double delta = 1e-2;
  /// Record norms every `record_every` steps.
  int record_every = 10;
  double data_decay = 0.5;
  std::uint64_t seed = 1;
  bool richardson = true;
};

struct GrowthStudy {
  std::string model;
  double rho = 0.0;
  std::vector<GrowthRun> runs;
  /// Per s: max_K C_K / min_K C_K with C_K the ratio_max of run K.
  std::vector<double> constant_spread;
};

/// Horizon per K is min(T, K^{1 - rho}). Each step of length delta applies
/// the exact flow of A + B(t + delta/2), evaluated with chebyshev_expi.
GrowthStudy sobolev_growth_study(const GrowthModel& model, const GrowthOptions& options);

}  // namespace pdm
