#include "pdm/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdm/catalog.hpp"
#include "pdm/flows.hpp"
#include "pdm/operators.hpp"
#include "pdm/rough_data.hpp"

namespace pdm {

namespace {

double bracket_t(double t) { return std::sqrt(1.0 + t * t); }

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
};

Trajectory integrate(const GrowthModel& model, int K, const Eigen::VectorXcd& x0, double horizon, double delta, int record_every) {
  const SparseMatrixXcd a = spectral_multiplier(model.phi, K).entries().sparseView(1.0, 0.0);
  const OpMatrix coupling = model.coupling(K);
  if (!hermitian_check(coupling, 1e-12)) throw Error("sobolev_growth_study: coupling is not Hermitian");
  const SparseMatrixXcd b = coupling.entries().sparseView(1.0, 0.0);
  const int steps = static_cast<int>(std::ceil(horizon / delta - 1e-9));
  Trajectory tr;
  tr.times.push_back(0.0);
  tr.states.push_back(x0);
  Eigen::VectorXcd x = x0;
  for (int i = 0; i < steps; ++i) {
    const double t0 = i * delta;
    const double h = std::min(delta, horizon - t0);
    const SparseMatrixXcd gen = a + model.modulation(t0 + 0.5 * h) * b;
    x = chebyshev_expi(gen, h, x);
    if (!all_finite(x)) throw NumericalError("sobolev_growth_study: state became non-finite");
    if ((i + 1) % record_every == 0 || i + 1 == steps) {
      tr.times.push_back(t0 + h);
      tr.states.push_back(x);
    }
  }
  return tr;
}

OpMatrix smoothing_sandwich(const OpMatrix& m, int K) {
  const OpMatrix d = spectral_multiplier(catalog::japanese(-0.5), K);
  return matmul(matmul(d, m), d);
}

}  // namespace

GrowthModel growth_probe_order0() {
  GrowthModel g;
  g.name = "growth_rho0";
  g.phi = catalog::abs_power(2.0);
  g.rho = 0.0;
  g.coupling = [](int K) { return mult_matrix_fourier_alias(catalog::cos_potential(2.0), K); };
  g.modulation = [](double t) { return std::cos(t); };
  return g;
}

GrowthModel growth_probe_order_minus1() {
  GrowthModel g;
  g.name = "growth_rho-1";
  g.phi = catalog::abs_power(2.0);
  g.rho = -1.0;
  g.coupling = [](int K) { return smoothing_sandwich(mult_matrix_fourier_alias(catalog::cos_potential(2.0), K), K); };
  g.modulation = [](double t) { return std::cos(t); };
  return g;
}

GrowthModel growth_probe_free() {
  GrowthModel g;
  g.name = "growth_free";
  g.phi = catalog::abs_power(2.0);
  g.rho = 0.0;
  g.coupling = [](int K) { return OpMatrix::zero(IndexBlock::periodic(1, K)); };
  g.modulation = [](double) { return 0.0; };
  return g;
}

GrowthStudy sobolev_growth_study(const GrowthModel& model, const GrowthOptions& options) {
  if (!model.coupling || !model.modulation) throw Error("sobolev_growth_study: model has no B(t)");
  if (!(model.rho < 1.0)) throw Error("sobolev_growth_study: rho must be < 1");
  if (options.K_list.empty()) throw Error("sobolev_growth_study: empty K_list");
  if (options.s_list.empty()) throw Error("sobolev_growth_study: empty s_list");
  if (!(options.delta > 0.0) || !(options.T > 0.0)) throw Error("sobolev_growth_study: T and delta must be positive");
  if (options.record_every < 1) throw Error("sobolev_growth_study: record_every must be >= 1");

  GrowthStudy study;
  study.model = model.name;
  study.rho = model.rho;
  const double expo_scale = 1.0 / (1.0 - model.rho);

  for (int K : options.K_list) {
    const IndexBlock blk = IndexBlock::periodic(1, K);
    const NormBase base = norm_base(blk);
    const Eigen::VectorXcd x0 = smooth_data(blk, options.data_decay, options.seed);
    GrowthRun run;
    run.K = K;
    run.horizon = std::min(options.T, std::pow(static_cast<double>(K), 1.0 - model.rho));
    const Trajectory tr = integrate(model, K, x0, run.horizon, options.delta, options.record_every);

    const double l2_0 = x0.norm();
    for (std::size_t i = 0; i < tr.times.size(); ++i)
      run.l2_drift_per_time = std::max(run.l2_drift_per_time, std::abs(tr.states[i].norm() - l2_0) / (l2_0 * std::max(tr.times[i], 1.0)));

    for (double s : options.s_list) {
      GrowthSeries ser;
      ser.s = s;
      const double n0 = weighted_norm(x0, base, s);
      std::vector<double> ft, fn;
      for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double t = tr.times[i];
        const double ns = weighted_norm(tr.states[i], base, s);
        ser.times.push_back(t);
        ser.norms.push_back(ns);
        ser.ratio_max = std::max(ser.ratio_max, ns / (std::pow(bracket_t(t), s * expo_scale) * n0));
        if (t >= 1.0) {
          ft.push_back(bracket_t(t));
          fn.push_back(ns);
        }
      }
      ser.growth_fit = fit_loglog(ft, fn);
      run.series.push_back(std::move(ser));
    }

    if (options.richardson) {
      const Trajectory half = integrate(model, K, x0, run.horizon, 0.5 * options.delta, options.record_every);
      const double s = options.s_list.back();
      const double a = weighted_norm(tr.states.back(), base, s);
      const double b = weighted_norm(half.states.back(), base, s);
      run.richardson = std::abs(a - b) / std::max(b, 1e-300);
    }
    study.runs.push_back(std::move(run));
  }

  for (std::size_t j = 0; j < options.s_list.size(); ++j) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& r : study.runs) {
      lo = std::min(lo, r.series[j].ratio_max);
      hi = std::max(hi, r.series[j].ratio_max);
    }
    study.constant_spread.push_back(hi / lo);
  }
  return study;
}

}  // namespace pdm
