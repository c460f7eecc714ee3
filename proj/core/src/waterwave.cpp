#include "pdm/waterwave.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pdm/catalog.hpp"

namespace pdm {

namespace {

Eigen::Index ei(std::size_t p) { return static_cast<Eigen::Index>(p); }

double omega_of(double mu, int k) { return catalog::waterwave_omega(mu).eval({static_cast<double>(k), 0.0}).real(); }
double g_of(double mu, int k) { return catalog::waterwave_G(mu).eval({static_cast<double>(k), 0.0}).real(); }

}  // namespace

cplx waterwave_coupling_entry(const WaterWaveModel& model, int n, int m) {
  if (n == 0 || m == 0) return {};
  const double wn = g_of(model.mu, n) / std::sqrt(omega_of(model.mu, n));
  const double wm = g_of(model.mu, m) / std::sqrt(omega_of(model.mu, m));
  return wn * model.bottom.coeff({n - m, 0}) * wm * cplx{0.0, static_cast<double>(n)} * cplx{0.0, static_cast<double>(m)};
}

WaterWaveSystem waterwave_assemble(const WaterWaveModel& model, int K) {
  if (!(model.mu >= 0.0)) throw Error("waterwave_assemble: mu must be nonnegative");
  if (!model.bottom.coeff) throw Error("waterwave_assemble: missing bottom coefficients");
  if (!model.bottom.real) throw Error("waterwave_assemble: the bottom b must be real");
  const IndexBlock blk = IndexBlock::periodic(1, K);
  const auto n = ei(blk.size());

  Eigen::VectorXd omega(n), g(n), base(2 * n);
  // Weighted Fourier multipliers G Omega^{-1/2} (i k); zero at k = 0.
  Eigen::VectorXcd w(n);
  std::vector<int> rep(blk.size());
  for (std::size_t p = 0; p < blk.size(); ++p) {
    const int k = blk.representative(blk.index(p))[0];
    rep[p] = k;
    omega(ei(p)) = omega_of(model.mu, k);
    g(ei(p)) = g_of(model.mu, k);
    base(ei(p)) = base(n + ei(p)) = k == 0 ? 0.0 : 1.0 + std::abs(k);
    w(ei(p)) = k == 0 ? cplx{} : g(ei(p)) / std::sqrt(omega(ei(p))) * cplx{0.0, static_cast<double>(k)};
  }

  Eigen::MatrixXcd coupling(n, n);
  for (Eigen::Index q = 0; q < n; ++q)
    for (Eigen::Index p = 0; p < n; ++p)
      coupling(p, q) = w(p) * model.bottom.coeff({rep[static_cast<std::size_t>(p)] - rep[static_cast<std::size_t>(q)], 0}) * w(q);
  if (!all_finite(coupling)) throw NumericalError("waterwave_assemble: coupling is not finite");
  // Exact Hermitian symmetrization removes roundoff asymmetry.
  coupling = 0.5 * (coupling + coupling.adjoint()).eval();

  const Eigen::VectorXcd om = omega.cast<cplx>();
  StructureHints herm;
  herm.hermitian = true;
  OpMatrix zero = OpMatrix::zero(blk);
  OpMatrix om_mat = OpMatrix::diagonal(blk, om);
  OpMatrix coup(blk, coupling, herm);
  SymplecticBlock s1(zero, om_mat, -1.0 * om_mat);
  SymplecticBlock s2(zero, coup, zero);
  return WaterWaveSystem{blk, omega, g, coup, s1, s2, base};
}

double WaterWaveSystem::energy(const Eigen::VectorXcd& x) const {
  const Eigen::MatrixXcd s = S1() + S2();
  const Eigen::MatrixXcd h = -(canonical_J(s.rows() / 2) * s);
  return 0.5 * (x.adjoint() * h * x)(0, 0).real();
}

Eigen::VectorXcd waterwave_data(const WaterWaveSystem& sys, double s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> theta(0.0, 2.0 * std::numbers::pi);
  Eigen::VectorXcd x(sys.base.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    x(i) = sys.base(i) > 0.0 ? std::polar(std::pow(sys.base(i), -s - 0.51), theta(rng)) : cplx{};
  return x;
}

WaterWaveStudy waterwave_noloss_study(const WaterWaveModel& model, const WaterWaveStudyOptions& options) {
  if (options.K_list.size() < 2) throw Error("waterwave_noloss_study: need at least two K values");
  if (options.taus.empty()) throw Error("waterwave_noloss_study: empty tau list");
  if (options.s_list.empty()) throw Error("waterwave_noloss_study: empty s list");

  std::vector<WaterWaveSystem> systems;
  std::vector<LossLevel> lie_levels, strang_levels;
  for (int K : options.K_list) {
    systems.push_back(waterwave_assemble(model, K));
    const auto& sys = systems.back();
    Flow f1 = sys.flow_s1(), f2 = sys.flow_s2(), fx = sys.flow_exact();
    lie_levels.push_back({K, f1, f2, fx, sys.base});
    strang_levels.push_back({K, f2, f1, fx, sys.base});
  }

  WaterWaveStudy out;
  const auto& fine = systems.back();
  const auto& lie_fine = lie_levels.back();
  const auto& strang_fine = strang_levels.back();
  const SplitScheme lie = SplitScheme::lie();
  const SplitScheme strang = SplitScheme::strang();

  for (double s : options.s_list) {
    std::vector<Eigen::VectorXcd> data;
    for (int i = 0; i < options.samples; ++i) data.push_back(waterwave_data(fine, s, options.seed + static_cast<std::uint64_t>(i)));
    out.lie.push_back(local_error(lie, lie_fine.a, lie_fine.b, lie_fine.exact, options.taus, s, data, fine.base));
    out.strang.push_back(local_error(strang, strang_fine.a, strang_fine.b, strang_fine.exact, options.taus, s, data, fine.base));
    out.lie_loss.push_back(loss_estimator(lie, lie_levels, s, options.sigmas, options.loss));
    out.strang_loss.push_back(loss_estimator(strang, strang_levels, s, options.sigmas, options.loss));
  }

  const Eigen::VectorXcd x = waterwave_data(fine, 1.0, options.seed);
  const double h0 = fine.energy(x);
  for (double tau : options.taus) {
    const Eigen::MatrixXcd pl = split_step(lie, lie_fine.a, lie_fine.b, tau);
    const Eigen::MatrixXcd ps = split_step(strang, strang_fine.a, strang_fine.b, tau);
    out.symplectic_defect = std::max({out.symplectic_defect, symplectic_defect(pl), symplectic_defect(ps)});
    out.energy_drift = std::max(out.energy_drift, std::abs(fine.energy(ps * x) - h0) / std::abs(h0));
  }
  return out;
}

}  // namespace pdm
