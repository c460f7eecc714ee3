#pragma once

#include <vector>

#include "pdm/flows.hpp"
#include "pdm/operators.hpp"

namespace pdm {

/// Linear water waves over a topography b(x), d = 1, in the symplectic
/// variables (xi, v) on the Fourier side.
struct WaterWaveModel {
  /// Shallowness; mu = 0 is the St-Venant limit (Omega = |k|, G = 1).
  double mu = 1.0;
  Potential bottom;
};

/// Generators on the periodic block Z_K, state (xi, v) of length 2K.
///
/// The zero mode is pinned: its rows and columns vanish in both generators
/// and it is excluded from every norm.
struct WaterWaveSystem {
  IndexBlock block;
  Eigen::VectorXd omega;
  Eigen::VectorXd g;
  /// G Omega^{-1/2} d/dx b G Omega^{-1/2} d/dx on the Fourier side.
  OpMatrix coupling;
  /// [[0, Omega], [-Omega, 0]].
  SymplecticBlock s1;
  /// [[0, coupling], [0, 0]].
  SymplecticBlock s2;
  /// Norm weights (1 + [k]) on both components, 0 at the zero mode.
  NormBase base;

  Eigen::MatrixXcd S1() const { return s1.assemble(); }
  Eigen::MatrixXcd S2() const { return s2.assemble(); }
  Flow flow_s1() const { return Flow(S1(), FlowStructure::BlockPair, FlowScale::Real); }
  Flow flow_s2() const { return Flow(S2(), FlowStructure::Nilpotent, FlowScale::Real); }
  Flow flow_exact() const { return Flow(S1() + S2(), FlowStructure::Generic, FlowScale::Real); }

  /// H = 1/2 x^* (-J S) x with S = S1 + S2.
  double energy(const Eigen::VectorXcd& x) const;
};

WaterWaveSystem waterwave_assemble(const WaterWaveModel& model, int K);

/// Coupling entry from its closed form:
/// G_n Omega_n^{-1/2} b_hat(n - m) G_m Omega_m^{-1/2} (i n)(i m).
cplx waterwave_coupling_entry(const WaterWaveModel& model, int n, int m);

/// Zero-mean seeded data on (xi, v) in h^s.
Eigen::VectorXcd waterwave_data(const WaterWaveSystem& sys, double s, std::uint64_t seed);

struct WaterWaveStudy {
  std::vector<LocalErrorTable> lie;     // one per s
  std::vector<LocalErrorTable> strang;  // one per s
  std::vector<LossReport> lie_loss;     // one per s
  std::vector<LossReport> strang_loss;  // one per s
  /// max per-step symplectic defect over tau and schemes.
  double symplectic_defect = 0.0;
  /// max relative energy change of one Strang step over the data.
  double energy_drift = 0.0;
};

struct WaterWaveStudyOptions {
  std::vector<int> K_list{32, 64, 128};
  std::vector<double> taus = geometric_taus();
  std::vector<double> s_list{1.0, 2.0, 3.0};
  std::vector<double> sigmas = sigma_grid();
  LossOptions loss;
  std::uint64_t seed = 1;
  int samples = 3;
};

/// Local errors are measured at the largest K.
WaterWaveStudy waterwave_noloss_study(const WaterWaveModel& model, const WaterWaveStudyOptions& options);

}  // namespace pdm
