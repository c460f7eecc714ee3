#pragma once

#include <vector>

#include "pdm/flows.hpp"
#include "pdm/operators.hpp"

namespace pdm {

/// Normal-form preconditioner for x' = i(A + B)x with A = diag(m^2) and
/// B(m,n) = V_hat(m - n) on the truncated block {-M..M}.
///
/// X(m,n) = V_hat(m-n) / (i (m^2 - n^2)) off the resonant set m = +-n and 0
/// on it, so that A + B + i[X, A] = A + Z with Z = B restricted to m = +-n.
/// R = e^{iX}(A + B)e^{-iX} - A - Z is computed exactly.
struct PreconditionedSchroedinger {
  IndexBlock block;
  OpMatrix A, B, X, Z, R;
  Eigen::MatrixXcd exp_iX;
  Eigen::MatrixXcd exp_miX;

  Flow flow_AZ() const { return Flow::of(A + Z, FlowStructure::BlockPair); }
  Flow flow_R() const { return Flow::of(R, FlowStructure::Hermitian); }
  Flow flow_A() const { return Flow::of(A, FlowStructure::Diagonal); }
  Flow flow_B() const { return Flow::of(B, FlowStructure::Hermitian); }
  Flow flow_exact() const { return Flow::of(A + B, FlowStructure::Hermitian); }
};

PreconditionedSchroedinger schroedinger_assemble(const Potential& v, int M);

/// R computed at radius pad * M and restricted to {-M..M}. The finite
/// computation at radius M carries an edge artifact on the rows |m| = M
/// (neighbours outside the block are missing from the conjugation series);
/// the restriction keeps the remainder of the untruncated operator.
OpMatrix remainder_interior(const Potential& v, int M, int pad = 2);

/// max |A + B + i[X,A] - A - Z|.
double homological_defect(const PreconditionedSchroedinger& p);
/// max over m != +-n of |i[X,A](m,n) + B(m,n)|.
double offresonant_defect(const PreconditionedSchroedinger& p);
/// max |A + B - e^{-iX}(A + Z + R)e^{iX}|.
double conjugation_defect(const PreconditionedSchroedinger& p);

/// e^{-iX} e^{i tau (A+Z)} e^{i tau R} e^{iX}.
Eigen::MatrixXcd preconditioned_step(const PreconditionedSchroedinger& p, const Flow& az, const Flow& r, double tau);

/// max |P^n - e^{-iX}(e^{i tau (A+Z)} e^{i tau R})^n e^{iX}| for one step P.
double telescoping_defect(const PreconditionedSchroedinger& p, double tau, int n);

/// Flows playing the split roles so that split_step(lie) reproduces the
/// preconditioned step: a = conjugated A+Z flow, b = conjugated R flow.
struct PreconditionedFlows {
  Flow a;
  Flow b;
  Flow exact;
};
PreconditionedFlows preconditioned_flows(const PreconditionedSchroedinger& p);

struct SchroedingerStudy {
  std::vector<LocalErrorTable> preconditioned;  // one per s
  std::vector<LocalErrorTable> baseline_lie;    // one per s
  std::vector<LossReport> preconditioned_loss;  // one per s
  std::vector<LossReport> baseline_loss;        // one per s
  double homological = 0.0;
  double telescoping = 0.0;
};

struct SchroedingerStudyOptions {
  std::vector<int> M_list{16, 32, 64};
  std::vector<double> taus = geometric_taus();
  std::vector<double> s_list{0.0, 1.0, 2.0};
  std::vector<double> sigmas = sigma_grid();
  LossOptions loss;
  /// Regularity margin of the local-error data: x in h^{s + data_sigma}.
  double data_sigma = 3.0;
  std::uint64_t seed = 1;
  int samples = 3;
  int telescoping_steps = 10;
};

SchroedingerStudy preconditioned_lie_study(const Potential& v, const SchroedingerStudyOptions& options);

}  // namespace pdm
