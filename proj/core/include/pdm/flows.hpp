#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "pdm/fit.hpp"
#include "pdm/op_matrix.hpp"

namespace pdm {

enum class FlowStructure {
  Diagonal,
  Hermitian,
  /// Block diagonal after permutation; blocks are the connected components of
  /// the sparsity pattern and are exponentiated separately.
  BlockPair,
  /// G^2 = 0, so e^{tG} = I + tG.
  Nilpotent,
  Generic,
};

/// Imaginary: e^{itG}. Real: e^{tG}.
enum class FlowScale { Imaginary, Real };

/// Reference propagator t -> e^{itG} or e^{tG} of a fixed generator.
///
/// The structure claim is verified on construction. Hermitian generators are
/// diagonalized once and every propagator reuses the eigenbasis.
class Flow {
 public:
  Flow(Eigen::MatrixXcd generator, FlowStructure structure, FlowScale scale);
  static Flow of(const OpMatrix& g, FlowStructure structure, FlowScale scale = FlowScale::Imaginary) {
    return Flow(g.entries(), structure, scale);
  }

  Eigen::MatrixXcd propagator(double t) const;
  Eigen::VectorXcd apply(double t, const Eigen::VectorXcd& x) const;

  Eigen::Index dim() const;
  FlowStructure structure() const;
  FlowScale scale() const;
  const Eigen::MatrixXcd& generator() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// max |U^* U - I|.
double unitarity_defect(const Eigen::MatrixXcd& u);

enum class Slot { A, B };

struct SplitStage {
  Slot slot = Slot::A;
  double weight = 1.0;
};

/// A product of exponentials e^{w_1 tau X_1} ... listed in the order they act
/// on the state (the first stage is applied first).
struct SplitScheme {
  std::string name;
  int order = 1;
  std::vector<SplitStage> stages;

  /// Exchanges the roles of A and B.
  SplitScheme swapped() const;
  /// Throws unless the weights of each slot sum to 1.
  void validate() const;

  /// e^{i tau A} e^{i tau B}.
  static SplitScheme lie();
  /// e^{i tau B/2} e^{i tau A} e^{i tau B/2}.
  static SplitScheme strang();
};

/// k = 1: Lie, k = 2: Strang, k = 4: triple jump built from Strang with
/// gamma_1 = gamma_3 = 1/(2 - 2^{1/3}), gamma_2 = 1 - 2 gamma_1.
SplitScheme composition_scheme(int k);

Eigen::MatrixXcd split_step(const SplitScheme& scheme, const Flow& a, const Flow& b, double tau);
Eigen::VectorXcd split_apply(const SplitScheme& scheme, const Flow& a, const Flow& b, double tau, const Eigen::VectorXcd& x);

/// Weights of a Sobolev norm: ||x||_s^2 = sum base_i^{2s} |x_i|^2, indices
/// with base_i <= 0 excluded.
using NormBase = Eigen::VectorXd;
NormBase norm_base(const IndexBlock& block);

struct LocalErrorRow {
  double tau = 0.0;
  double error = 0.0;
  /// error / ||x||_{s + data_sigma} for the worst sample.
  double norm_ratio = 0.0;
  bool below_floor = false;
};

struct LocalErrorTable {
  double s = 0.0;
  std::vector<LocalErrorRow> rows;
  LineFit fit;
  /// True when fewer than two points clear the roundoff floor.
  bool order_undefined = false;
  double tau_order() const { return fit.slope; }
};

/// tau_j = first * ratio^j, j = 0..count-1.
std::vector<double> geometric_taus(double first = 0.1, double ratio = 0.5, int count = 7);

/// Per tau, the sup over the samples of ||(split - exact) x||_s, and the
/// log-log slope over the points above 100 eps ||x||_s.
LocalErrorTable local_error(const SplitScheme& scheme, const Flow& a, const Flow& b, const Flow& exact,
                            const std::vector<double>& taus, double s, const std::vector<Eigen::VectorXcd>& data,
                            const NormBase& base, double data_sigma = 0.0);

/// One refinement level of a loss scan.
struct LossLevel {
  int extent = 0;
  Flow a;
  Flow b;
  Flow exact;
  NormBase base;
};

struct LossCell {
  int extent = 0;
  double sigma = 0.0;
  /// sup_x ||E x||_s / ||x||_{s+sigma}, exact.
  double value = 0.0;
  /// The same ratio on seeded rough data in h^{s+sigma}.
  double data_ratio = 0.0;
};

struct LossReport {
  double s = 0.0;
  double tau_star = 0.0;
  double sigma_hat = 0.0;
  bool stabilized = false;
  std::vector<LossCell> cells;
  /// Worst growth exponent across refinement, per sigma in grid order.
  std::vector<double> growth;
};

struct LossOptions {
  double tau_star = 0.02;
  /// Allowed growth per refinement: value_{i+1} <= value_i (n_{i+1}/n_i)^g.
  double max_growth_exponent = 0.125;
  /// Values below this are zero errors.
  double zero_floor = 1e-13;
  std::uint64_t seed = 1;
  int samples = 4;
};

std::vector<double> sigma_grid(double hi = 3.0, double step = 0.25);

LossReport loss_estimator(const SplitScheme& scheme, const std::vector<LossLevel>& levels, double s,
                          const std::vector<double>& sigmas, const LossOptions& options = {});

/// sup over t in [0, t_max] (grid of `steps` points) of ||e^{itG} x||_s / ||x||_s
/// over all x, i.e. the h^s operator norm of the flow.
double flow_stability_constant(const Flow& flow, const NormBase& base, double s, double t_max = 1.0, int steps = 11);

using SparseMatrixXcd = Eigen::SparseMatrix<cplx>;

/// e^{itH}x for Hermitian H through the Chebyshev expansion
/// e^{iz cos th} = sum_k eps_k i^k J_k(z) cos(k th) on the Gershgorin
/// interval of H. Terms are added until past the turning point k > |z|
/// and |J_k| < tol, so the result agrees with the spectral flow to roundoff.
/// Only matrix-vector products are used.
Eigen::VectorXcd chebyshev_expi(const SparseMatrixXcd& h, double t, const Eigen::VectorXcd& x, double tol = 1e-17);

}  // namespace pdm
