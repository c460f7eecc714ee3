#include "pdm/schroedinger.hpp"

#include <cmath>

#include "pdm/rough_data.hpp"

namespace pdm {

namespace {

Eigen::Index ei(std::size_t p) { return static_cast<Eigen::Index>(p); }

bool resonant(int m, int n) { return m == n || m == -n; }

OpMatrix hermitian_part(const IndexBlock& blk, const Eigen::MatrixXcd& m) {
  StructureHints h;
  h.hermitian = true;
  return OpMatrix(blk, 0.5 * (m + m.adjoint()), h);
}

}  // namespace

PreconditionedSchroedinger schroedinger_assemble(const Potential& v, int M) {
  if (M < 4) throw Error("schroedinger_assemble: M must be >= 4");
  if (!v.real) throw Error("schroedinger_assemble: V must be real (X would not be Hermitian)");
  const IndexBlock blk = IndexBlock::truncated(1, M);
  const auto n = ei(blk.size());

  Eigen::VectorXcd a(n);
  Eigen::MatrixXcd b(n, n), x = Eigen::MatrixXcd::Zero(n, n), z = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t p = 0; p < blk.size(); ++p) {
    const int m = blk.index(p)[0];
    a(ei(p)) = static_cast<double>(m) * m;
    for (std::size_t q = 0; q < blk.size(); ++q) {
      const int k = blk.index(q)[0];
      const cplx vh = v.coeff({m - k, 0});
      b(ei(p), ei(q)) = vh;
      if (resonant(m, k))
        z(ei(p), ei(q)) = vh;
      else
        x(ei(p), ei(q)) = vh / cplx{0.0, static_cast<double>((m + k) * (m - k))};
    }
  }

  StructureHints herm;
  herm.hermitian = true;
  OpMatrix A = OpMatrix::diagonal(blk, a);
  OpMatrix B(blk, b, herm);
  OpMatrix X = hermitian_part(blk, x);
  OpMatrix Z = hermitian_part(blk, z);

  const Flow fx = Flow::of(X, FlowStructure::Hermitian);
  Eigen::MatrixXcd e_plus = fx.propagator(1.0);
  Eigen::MatrixXcd e_minus = fx.propagator(-1.0);
  // R = e^{ad} (A + B) - A - Z with ad = ad_{iX} and ad A = Z - B, so
  // R = sum_{k>=1} ad^k B / k! + sum_{k>=2} ad^{k-1} (Z - B) / k!.
  // Every term is O(1): the O(M^2) diagonal of A never enters a product.
  const Eigen::MatrixXcd ix = cplx{0.0, 1.0} * X.entries();
  auto ad = [&](const Eigen::MatrixXcd& y) -> Eigen::MatrixXcd { return ix * y - y * ix; };
  Eigen::MatrixXcd pb = b;                          // ad^k B / k!
  Eigen::MatrixXcd pz = Z.entries() - b;            // ad^{k-1} (Z - B) / k!, k = 1
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(n, n);
  bool converged = false;
  for (int k = 1; k <= 400; ++k) {
    pb = ad(pb) / static_cast<double>(k);
    if (k >= 2) {
      pz = ad(pz) / static_cast<double>(k);
      r += pz;
    }
    r += pb;
    const double term = std::max(pb.cwiseAbs().maxCoeff(), k >= 2 ? pz.cwiseAbs().maxCoeff() : 0.0);
    if (k >= 2 && term <= 1e-18 * std::max(1.0, r.cwiseAbs().maxCoeff())) {
      converged = true;
      break;
    }
  }
  if (!converged || !all_finite(r)) throw NumericalError("schroedinger_assemble: remainder series did not converge");
  OpMatrix R = hermitian_part(blk, r);
  return PreconditionedSchroedinger{blk, A, B, X, Z, R, std::move(e_plus), std::move(e_minus)};
}

OpMatrix remainder_interior(const Potential& v, int M, int pad) {
  if (pad < 1) throw Error("remainder_interior: pad must be >= 1");
  const PreconditionedSchroedinger big = schroedinger_assemble(v, pad * M);
  const int off = (pad - 1) * M;
  const int n = 2 * M + 1;
  return OpMatrix(IndexBlock::truncated(1, M), big.R.entries().block(off, off, n, n), {.hermitian = true});
}

double homological_defect(const PreconditionedSchroedinger& p) {
  const Eigen::MatrixXcd lhs = p.A.entries() + p.B.entries() + cplx{0.0, 1.0} * commutator(p.X, p.A).entries();
  return (lhs - p.A.entries() - p.Z.entries()).cwiseAbs().maxCoeff();
}

double offresonant_defect(const PreconditionedSchroedinger& p) {
  const Eigen::MatrixXcd c = cplx{0.0, 1.0} * commutator(p.X, p.A).entries() + p.B.entries();
  double worst = 0.0;
  for (std::size_t i = 0; i < p.block.size(); ++i)
    for (std::size_t j = 0; j < p.block.size(); ++j)
      if (!resonant(p.block.index(i)[0], p.block.index(j)[0])) worst = std::max(worst, std::abs(c(ei(i), ei(j))));
  return worst;
}

double conjugation_defect(const PreconditionedSchroedinger& p) {
  const Eigen::MatrixXcd back = p.exp_miX * (p.A + p.Z + p.R).entries() * p.exp_iX;
  return ((p.A + p.B).entries() - back).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd preconditioned_step(const PreconditionedSchroedinger& p, const Flow& az, const Flow& r, double tau) {
  return p.exp_miX * az.propagator(tau) * r.propagator(tau) * p.exp_iX;
}

double telescoping_defect(const PreconditionedSchroedinger& p, double tau, int n) {
  if (n < 1) throw Error("telescoping_defect: n must be >= 1");
  const Flow az = p.flow_AZ(), r = p.flow_R();
  const Eigen::MatrixXcd step = preconditioned_step(p, az, r, tau);
  const Eigen::MatrixXcd inner = az.propagator(tau) * r.propagator(tau);
  Eigen::MatrixXcd lhs = step, mid = inner;
  for (int i = 1; i < n; ++i) {
    lhs = step * lhs;
    mid = inner * mid;
  }
  return (lhs - p.exp_miX * mid * p.exp_iX).cwiseAbs().maxCoeff();
}

PreconditionedFlows preconditioned_flows(const PreconditionedSchroedinger& p) {
  auto conj = [&](const OpMatrix& g) {
    const Eigen::MatrixXcd c = p.exp_miX * g.entries() * p.exp_iX;
    return Eigen::MatrixXcd(0.5 * (c + c.adjoint()));
  };
  return {Flow(conj(p.A + p.Z), FlowStructure::Hermitian, FlowScale::Imaginary),
          Flow(conj(p.R), FlowStructure::Hermitian, FlowScale::Imaginary), p.flow_exact()};
}

SchroedingerStudy preconditioned_lie_study(const Potential& v, const SchroedingerStudyOptions& options) {
  if (options.M_list.size() < 2) throw Error("preconditioned_lie_study: need at least two M values");
  if (options.taus.empty()) throw Error("preconditioned_lie_study: empty tau list");
  if (options.s_list.empty()) throw Error("preconditioned_lie_study: empty s list");

  std::vector<PreconditionedSchroedinger> models;
  std::vector<LossLevel> pre_levels, base_levels;
  for (int M : options.M_list) {
    models.push_back(schroedinger_assemble(v, M));
    const auto& p = models.back();
    const PreconditionedFlows pf = preconditioned_flows(p);
    const NormBase base = norm_base(p.block);
    pre_levels.push_back({M, pf.a, pf.b, pf.exact, base});
    base_levels.push_back({M, p.flow_A(), p.flow_B(), pf.exact, base});
  }

  SchroedingerStudy out;
  const auto& fine = models.back();
  out.homological = homological_defect(fine);
  out.telescoping = telescoping_defect(fine, options.taus.front(), options.telescoping_steps);

  const SplitScheme lie = SplitScheme::lie();
  const auto& pre = pre_levels.back();
  const auto& bl = base_levels.back();
  for (double s : options.s_list) {
    std::vector<Eigen::VectorXcd> data;
    for (int i = 0; i < options.samples; ++i)
      data.push_back(rough_data(fine.block, s + options.data_sigma, options.seed + static_cast<std::uint64_t>(i)));
    out.preconditioned.push_back(local_error(lie, pre.a, pre.b, pre.exact, options.taus, s, data, pre.base, options.data_sigma));
    out.baseline_lie.push_back(local_error(lie, bl.a, bl.b, bl.exact, options.taus, s, data, bl.base, options.data_sigma));
    out.preconditioned_loss.push_back(loss_estimator(lie, pre_levels, s, options.sigmas, options.loss));
    out.baseline_loss.push_back(loss_estimator(lie, base_levels, s, options.sigmas, options.loss));
  }
  return out;
}

}  // namespace pdm
