#include "pdm/operators.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace pdm {

namespace {

Eigen::Index ei(std::size_t p) { return static_cast<Eigen::Index>(p); }

double scale_of(const OpMatrix& a) { return std::max(a.max_abs(), 1.0); }

}  // namespace

OpMatrix fourier_multiplier(const Symbol& phi, const IndexBlock& block) {
  Eigen::VectorXcd d(ei(block.size()));
  for (std::size_t p = 0; p < block.size(); ++p) {
    const MultiIndex m = block.representative(block.index(p));
    const cplx v = phi.eval({static_cast<double>(m[0]), static_cast<double>(m[1])});
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalError("fourier_multiplier: symbol '" + phi.name + "' is not finite on the block");
    d(ei(p)) = v;
  }
  OpMatrix out = OpMatrix::diagonal(block, d);
  out.hints().hermitian = d.imag().cwiseAbs().maxCoeff() == 0.0;
  return out;
}

OpMatrix toeplitz_potential(const Potential& v, const IndexBlock& block) {
  const auto n = ei(block.size());
  Eigen::MatrixXcd m(n, n);
  for (std::size_t p = 0; p < block.size(); ++p)
    for (std::size_t q = 0; q < block.size(); ++q)
      m(ei(p), ei(q)) = v.coeff(block.representative(block.index(p) - block.index(q)));
  StructureHints h;
  h.toeplitz = true;
  h.hermitian = v.real;
  return OpMatrix(block, std::move(m), h);
}

Composition compose(const std::vector<OrderedFactor>& factors) {
  if (factors.empty()) throw Error("compose: empty factor list");
  OpMatrix acc = factors.front().matrix;
  double order = factors.front().order;
  for (std::size_t i = 1; i < factors.size(); ++i) {
    acc = matmul(acc, factors[i].matrix);
    order += factors[i].order;
  }
  return {std::move(acc), order};
}

bool hermitian_check(const OpMatrix& a, double tol) {
  const auto& e = a.entries();
  return (e - e.adjoint()).cwiseAbs().maxCoeff() <= tol * scale_of(a);
}

bool diagonal_check(const OpMatrix& a, double tol) {
  Eigen::MatrixXcd off = a.entries();
  off.diagonal().setZero();
  return off.size() == 0 || off.cwiseAbs().maxCoeff() <= tol * scale_of(a);
}

bool toeplitz_check(const OpMatrix& a, double tol) {
  const IndexBlock& blk = a.block();
  const double bound = tol * scale_of(a);
  for (std::size_t p = 0; p < blk.size(); ++p) {
    for (std::size_t q = 0; q < blk.size(); ++q) {
      // Compare against the pair shifted by e_1 (and e_2) when it exists.
      for (int axis = 0; axis < blk.dim(); ++axis) {
        MultiIndex e{0, 0};
        e[static_cast<std::size_t>(axis)] = 1;
        auto p2 = blk.try_position(blk.index(p) + e);
        auto q2 = blk.try_position(blk.index(q) + e);
        if (!p2 || !q2) continue;
        if (std::abs(a(p, q) - a(*p2, *q2)) > bound) return false;
      }
    }
  }
  return true;
}

bool dirichlet_check(const OpMatrix& a, double tol) {
  const IndexBlock& blk = a.block();
  const double bound = tol * scale_of(a);
  for (std::size_t p = 0; p < blk.size(); ++p) {
    const std::size_t pm = blk.position(-blk.index(p));
    for (std::size_t q = 0; q < blk.size(); ++q) {
      const std::size_t qm = blk.position(-blk.index(q));
      if (std::abs(a(p, q) - a(pm, qm)) > bound) return false;
    }
  }
  return true;
}

SobolevVec odd_projection(const SobolevVec& x) {
  const IndexBlock& blk = x.block();
  Eigen::VectorXcd out(x.coeffs().size());
  for (std::size_t p = 0; p < blk.size(); ++p)
    out(ei(p)) = 0.5 * (x.coeffs()(ei(p)) - x.coeffs()(ei(blk.position(-blk.index(p)))));
  return SobolevVec(blk, std::move(out));
}

bool is_odd(const SobolevVec& x, double tol) {
  const IndexBlock& blk = x.block();
  const double scale = std::max(x.coeffs().cwiseAbs().maxCoeff(), 1.0);
  for (std::size_t p = 0; p < blk.size(); ++p) {
    const cplx a = x.coeffs()(ei(p));
    const cplx b = x.coeffs()(ei(blk.position(-blk.index(p))));
    if (std::abs(a + b) > tol * scale) return false;
  }
  return true;
}

SymplecticBlock::SymplecticBlock(OpMatrix a, OpMatrix b, OpMatrix c) : A(std::move(a)), B(std::move(b)), C(std::move(c)) {
  require_same_block(A.block(), B.block(), "SymplecticBlock");
  require_same_block(A.block(), C.block(), "SymplecticBlock");
  if (!hermitian_check(B, 1e-12)) throw Error("SymplecticBlock: B must be Hermitian");
  if (!hermitian_check(C, 1e-12)) throw Error("SymplecticBlock: C must be Hermitian");
}

Eigen::MatrixXcd SymplecticBlock::assemble() const {
  const auto n = ei(A.size());
  Eigen::MatrixXcd s(2 * n, 2 * n);
  s.topLeftCorner(n, n) = A.entries();
  s.topRightCorner(n, n) = B.entries();
  s.bottomLeftCorner(n, n) = C.entries();
  s.bottomRightCorner(n, n) = -A.entries().adjoint();
  return s;
}

Eigen::MatrixXcd canonical_J(Eigen::Index n) {
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -Eigen::MatrixXcd::Identity(n, n);
  return j;
}

double symplectic_defect(const Eigen::MatrixXcd& phi) {
  if (phi.rows() != phi.cols() || phi.rows() % 2 != 0) throw Error("symplectic_defect: expected a square 2n x 2n matrix");
  const Eigen::MatrixXcd j = canonical_J(phi.rows() / 2);
  return (phi.adjoint() * j * phi - j).cwiseAbs().maxCoeff();
}

SymplecticFlowResult symplectic_flow(const SymplecticBlock& s, double t) {
  if (!std::isfinite(t)) throw Error("symplectic_flow: non-finite time");
  const Eigen::MatrixXcd gen = s.assemble();
  SymplecticFlowResult out;
  if (t == 0.0) {
    out.propagator = Eigen::MatrixXcd::Identity(gen.rows(), gen.cols());
  } else {
    out.propagator = (gen * t).exp();
  }
  if (!all_finite(out.propagator)) throw NumericalError("symplectic_flow: exponential is not finite");
  out.defect = symplectic_defect(out.propagator);
  return out;
}

}  // namespace pdm
