#include "pdm/op_matrix.hpp"

#include <cmath>

namespace pdm {

bool all_finite(const Eigen::MatrixXcd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

OpMatrix::OpMatrix(IndexBlock block) : block_(std::move(block)) {
  const auto n = static_cast<Eigen::Index>(block_.size());
  entries_ = Eigen::MatrixXcd::Zero(n, n);
}

OpMatrix::OpMatrix(IndexBlock block, Eigen::MatrixXcd entries, StructureHints hints)
    : block_(std::move(block)), entries_(std::move(entries)), hints_(hints) {
  const auto n = static_cast<Eigen::Index>(block_.size());
  if (entries_.rows() != n || entries_.cols() != n) throw Error("OpMatrix: entry matrix does not match block size");
  if (!all_finite(entries_)) throw NumericalError("OpMatrix: non-finite entry");
}

OpMatrix OpMatrix::with_mask(IndexBlock block, Eigen::MatrixXcd entries, std::vector<std::uint8_t> defined) {
  OpMatrix out(std::move(block), std::move(entries));
  if (!defined.empty()) {
    if (defined.size() != out.size()) throw Error("OpMatrix: mask size mismatch");
    bool all = true;
    for (std::size_t p = 0; p < defined.size(); ++p) {
      if (defined[p]) continue;
      all = false;
      const auto e = static_cast<Eigen::Index>(p);
      out.entries_.row(e).setZero();
      out.entries_.col(e).setZero();
    }
    if (!all) out.defined_ = std::move(defined);
  }
  return out;
}

OpMatrix OpMatrix::identity(const IndexBlock& block) {
  const auto n = static_cast<Eigen::Index>(block.size());
  StructureHints h;
  h.hermitian = h.diagonal = h.toeplitz = true;
  return OpMatrix(block, Eigen::MatrixXcd::Identity(n, n), h);
}

OpMatrix OpMatrix::diagonal(const IndexBlock& block, const Eigen::VectorXcd& diag) {
  if (static_cast<std::size_t>(diag.size()) != block.size()) throw Error("OpMatrix::diagonal: size mismatch");
  StructureHints h;
  h.diagonal = true;
  return OpMatrix(block, diag.asDiagonal().toDenseMatrix(), h);
}

cplx OpMatrix::at(const MultiIndex& m, const MultiIndex& n) const {
  return (*this)(block_.position(m), block_.position(n));
}

std::size_t OpMatrix::defined_count() const {
  if (defined_.empty()) return size();
  std::size_t c = 0;
  for (auto v : defined_) c += v ? 1 : 0;
  return c;
}

double OpMatrix::max_abs() const { return entries_.size() == 0 ? 0.0 : entries_.cwiseAbs().maxCoeff(); }

OpMatrix& OpMatrix::operator+=(const OpMatrix& o) {
  require_same_block(block_, o.block_, "OpMatrix::+");
  if (!fully_defined() || !o.fully_defined()) throw Error("OpMatrix::+: masked operands");
  entries_ += o.entries_;
  hints_ = {hints_.hermitian && o.hints_.hermitian, hints_.diagonal && o.hints_.diagonal,
            hints_.toeplitz && o.hints_.toeplitz};
  return *this;
}

OpMatrix& OpMatrix::operator-=(const OpMatrix& o) {
  require_same_block(block_, o.block_, "OpMatrix::-");
  if (!fully_defined() || !o.fully_defined()) throw Error("OpMatrix::-: masked operands");
  entries_ -= o.entries_;
  hints_ = {hints_.hermitian && o.hints_.hermitian, hints_.diagonal && o.hints_.diagonal,
            hints_.toeplitz && o.hints_.toeplitz};
  return *this;
}

OpMatrix& OpMatrix::operator*=(cplx c) {
  entries_ *= c;
  if (c.imag() != 0.0) hints_.hermitian = false;
  return *this;
}

OpMatrix operator+(OpMatrix a, const OpMatrix& b) { return a += b; }
OpMatrix operator-(OpMatrix a, const OpMatrix& b) { return a -= b; }
OpMatrix operator*(cplx c, OpMatrix a) { return a *= c; }

SobolevVec::SobolevVec(IndexBlock block) : block_(std::move(block)) {
  coeffs_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(block_.size()));
}

SobolevVec::SobolevVec(IndexBlock block, Eigen::VectorXcd coeffs) : block_(std::move(block)), coeffs_(std::move(coeffs)) {
  if (static_cast<std::size_t>(coeffs_.size()) != block_.size()) throw Error("SobolevVec: size mismatch");
  if (!all_finite(coeffs_)) throw NumericalError("SobolevVec: non-finite coefficient");
}

Eigen::VectorXd sobolev_weights(const IndexBlock& block, double s) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(block.size()));
  for (std::size_t p = 0; p < block.size(); ++p) w(static_cast<Eigen::Index>(p)) = std::pow(1.0 + block.norm_at(p), s);
  return w;
}

double SobolevVec::norm(double s) const {
  double acc = 0.0;
  for (std::size_t p = 0; p < block_.size(); ++p) {
    const double w = std::pow(1.0 + block_.norm_at(p), 2.0 * s);
    acc += w * std::norm(coeffs_(static_cast<Eigen::Index>(p)));
  }
  return std::sqrt(acc);
}

double weighted_norm(const Eigen::VectorXcd& x, const Eigen::VectorXd& base, double s) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (base(i) <= 0.0) continue;
    acc += std::pow(base(i), 2.0 * s) * std::norm(x(i));
  }
  return std::sqrt(acc);
}

}  // namespace pdm
