#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pdm/index_block.hpp"

namespace pdm {

/// Structural flags. These are advisory: the check functions in
/// operators.hpp verify them by full entry scans.
struct StructureHints {
  bool hermitian = false;
  bool diagonal = false;
  bool toeplitz = false;
};

/// Dense complex matrix indexed by an IndexBlock.
///
/// Matrices produced by shift/delta in truncated mode carry a per-index
/// "defined" mask: a pair (m, n) is defined iff both m and n are. Entries at
/// undefined pairs are zero and are skipped by seminorm sups.
class OpMatrix {
 public:
  explicit OpMatrix(IndexBlock block);
  OpMatrix(IndexBlock block, Eigen::MatrixXcd entries, StructureHints hints = {});

  static OpMatrix zero(const IndexBlock& block) { return OpMatrix(block); }
  static OpMatrix identity(const IndexBlock& block);
  static OpMatrix diagonal(const IndexBlock& block, const Eigen::VectorXcd& diag);

  const IndexBlock& block() const { return block_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  std::size_t size() const { return block_.size(); }

  cplx operator()(std::size_t m, std::size_t n) const { return entries_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)); }
  cplx at(const MultiIndex& m, const MultiIndex& n) const;

  bool fully_defined() const { return defined_.empty(); }
  bool defined(std::size_t pos) const { return defined_.empty() || defined_[pos] != 0; }
  const std::vector<std::uint8_t>& defined_mask() const { return defined_; }
  std::size_t defined_count() const;

  const StructureHints& hints() const { return hints_; }
  StructureHints& hints() { return hints_; }

  double max_abs() const;

  OpMatrix& operator+=(const OpMatrix& o);
  OpMatrix& operator-=(const OpMatrix& o);
  OpMatrix& operator*=(cplx c);

  /// Builds a masked matrix; entries outside the mask are zeroed.
  static OpMatrix with_mask(IndexBlock block, Eigen::MatrixXcd entries, std::vector<std::uint8_t> defined);

 private:
  IndexBlock block_;
  Eigen::MatrixXcd entries_;
  std::vector<std::uint8_t> defined_;
  StructureHints hints_;
};

OpMatrix operator+(OpMatrix a, const OpMatrix& b);
OpMatrix operator-(OpMatrix a, const OpMatrix& b);
OpMatrix operator*(cplx c, OpMatrix a);

/// Complex sequence on the active index set with discrete Sobolev norms.
class SobolevVec {
 public:
  explicit SobolevVec(IndexBlock block);
  SobolevVec(IndexBlock block, Eigen::VectorXcd coeffs);

  const IndexBlock& block() const { return block_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  Eigen::VectorXcd& coeffs() { return coeffs_; }

  /// (sum (1+|k|)^{2s} |x_k|^2)^{1/2}, bracket norm in periodic mode.
  double norm(double s) const;

 private:
  IndexBlock block_;
  Eigen::VectorXcd coeffs_;
};

/// Diagonal weights (1+|k|)^s of the h^s norm on a block.
Eigen::VectorXd sobolev_weights(const IndexBlock& block, double s);

/// Weighted l2 norm with weights (base_i)^s; coordinates with base_i == 0 are
/// excluded from the norm.
double weighted_norm(const Eigen::VectorXcd& x, const Eigen::VectorXd& base, double s);

bool all_finite(const Eigen::MatrixXcd& m);

}  // namespace pdm
