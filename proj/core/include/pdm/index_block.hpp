#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdm {

using cplx = std::complex<double>;

/// Multi-index in Z^d for d <= 2. The second component is 0 when d == 1.
using MultiIndex = std::array<int, 2>;

inline MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline MultiIndex operator-(const MultiIndex& a) { return {-a[0], -a[1]}; }

inline int l1(const MultiIndex& a) { return std::abs(a[0]) + std::abs(a[1]); }

/// Raised on contract violations (bad shapes, out-of-range parameters).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a computation produces non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

enum class BlockMode { Truncated, Periodic };

/// The active index set of a matrix: either the symmetric box {-M..M}^d
/// (truncated view of Z^d) or the torus Z_K^d.
///
/// Positions are laid out row-major over the axes. In truncated mode the
/// coordinate of position p on one axis is p - M; in periodic mode it is the
/// residue p in [0, K).
class IndexBlock {
 public:
  static IndexBlock truncated(int dim, int radius);
  static IndexBlock periodic(int dim, int period);

  int dim() const { return dim_; }
  BlockMode mode() const { return mode_; }
  bool is_periodic() const { return mode_ == BlockMode::Periodic; }
  /// M in truncated mode, K in periodic mode.
  int extent() const { return extent_; }
  /// Number of positions along one axis.
  int side() const { return side_; }
  std::size_t size() const { return size_; }

  MultiIndex index(std::size_t pos) const;
  /// Position of an index. Periodic mode wraps; truncated mode throws when
  /// the index leaves the box.
  std::size_t position(const MultiIndex& k) const;
  std::optional<std::size_t> try_position(const MultiIndex& k) const;

  /// Representative in {-K/2..K/2-1}^d (periodic) or the index itself.
  MultiIndex representative(const MultiIndex& k) const;
  /// |k| = |k_1|+..+|k_d| (truncated) or the bracket norm [k] (periodic).
  int norm(const MultiIndex& k) const;
  int norm_at(std::size_t pos) const { return norms_[pos]; }
  /// dist(m, n) = |m - n| or [m - n].
  int dist(const MultiIndex& m, const MultiIndex& n) const { return norm(m - n); }

  const std::vector<int>& norms() const { return norms_; }

  std::string describe() const;

  bool operator==(const IndexBlock& o) const {
    return dim_ == o.dim_ && mode_ == o.mode_ && extent_ == o.extent_;
  }
  bool operator!=(const IndexBlock& o) const { return !(*this == o); }

 private:
  IndexBlock(int dim, BlockMode mode, int extent);

  int dim_;
  BlockMode mode_;
  int extent_;
  int side_;
  std::size_t size_;
  std::vector<int> norms_;
};

/// Bracket norm [a] for a in Z_K^d: l1 size of the representative in G_K.
int bracket(const MultiIndex& a, int K, int dim);

/// Representative of a residue in G_K = {-K/2, ..., K/2 - 1}.
inline int centered(int a, int K) {
  int r = a % K;
  if (r < 0) r += K;
  if (r >= K / 2) r -= K;
  return r;
}

void require_same_block(const IndexBlock& a, const IndexBlock& b, const char* what);

}  // namespace pdm
