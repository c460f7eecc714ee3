#include "pdm/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace pdm {

namespace {

void check_axis(const OpMatrix& a, int axis) {
  if (axis < 0 || axis >= a.block().dim()) throw Error("shift: axis out of range");
}

Eigen::Index ei(std::size_t p) { return static_cast<Eigen::Index>(p); }

}  // namespace

OpMatrix shift(const OpMatrix& a, int axis, Sign sign) {
  check_axis(a, axis);
  const IndexBlock& blk = a.block();
  const std::size_t n = blk.size();
  MultiIndex step{0, 0};
  step[static_cast<std::size_t>(axis)] = sign == Sign::Plus ? 1 : -1;

  std::vector<std::ptrdiff_t> src(n, -1);
  std::vector<std::uint8_t> defined(n, 0);
  bool any_undefined = false;
  for (std::size_t p = 0; p < n; ++p) {
    auto s = blk.try_position(blk.index(p) + step);
    if (s && a.defined(*s)) {
      src[p] = static_cast<std::ptrdiff_t>(*s);
      defined[p] = 1;
    } else {
      any_undefined = true;
    }
  }

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ei(n), ei(n));
  for (std::size_t q = 0; q < n; ++q) {
    if (src[q] < 0) continue;
    for (std::size_t p = 0; p < n; ++p) {
      if (src[p] < 0) continue;
      out(ei(p), ei(q)) = a.entries()(src[p], src[q]);
    }
  }
  if (!any_undefined) {
    StructureHints h = a.hints();
    return OpMatrix(blk, std::move(out), h);
  }
  return OpMatrix::with_mask(blk, std::move(out), std::move(defined));
}

namespace {

OpMatrix difference(const OpMatrix& a, int axis, Sign sign) {
  OpMatrix shifted = shift(a, axis, sign);
  const std::size_t n = a.size();
  std::vector<std::uint8_t> defined(n, 1);
  bool masked = false;
  for (std::size_t p = 0; p < n; ++p) {
    if (!shifted.defined(p) || !a.defined(p)) {
      defined[p] = 0;
      masked = true;
    }
  }
  Eigen::MatrixXcd diff = shifted.entries() - a.entries();
  if (!masked) return OpMatrix(a.block(), std::move(diff));
  return OpMatrix::with_mask(a.block(), std::move(diff), std::move(defined));
}

}  // namespace

OpMatrix delta(const OpMatrix& a, const MultiIndex& alpha) {
  const IndexBlock& blk = a.block();
  int order = 0;
  for (int j = 0; j < blk.dim(); ++j) order += std::abs(alpha[static_cast<std::size_t>(j)]);
  if (blk.dim() == 1 && alpha[1] != 0) throw Error("delta: alpha has a second component for d = 1");
  if (!blk.is_periodic() && order >= blk.extent()) throw Error("delta: |alpha| must be smaller than the block radius");

  OpMatrix out = a;
  for (int j = 0; j < blk.dim(); ++j) {
    const int aj = alpha[static_cast<std::size_t>(j)];
    const Sign sign = aj >= 0 ? Sign::Plus : Sign::Minus;
    for (int k = 0; k < std::abs(aj); ++k) out = difference(out, j, sign);
  }
  return out;
}

double weighted_sup(const OpMatrix& d, int abs_alpha, int N, double r) {
  if (N < 0) throw Error("seminorm: N must be nonnegative");
  const IndexBlock& blk = d.block();
  const std::size_t n = blk.size();
  const double expo = r - abs_alpha;

  int max_norm = 0;
  for (int v : blk.norms()) max_norm = std::max(max_norm, v);
  const int max_dist = blk.is_periodic() ? blk.dim() * blk.extent() / 2 : 2 * blk.dim() * blk.extent();
  std::vector<double> dist_w(static_cast<std::size_t>(max_dist) + 1);
  for (int k = 0; k <= max_dist; ++k) dist_w[static_cast<std::size_t>(k)] = std::pow(1.0 + k, N);
  std::vector<double> size_w(static_cast<std::size_t>(2 * max_norm) + 1);
  for (int k = 0; k <= 2 * max_norm; ++k) size_w[static_cast<std::size_t>(k)] = std::pow(1.0 + k, -expo);

  std::vector<MultiIndex> idx(n);
  for (std::size_t p = 0; p < n; ++p) idx[p] = blk.index(p);

  bool any = false;
  double best = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    if (!d.defined(q)) continue;
    for (std::size_t p = 0; p < n; ++p) {
      if (!d.defined(p)) continue;
      any = true;
      const double mag = std::abs(d.entries()(ei(p), ei(q)));
      if (mag == 0.0) continue;
      const int dist = blk.dist(idx[p], idx[q]);
      const int sz = blk.norm_at(p) + blk.norm_at(q);
      const double v = mag * dist_w[static_cast<std::size_t>(dist)] * size_w[static_cast<std::size_t>(sz)];
      best = std::max(best, v);
    }
  }
  if (!any) throw Error("seminorm: empty interior");
  return best;
}

double seminorm(const OpMatrix& a, const SeminormSpec& spec) {
  if (spec.N < 0) throw Error("seminorm: N must be nonnegative");
  return weighted_sup(delta(a, spec.alpha), l1(spec.alpha), spec.N, spec.r);
}

OpMatrix matmul(const OpMatrix& a, const OpMatrix& b) {
  require_same_block(a.block(), b.block(), "matmul");
  if (!a.fully_defined() || !b.fully_defined()) throw Error("matmul: masked operand");
  StructureHints h;
  h.diagonal = a.hints().diagonal && b.hints().diagonal;
  Eigen::MatrixXcd prod = a.entries() * b.entries();
  if (!all_finite(prod)) throw NumericalError("matmul: non-finite product");
  return OpMatrix(a.block(), std::move(prod), h);
}

OpMatrix commutator(const OpMatrix& a, const OpMatrix& b) {
  require_same_block(a.block(), b.block(), "commutator");
  if (!a.fully_defined() || !b.fully_defined()) throw Error("commutator: masked operand");
  StructureHints h;
  h.diagonal = a.hints().diagonal && b.hints().diagonal;
  Eigen::MatrixXcd c = a.entries() * b.entries() - b.entries() * a.entries();
  if (!all_finite(c)) throw NumericalError("commutator: non-finite result");
  return OpMatrix(a.block(), std::move(c), h);
}

SobolevVec apply(const OpMatrix& a, const SobolevVec& x) {
  require_same_block(a.block(), x.block(), "apply");
  return SobolevVec(a.block(), a.entries() * x.coeffs());
}

OpMatrix add(const OpMatrix& a, const OpMatrix& b) { return a + b; }

}  // namespace pdm
