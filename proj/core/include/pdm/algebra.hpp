#pragma once

#include <vector>

#include "pdm/op_matrix.hpp"

namespace pdm {

enum class Sign { Plus, Minus };

/// Parameters (alpha, N, r) of the weighted seminorm.
struct SeminormSpec {
  MultiIndex alpha{0, 0};
  int N = 0;
  double r = 0.0;
};

/// B(m, n) = A(m + e_j, n + e_j) (Plus) or A(m - e_j, n - e_j) (Minus).
/// `axis` is 0-based. Truncated mode marks indices whose source left the
/// block as undefined.
OpMatrix shift(const OpMatrix& a, int axis, Sign sign);

/// Iterated difference Delta^alpha = Delta_1^{alpha_1} ... Delta_d^{alpha_d},
/// with Delta_j^{+} A = A^{j,+} - A for alpha_j > 0 and Delta_j^{-} for
/// alpha_j < 0. In truncated mode |alpha| must be smaller than the radius.
OpMatrix delta(const OpMatrix& a, const MultiIndex& alpha);

/// sup over defined pairs of |Delta^alpha A(m,n)| (1+dist(m,n))^N / (1+|m|+|n|)^{r-|alpha|}.
/// Throws if no pair is defined.
double seminorm(const OpMatrix& a, const SeminormSpec& spec);

/// The seminorm sup evaluated on an already-differenced matrix Delta^alpha A.
double weighted_sup(const OpMatrix& differenced, int abs_alpha, int N, double r);

OpMatrix matmul(const OpMatrix& a, const OpMatrix& b);
OpMatrix commutator(const OpMatrix& a, const OpMatrix& b);
SobolevVec apply(const OpMatrix& a, const SobolevVec& x);

/// Sum of two same-block matrices; convenience for chained expressions.
OpMatrix add(const OpMatrix& a, const OpMatrix& b);

}  // namespace pdm
