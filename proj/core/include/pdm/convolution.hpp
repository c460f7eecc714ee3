#pragma once

#include <random>
#include <vector>

#include "pdm/index_block.hpp"

namespace pdm {

/// Finitely supported sequence on Z^d (d <= 2): values on the box
/// [offset, offset + extent) stored row-major.
struct FiniteSequence {
  int dim = 1;
  MultiIndex offset{0, 0};
  MultiIndex extent{1, 1};
  std::vector<cplx> values;

  static FiniteSequence zeros(int dim, MultiIndex offset, MultiIndex extent);
  static FiniteSequence delta_at(int dim, MultiIndex at);

  std::size_t count() const { return values.size(); }
  cplx at(const MultiIndex& k) const;
  cplx& ref(const MultiIndex& k);
  MultiIndex index(std::size_t i) const;
};

/// z_n = sum_{p+q=n} x_p y_q.
FiniteSequence convolve(const FiniteSequence& x, const FiniteSequence& y);

/// l^p norm for p >= 1; p = infinity gives the sup norm.
double lp_norm(const FiniteSequence& x, double p);

/// Random sequence with a random support box, for property tests.
FiniteSequence random_sequence(int dim, std::mt19937_64& rng, int max_extent = 12);

}  // namespace pdm
