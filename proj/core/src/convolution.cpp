#include "pdm/convolution.hpp"

#include <cmath>
#include <limits>

namespace pdm {

FiniteSequence FiniteSequence::zeros(int dim, MultiIndex offset, MultiIndex extent) {
  if (dim != 1 && dim != 2) throw Error("FiniteSequence: dimension must be 1 or 2");
  if (dim == 1) {
    offset[1] = 0;
    extent[1] = 1;
  }
  if (extent[0] < 1 || extent[1] < 1) throw Error("FiniteSequence: empty extent");
  FiniteSequence s;
  s.dim = dim;
  s.offset = offset;
  s.extent = extent;
  s.values.assign(static_cast<std::size_t>(extent[0]) * static_cast<std::size_t>(extent[1]), cplx{});
  return s;
}

FiniteSequence FiniteSequence::delta_at(int dim, MultiIndex at) {
  auto s = zeros(dim, at, {1, 1});
  s.values[0] = 1.0;
  return s;
}

MultiIndex FiniteSequence::index(std::size_t i) const {
  const auto w = static_cast<std::size_t>(extent[1]);
  return {offset[0] + static_cast<int>(i / w), offset[1] + static_cast<int>(i % w)};
}

cplx FiniteSequence::at(const MultiIndex& k) const {
  const int i0 = k[0] - offset[0];
  const int i1 = dim == 2 ? k[1] - offset[1] : 0;
  if (i0 < 0 || i0 >= extent[0] || i1 < 0 || i1 >= extent[1]) return {};
  return values[static_cast<std::size_t>(i0) * static_cast<std::size_t>(extent[1]) + static_cast<std::size_t>(i1)];
}

cplx& FiniteSequence::ref(const MultiIndex& k) {
  const int i0 = k[0] - offset[0];
  const int i1 = dim == 2 ? k[1] - offset[1] : 0;
  if (i0 < 0 || i0 >= extent[0] || i1 < 0 || i1 >= extent[1]) throw Error("FiniteSequence: index outside support box");
  return values[static_cast<std::size_t>(i0) * static_cast<std::size_t>(extent[1]) + static_cast<std::size_t>(i1)];
}

FiniteSequence convolve(const FiniteSequence& x, const FiniteSequence& y) {
  if (x.dim != y.dim) throw Error("convolve: dimension mismatch");
  auto z = FiniteSequence::zeros(x.dim, x.offset + y.offset,
                                 {x.extent[0] + y.extent[0] - 1, x.extent[1] + y.extent[1] - 1});
  for (std::size_t i = 0; i < x.count(); ++i) {
    if (x.values[i] == cplx{}) continue;
    const MultiIndex p = x.index(i);
    for (std::size_t j = 0; j < y.count(); ++j) z.ref(p + y.index(j)) += x.values[i] * y.values[j];
  }
  return z;
}

double lp_norm(const FiniteSequence& x, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : x.values) m = std::max(m, std::abs(v));
    return m;
  }
  if (p < 1.0) throw Error("lp_norm: p must be >= 1");
  double acc = 0.0;
  for (const auto& v : x.values) acc += std::pow(std::abs(v), p);
  return std::pow(acc, 1.0 / p);
}

FiniteSequence random_sequence(int dim, std::mt19937_64& rng, int max_extent) {
  std::uniform_int_distribution<int> ext(1, max_extent);
  std::uniform_int_distribution<int> off(-max_extent, max_extent);
  std::normal_distribution<double> val(0.0, 1.0);
  MultiIndex e{ext(rng), dim == 2 ? ext(rng) : 1};
  MultiIndex o{off(rng), dim == 2 ? off(rng) : 0};
  auto s = FiniteSequence::zeros(dim, o, e);
  for (auto& v : s.values) v = {val(rng), val(rng)};
  return s;
}

}  // namespace pdm
