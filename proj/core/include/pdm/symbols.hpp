#pragma once

#include <array>
#include <functional>
#include <string>

#include "pdm/index_block.hpp"

namespace pdm {

using Point = std::array<double, 2>;

/// A Fourier-multiplier symbol Phi : R^d -> C with a declared order.
///
/// The declared order is metadata only; certification always goes through
/// estimate_order().
struct Symbol {
  std::string name;
  std::function<cplx(const Point&)> eval;
  double declared_order = 0.0;
};

/// A periodic potential V on T^d, given both by its Fourier coefficients
/// (FV)_k and by point values V(x). The two routes must describe the same
/// function; mult_matrix_fourier cross-checks them.
struct Potential {
  std::string name;
  std::function<cplx(const MultiIndex&)> coeff;
  std::function<cplx(const Point&)> value;
  /// Coefficients vanish (or are below 1e-25 relative) for |k|_inf > support.
  int support = 0;
  bool real = true;
  bool even = true;
};

}  // namespace pdm
