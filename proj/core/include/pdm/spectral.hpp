#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "pdm/algebra.hpp"
#include "pdm/symbols.hpp"

namespace pdm {

/// Values u_a on the grid x_a = a h, h = 2 pi / K, a in Z_K^d (residue
/// ordering, row-major for d = 2).
struct GridFunction {
  int K = 0;
  int dim = 1;
  Eigen::VectorXcd values;

  static GridFunction zeros(int K, int dim);
  static GridFunction sample(int K, int dim, const std::function<cplx(const Point&)>& f);
  IndexBlock block() const { return IndexBlock::periodic(dim, K); }
  double spacing() const;
};

/// (F_K u)_a = K^{-d} sum_b exp(-2 pi i a.b / K) u_b, via FFT.
GridFunction dft(const GridFunction& u);
/// (F_K^{-1} v)_a = sum_b exp(2 pi i a.b / K) v_b, via FFT.
GridFunction idft(const GridFunction& v);
/// Direct O(K^{2d}) summations of the same formulas.
GridFunction dft_direct(const GridFunction& u);
GridFunction idft_direct(const GridFunction& v);

/// F_K and F_K^{-1} as dense K^d x K^d matrices.
Eigen::MatrixXcd dft_matrix(int K, int dim);
Eigen::MatrixXcd idft_matrix(int K, int dim);

/// Grid-side circulant difference matrix delta^{+/-}_{j,K} with 1/h scaling.
OpMatrix fd_matrix(int axis, Sign sign, int K, int dim = 1);
/// Fourier-side diagonal D^{+/-}_{j,K}: (e^{i h a_j} - 1)/h and (1 - e^{-i h a_j})/h.
OpMatrix fd_symbol(int axis, Sign sign, int K, int dim = 1);

/// M_{V,K}(a,b) = DFT of the grid samples V(a h), evaluated at a - b.
OpMatrix mult_matrix_fourier(const Potential& v, int K, int dim = 1);
/// Same matrix from the grid samples given directly.
OpMatrix mult_matrix_fourier(const GridFunction& samples);
/// Same matrix from the closed-form coefficients: sum_l (FV)_{a-b+lK}.
OpMatrix mult_matrix_fourier_alias(const Potential& v, int K, int dim = 1);

/// Pointwise product (B_{V,K} u)_a = V(a h) u_a.
GridFunction mult_grid(const GridFunction& v_samples, const GridFunction& u);

/// Diagonal Phi(a_hat) over the representatives a_hat in G_K.
OpMatrix spectral_multiplier(const Symbol& phi, int K, int dim = 1);

struct FdFactor {
  int axis = 0;
  Sign sign = Sign::Plus;
};

/// One factor of a pseudo-spectral composition.
using SpectralFactor = std::variant<Symbol, Potential, FdFactor>;

struct ComposedMatrix {
  OpMatrix matrix;
  double predicted_order = 0.0;
};

/// Ordered product of the factors (left to right); the predicted order is
/// the sum of factor orders (symbols: declared, potentials: 0, differences: 1).
ComposedMatrix compose_pseudo_spectral(const std::vector<SpectralFactor>& factors, int K, int dim = 1);

/// CSV with columns a_1[,a_2],re,im.
void write_grid_csv(const GridFunction& u, const std::filesystem::path& path);
GridFunction read_grid_csv(const std::filesystem::path& path);

}  // namespace pdm
