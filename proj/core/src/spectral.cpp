#include "pdm/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace pdm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::Index ei(std::size_t p) { return static_cast<Eigen::Index>(p); }

void check_K(int K) {
  if (K < 4 || K % 2 != 0) throw Error("grid period K must be even and >= 4");
}

// Unscaled 1-d transforms along each axis; sign < 0 is the forward kernel.
Eigen::VectorXcd fft_axes(const Eigen::VectorXcd& in, int K, int dim, bool forward) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  Eigen::VectorXcd out = in;
  std::vector<cplx> src(static_cast<std::size_t>(K)), dst;
  auto run = [&](std::size_t start, std::size_t stride) {
    for (int i = 0; i < K; ++i) src[static_cast<std::size_t>(i)] = out(ei(start + stride * static_cast<std::size_t>(i)));
    if (forward)
      fft.fwd(dst, src);
    else
      fft.inv(dst, src);
    for (int i = 0; i < K; ++i) out(ei(start + stride * static_cast<std::size_t>(i))) = dst[static_cast<std::size_t>(i)];
  };
  const auto k = static_cast<std::size_t>(K);
  if (dim == 1) {
    run(0, 1);
  } else {
    for (std::size_t r = 0; r < k; ++r) run(r * k, 1);
    for (std::size_t c = 0; c < k; ++c) run(c, k);
  }
  return out;
}

double dot_phase(const MultiIndex& a, const MultiIndex& b, int K) {
  return kTwoPi * (static_cast<double>(a[0]) * b[0] + static_cast<double>(a[1]) * b[1]) / K;
}

}  // namespace

GridFunction GridFunction::zeros(int K, int dim) {
  check_K(K);
  if (dim != 1 && dim != 2) throw Error("GridFunction: dimension must be 1 or 2");
  GridFunction g;
  g.K = K;
  g.dim = dim;
  g.values = Eigen::VectorXcd::Zero(ei(IndexBlock::periodic(dim, K).size()));
  return g;
}

GridFunction GridFunction::sample(int K, int dim, const std::function<cplx(const Point&)>& f) {
  GridFunction g = zeros(K, dim);
  const IndexBlock blk = g.block();
  const double h = g.spacing();
  for (std::size_t p = 0; p < blk.size(); ++p) {
    const MultiIndex a = blk.index(p);
    g.values(ei(p)) = f({a[0] * h, dim == 2 ? a[1] * h : 0.0});
  }
  if (!all_finite(g.values)) throw NumericalError("GridFunction::sample: non-finite sample");
  return g;
}

double GridFunction::spacing() const { return kTwoPi / K; }

GridFunction dft(const GridFunction& u) {
  GridFunction out = u;
  const double scale = std::pow(static_cast<double>(u.K), -u.dim);
  out.values = fft_axes(u.values, u.K, u.dim, true) * scale;
  return out;
}

GridFunction idft(const GridFunction& v) {
  GridFunction out = v;
  out.values = fft_axes(v.values, v.K, v.dim, false);
  return out;
}

Eigen::MatrixXcd dft_matrix(int K, int dim) {
  check_K(K);
  const IndexBlock blk = IndexBlock::periodic(dim, K);
  const auto n = ei(blk.size());
  const double scale = std::pow(static_cast<double>(K), -dim);
  Eigen::MatrixXcd f(n, n);
  for (std::size_t p = 0; p < blk.size(); ++p)
    for (std::size_t q = 0; q < blk.size(); ++q)
      f(ei(p), ei(q)) = std::polar(scale, -dot_phase(blk.index(p), blk.index(q), K));
  return f;
}

Eigen::MatrixXcd idft_matrix(int K, int dim) {
  check_K(K);
  const IndexBlock blk = IndexBlock::periodic(dim, K);
  const auto n = ei(blk.size());
  Eigen::MatrixXcd f(n, n);
  for (std::size_t p = 0; p < blk.size(); ++p)
    for (std::size_t q = 0; q < blk.size(); ++q)
      f(ei(p), ei(q)) = std::polar(1.0, dot_phase(blk.index(p), blk.index(q), K));
  return f;
}

GridFunction dft_direct(const GridFunction& u) {
  GridFunction out = u;
  out.values = dft_matrix(u.K, u.dim) * u.values;
  return out;
}

GridFunction idft_direct(const GridFunction& v) {
  GridFunction out = v;
  out.values = idft_matrix(v.K, v.dim) * v.values;
  return out;
}

OpMatrix fd_matrix(int axis, Sign sign, int K, int dim) {
  check_K(K);
  const IndexBlock blk = IndexBlock::periodic(dim, K);
  if (axis < 0 || axis >= dim) throw Error("fd_matrix: axis out of range");
  const double inv_h = K / kTwoPi;
  const auto n = ei(blk.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  MultiIndex e{0, 0};
  e[static_cast<std::size_t>(axis)] = 1;
  for (std::size_t p = 0; p < blk.size(); ++p) {
    const MultiIndex a = blk.index(p);
    if (sign == Sign::Plus) {
      m(ei(p), ei(p)) -= inv_h;
      m(ei(p), ei(blk.position(a + e))) += inv_h;
    } else {
      m(ei(p), ei(p)) += inv_h;
      m(ei(p), ei(blk.position(a - e))) -= inv_h;
    }
  }
  StructureHints h;
  h.toeplitz = true;
  return OpMatrix(blk, std::move(m), h);
}

OpMatrix fd_symbol(int axis, Sign sign, int K, int dim) {
  check_K(K);
  const IndexBlock blk = IndexBlock::periodic(dim, K);
  if (axis < 0 || axis >= dim) throw Error("fd_symbol: axis out of range");
  const double h = kTwoPi / K;
  Eigen::VectorXcd d(ei(blk.size()));
  for (std::size_t p = 0; p < blk.size(); ++p) {
    const int a = blk.representative(blk.index(p))[static_cast<std::size_t>(axis)];
    d(ei(p)) = sign == Sign::Plus ? (std::polar(1.0, h * a) - 1.0) / h : (1.0 - std::polar(1.0, -h * a)) / h;
  }
  return OpMatrix::diagonal(blk, d);
}

namespace {

OpMatrix toeplitz_from_symbol(const IndexBlock& blk, const std::function<cplx(const MultiIndex&)>& entry, bool hermitian) {
  const auto n = ei(blk.size());
  Eigen::MatrixXcd m(n, n);
  for (std::size_t p = 0; p < blk.size(); ++p)
    for (std::size_t q = 0; q < blk.size(); ++q) m(ei(p), ei(q)) = entry(blk.index(p) - blk.index(q));
  StructureHints h;
  h.toeplitz = true;
  h.hermitian = hermitian;
  return OpMatrix(blk, std::move(m), h);
}

}  // namespace

OpMatrix mult_matrix_fourier(const GridFunction& samples) {
  const GridFunction vhat = dft(samples);
  const IndexBlock blk = samples.block();
  return toeplitz_from_symbol(
      blk, [&](const MultiIndex& k) { return vhat.values(ei(blk.position(k))); }, false);
}

OpMatrix mult_matrix_fourier(const Potential& v, int K, int dim) {
  OpMatrix m = mult_matrix_fourier(GridFunction::sample(K, dim, v.value));
  m.hints().hermitian = v.real;
  return m;
}

OpMatrix mult_matrix_fourier_alias(const Potential& v, int K, int dim) {
  check_K(K);
  const IndexBlock blk = IndexBlock::periodic(dim, K);
  const int S = v.support;
  auto alias_sum = [&](const MultiIndex& diff) {
    const MultiIndex k = blk.representative(diff);
    auto range = [&](int kj) {
      const int lo = static_cast<int>(std::ceil(static_cast<double>(-S - kj) / K));
      const int hi = static_cast<int>(std::floor(static_cast<double>(S - kj) / K));
      return std::pair{lo, hi};
    };
    const auto [lo0, hi0] = range(k[0]);
    const auto [lo1, hi1] = dim == 2 ? range(k[1]) : std::pair{0, 0};
    cplx acc{};
    for (int l0 = lo0; l0 <= hi0; ++l0)
      for (int l1v = lo1; l1v <= hi1; ++l1v) acc += v.coeff({k[0] + l0 * K, dim == 2 ? k[1] + l1v * K : 0});
    return acc;
  };
  return toeplitz_from_symbol(blk, alias_sum, v.real);
}

GridFunction mult_grid(const GridFunction& v_samples, const GridFunction& u) {
  if (v_samples.K != u.K || v_samples.dim != u.dim) throw Error("mult_grid: K mismatch");
  GridFunction out = u;
  out.values = v_samples.values.cwiseProduct(u.values);
  return out;
}

OpMatrix spectral_multiplier(const Symbol& phi, int K, int dim) {
  check_K(K);
  const IndexBlock blk = IndexBlock::periodic(dim, K);
  Eigen::VectorXcd d(ei(blk.size()));
  for (std::size_t p = 0; p < blk.size(); ++p) {
    const MultiIndex a = blk.representative(blk.index(p));
    const cplx val = phi.eval({static_cast<double>(a[0]), static_cast<double>(a[1])});
    if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
      throw NumericalError("spectral_multiplier: symbol '" + phi.name + "' is not finite at a required point");
    d(ei(p)) = val;
  }
  OpMatrix m = OpMatrix::diagonal(blk, d);
  m.hints().hermitian = d.imag().cwiseAbs().maxCoeff() == 0.0;
  return m;
}

ComposedMatrix compose_pseudo_spectral(const std::vector<SpectralFactor>& factors, int K, int dim) {
  if (factors.empty()) throw Error("compose_pseudo_spectral: empty factor list");
  std::optional<OpMatrix> acc;
  double order = 0.0;
  for (const auto& f : factors) {
    OpMatrix m = std::visit(
        [&](const auto& factor) -> OpMatrix {
          using T = std::decay_t<decltype(factor)>;
          if constexpr (std::is_same_v<T, Symbol>) {
            order += factor.declared_order;
            return spectral_multiplier(factor, K, dim);
          } else if constexpr (std::is_same_v<T, Potential>) {
            return mult_matrix_fourier(factor, K, dim);
          } else {
            order += 1.0;
            return fd_symbol(factor.axis, factor.sign, K, dim);
          }
        },
        f);
    acc = acc ? matmul(*acc, m) : std::move(m);
  }
  return {std::move(*acc), order};
}

void write_grid_csv(const GridFunction& u, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error("write_grid_csv: cannot open " + path.string());
  os << (u.dim == 1 ? "a1,re,im\n" : "a1,a2,re,im\n");
  os << std::setprecision(17);
  const IndexBlock blk = u.block();
  for (std::size_t p = 0; p < blk.size(); ++p) {
    const MultiIndex a = blk.index(p);
    os << a[0] << ',';
    if (u.dim == 2) os << a[1] << ',';
    os << u.values(ei(p)).real() << ',' << u.values(ei(p)).imag() << '\n';
  }
}

GridFunction read_grid_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("read_grid_csv: cannot open " + path.string());
  std::string header;
  std::getline(is, header);
  int dim = 0;
  if (header == "a1,re,im")
    dim = 1;
  else if (header == "a1,a2,re,im")
    dim = 2;
  else
    throw Error("read_grid_csv: unrecognized header '" + header + "'");

  std::vector<std::pair<MultiIndex, cplx>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != dim + 2) throw Error("read_grid_csv: malformed row '" + line + "'");
    MultiIndex a{std::stoi(cells[0]), dim == 2 ? std::stoi(cells[1]) : 0};
    rows.emplace_back(a, cplx{std::stod(cells[static_cast<std::size_t>(dim)]), std::stod(cells[static_cast<std::size_t>(dim) + 1])});
  }
  int K = static_cast<int>(std::lround(std::pow(static_cast<double>(rows.size()), 1.0 / dim)));
  GridFunction g = GridFunction::zeros(K, dim);
  if (g.block().size() != rows.size()) throw Error("read_grid_csv: row count is not K^d");
  for (const auto& [a, v] : rows) g.values(ei(g.block().position(a))) = v;
  return g;
}

}  // namespace pdm
