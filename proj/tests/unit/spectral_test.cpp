#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "pdm/catalog.hpp"
#include "pdm/operators.hpp"
#include "pdm/periodic.hpp"
#include "pdm/spectral.hpp"

namespace pdm {
namespace {

using std::numbers::pi;

GridFunction random_grid(int K, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  GridFunction u = GridFunction::zeros(K, dim);
  for (Eigen::Index i = 0; i < u.values.size(); ++i) u.values(i) = {g(rng), g(rng)};
  return u;
}

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

TEST(Dft, ConstantGoesToZeroFrequency) {
  for (int dim : {1, 2}) {
    GridFunction u = GridFunction::zeros(8, dim);
    u.values.setOnes();
    const GridFunction f = dft(u);
    EXPECT_NEAR(std::abs(f.values(0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(f.values.tail(f.values.size() - 1).cwiseAbs().maxCoeff(), 0.0, 1e-15);
  }
}

TEST(Dft, CharacterGoesToFrequencyOne) {
  const int K = 16;
  const GridFunction u = GridFunction::sample(K, 1, [](const Point& x) { return std::polar(1.0, x[0]); });
  const GridFunction f = dft(u);
  for (int a = 0; a < K; ++a) EXPECT_NEAR(std::abs(f.values(a) - (a == 1 ? 1.0 : 0.0)), 0.0, 1e-14);
}

TEST(Dft, FastMatchesDirectSum) {
  for (int dim : {1, 2}) {
    for (int K : {4, 8, 16, 32}) {
      const GridFunction u = random_grid(K, dim, 3);
      EXPECT_LT((dft(u).values - dft_direct(u).values).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT((idft(u).values - idft_direct(u).values).cwiseAbs().maxCoeff(), 1e-11);
    }
  }
}

TEST(Dft, ScaledTransformIsUnitary) {
  for (int K : {4, 8, 16, 32, 64, 128}) {
    const Eigen::MatrixXcd q = std::sqrt(double(K)) * dft_matrix(K, 1);
    const auto n = q.rows();
    EXPECT_LT(max_diff(q.adjoint() * q, Eigen::MatrixXcd::Identity(n, n)), 1e-12) << K;
  }
  for (int K : {4, 8, 16}) {
    const Eigen::MatrixXcd q = double(K) * dft_matrix(K, 2);
    const auto n = q.rows();
    EXPECT_LT(max_diff(q.adjoint() * q, Eigen::MatrixXcd::Identity(n, n)), 1e-12) << K;
  }
  const GridFunction u = random_grid(64, 1, 9);
  EXPECT_NEAR(std::sqrt(64.0) * dft(u).values.norm(), u.values.norm(), 1e-12 * u.values.norm());
}

TEST(Dft, RoundTrips) {
  for (int K : {8, 16, 32, 64, 128, 256}) {
    const GridFunction u = random_grid(K, 1, static_cast<std::uint64_t>(K));
    EXPECT_LT((idft(dft(u)).values - u.values).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((dft(idft(u)).values - u.values).cwiseAbs().maxCoeff(), 1e-12);
  }
  for (int K : {8, 16, 32, 64}) {
    const GridFunction u = random_grid(K, 2, static_cast<std::uint64_t>(K));
    EXPECT_LT((idft(dft(u)).values - u.values).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(FiniteDifference, ConstantsAndStencil) {
  const OpMatrix dp = fd_matrix(0, Sign::Plus, 8);
  EXPECT_LT((dp.entries() * Eigen::VectorXcd::Ones(8)).cwiseAbs().maxCoeff(), 1e-13);

  const double h = pi / 2.0;
  Eigen::VectorXcd u(4);
  u << 0.0, 1.0, 2.0, 3.0;
  Eigen::VectorXcd want(4);
  want << 1.0 / h, 1.0 / h, 1.0 / h, -3.0 / h;
  EXPECT_LT((fd_matrix(0, Sign::Plus, 4).entries() * u - want).cwiseAbs().maxCoeff(), 1e-15);
  Eigen::VectorXcd back(4);
  back << -3.0 / h, 1.0 / h, 1.0 / h, 1.0 / h;
  EXPECT_LT((fd_matrix(0, Sign::Minus, 4).entries() * u - back).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(FiniteDifference, SymbolValues) {
  const OpMatrix d = fd_symbol(0, Sign::Plus, 4);
  EXPECT_EQ(d.at({0, 0}, {0, 0}), cplx{});
  const cplx want = (cplx{0.0, 1.0} - 1.0) * (2.0 / pi);
  EXPECT_NEAR(std::abs(d.at({1, 0}, {1, 0}) - want), 0.0, 1e-15);
  EXPECT_TRUE(diagonal_check(d));
}

TEST(FiniteDifference, ConjugationIdentity) {
  for (int K : {4, 8, 16, 32, 64, 128}) {
    const Eigen::MatrixXcd f = dft_matrix(K, 1), fi = idft_matrix(K, 1);
    for (Sign s : {Sign::Plus, Sign::Minus})
      EXPECT_LT(max_diff(fd_matrix(0, s, K).entries(), fi * fd_symbol(0, s, K).entries() * f), 1e-12) << K;
  }
  for (int K : {4, 8, 16}) {
    const Eigen::MatrixXcd f = dft_matrix(K, 2), fi = idft_matrix(K, 2);
    for (int axis : {0, 1})
      for (Sign s : {Sign::Plus, Sign::Minus})
        EXPECT_LT(max_diff(fd_matrix(axis, s, K, 2).entries(), fi * fd_symbol(axis, s, K, 2).entries() * f), 1e-12)
            << K << " axis " << axis;
  }
}

TEST(FiniteDifference, SymbolFamilyOrderOneGridMatrixNot) {
  const auto o = OrderOptions::defaults(1);
  PeriodicFamily sym{"D+", [](int K) { return fd_symbol(0, Sign::Plus, K); }, {16, 32, 64, 128}};
  PeriodicFamily grid{"delta+", [](int K) { return fd_matrix(0, Sign::Plus, K); }, {16, 32, 64, 128}};
  EXPECT_LE(family_order(sym, o).r_hat, 1.0);
  EXPECT_FALSE(family_order(grid, o).certified());
  EXPECT_LE(dnorm(sym, {{1, 0}, 0, 1.0}), 2.0);
}

TEST(Multiplier, ConstantAndCos) {
  const OpMatrix one = mult_matrix_fourier(catalog::constant(1.0), 8);
  EXPECT_LT(max_diff(one.entries(), Eigen::MatrixXcd::Identity(8, 8)), 1e-15);

  const OpMatrix c = mult_matrix_fourier(catalog::cos_potential(), 8);
  const auto blk = c.block();
  for (std::size_t p = 0; p < blk.size(); ++p)
    for (std::size_t q = 0; q < blk.size(); ++q) {
      const double want = blk.dist(blk.index(p), blk.index(q)) == 1 ? 0.5 : 0.0;
      EXPECT_NEAR(std::abs(c(p, q) - want), 0.0, 1e-15);
    }
}

TEST(Multiplier, ExponentialDecayAliasSum) {
  const int K = 16;
  const OpMatrix m = mult_matrix_fourier(catalog::exp_decay(1.0), K);
  double want = 0.0;
  for (int l = -10; l <= 10; ++l) want += std::exp(-std::abs(1.0 + K * l));
  EXPECT_NEAR(std::abs(m.at({1, 0}, {0, 0}) - want), 0.0, 1e-12);
}

TEST(Multiplier, SampleRouteEqualsAliasRoute) {
  for (int K : {16, 32, 64}) {
    const Potential v = catalog::exp_decay(1.0);
    EXPECT_LT(max_diff(mult_matrix_fourier(v, K).entries(), mult_matrix_fourier_alias(v, K).entries()), 1e-10) << K;
  }
  const Potential c = catalog::cos_potential(0.7);
  EXPECT_LT(max_diff(mult_matrix_fourier(c, 8, 2).entries(), mult_matrix_fourier_alias(c, 8, 2).entries()), 1e-12);
}

TEST(Multiplier, GridConjugation) {
  const int K = 32;
  const Potential v = catalog::cos_potential();
  const GridFunction samples = GridFunction::sample(K, 1, v.value);
  const GridFunction u = random_grid(K, 1, 17);
  const GridFunction lhs = mult_grid(samples, u);
  const Eigen::VectorXcd rhs = idft_matrix(K, 1) * mult_matrix_fourier(v, K).entries() * dft_matrix(K, 1) * u.values;
  EXPECT_LT((lhs.values - rhs).cwiseAbs().maxCoeff(), 1e-12);

  GridFunction two = GridFunction::zeros(K, 1);
  two.values.setConstant(2.0);
  EXPECT_LT((mult_grid(two, u).values - 2.0 * u.values).cwiseAbs().maxCoeff(), 1e-15);
  two.values.setConstant(1.0);
  EXPECT_EQ(mult_grid(two, u).values, u.values);
  EXPECT_THROW(mult_grid(two, random_grid(16, 1, 1)), Error);
}

TEST(Multiplier, DecayConstantsStable) {
  const Potential v = catalog::exp_decay(1.0);
  for (int N : {2, 4, 8}) {
    std::vector<double> c;
    for (int K : {16, 32, 64, 128}) {
      const OpMatrix m = mult_matrix_fourier(v, K);
      const auto& blk = m.block();
      double sup = 0.0;
      for (std::size_t p = 0; p < blk.size(); ++p)
        for (std::size_t q = 0; q < blk.size(); ++q)
          sup = std::max(sup, std::abs(m(p, q)) * std::pow(1.0 + blk.dist(blk.index(p), blk.index(q)), N));
      c.push_back(sup);
    }
    for (double x : c) EXPECT_LE(x, 2.0 * c.front()) << "N=" << N;
  }
}

TEST(SpectralMultiplier, Values) {
  EXPECT_LT(max_diff(spectral_multiplier(catalog::polynomial({1.0}), 8).entries(), Eigen::MatrixXcd::Identity(8, 8)), 1e-15);
  const OpMatrix sq = spectral_multiplier(catalog::abs_power(2.0), 8);
  EXPECT_EQ(sq.at({-3, 0}, {-3, 0}), cplx(9.0));
  EXPECT_EQ(sq.at({5, 0}, {5, 0}), cplx(9.0));  // residue 5 represents -3
  const OpMatrix om = spectral_multiplier(catalog::waterwave_omega(1.0), 8);
  const double omega = om.at({2, 0}, {2, 0}).real();
  EXPECT_NEAR(omega * omega, 2.0 * std::tanh(2.0), 1e-14);

  Symbol bad{"bad", [](const Point& x) { return cplx(1.0 / x[0]); }, 0.0};
  EXPECT_THROW(spectral_multiplier(bad, 8), NumericalError);
}

TEST(Composition, IdentityFactor) {
  const ComposedMatrix c = compose_pseudo_spectral({catalog::polynomial({1.0})}, 16);
  EXPECT_LT(max_diff(c.matrix.entries(), Eigen::MatrixXcd::Identity(16, 16)), 1e-15);
  EXPECT_EQ(c.predicted_order, 0.0);
  EXPECT_THROW(compose_pseudo_spectral({}, 16), Error);
}

TEST(Composition, DivergenceFormIsOrderTwoAndHermitian) {
  auto gen = [](int K) {
    return compose_pseudo_spectral({FdFactor{0, Sign::Plus}, catalog::cos_potential(), FdFactor{0, Sign::Minus}}, K);
  };
  EXPECT_EQ(gen(16).predicted_order, 2.0);
  PeriodicFamily f{"D+ M_b D-", [&](int K) { return gen(K).matrix; }, {16, 32, 64, 128}};
  EXPECT_LE(family_order(f, OrderOptions::defaults(1)).r_hat, 2.0);
  for (int K : {16, 64}) EXPECT_TRUE(hermitian_check(gen(K).matrix));
}

TEST(GridCsv, RoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "pdm_spectral_test";
  std::filesystem::create_directories(dir);
  for (int dim : {1, 2}) {
    const GridFunction u = random_grid(8, dim, 5);
    const auto path = dir / ("grid" + std::to_string(dim) + ".csv");
    write_grid_csv(u, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, dim == 1 ? "a1,re,im" : "a1,a2,re,im");
    const GridFunction back = read_grid_csv(path);
    EXPECT_EQ(back.K, 8);
    EXPECT_EQ(back.dim, dim);
    EXPECT_EQ(back.values, u.values);
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace pdm
