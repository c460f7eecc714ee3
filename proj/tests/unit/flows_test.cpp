#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "pdm/catalog.hpp"
#include "pdm/flows.hpp"
#include "pdm/operators.hpp"
#include "pdm/periodic.hpp"
#include "pdm/rough_data.hpp"
#include "pdm/spectral.hpp"

namespace pdm {
namespace {

Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  return h / h.norm();
}

TEST(Flow, TimeZeroIsIdentity) {
  const auto blk = IndexBlock::truncated(1, 8);
  const OpMatrix a = fourier_multiplier(catalog::abs_power(2.0), blk) + toeplitz_potential(catalog::cos_potential(), blk);
  const Flow f = Flow::of(a, FlowStructure::Hermitian);
  EXPECT_LT((f.propagator(0.0) - Eigen::MatrixXcd::Identity(17, 17)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Flow, SquareSymbolAtPi) {
  const auto blk = IndexBlock::truncated(1, 6);
  const Flow f = Flow::of(fourier_multiplier(catalog::abs_power(2.0), blk), FlowStructure::Diagonal);
  const Eigen::MatrixXcd u = f.propagator(std::numbers::pi);
  for (std::size_t p = 0; p < blk.size(); ++p) {
    const int m = blk.index(p)[0];
    const auto i = static_cast<Eigen::Index>(p);
    EXPECT_NEAR(u(i, i).real(), m % 2 == 0 ? 1.0 : -1.0, 1e-12);
    EXPECT_NEAR(u(i, i).imag(), 0.0, 1e-12);
  }
}

TEST(Flow, HermitianIsUnitaryAndMatchesExpm) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXcd h = 5.0 * random_hermitian(12, rng);
  const Flow f(h, FlowStructure::Hermitian, FlowScale::Imaginary);
  for (double t : {0.1, 1.0, 7.0}) {
    const Eigen::MatrixXcd u = f.propagator(t);
    EXPECT_LE(unitarity_defect(u), 1e-10);
    const Eigen::MatrixXcd ref = (cplx{0.0, t} * h).exp();
    EXPECT_LT((u - ref).cwiseAbs().maxCoeff(), 1e-11);
  }
}

TEST(Flow, StructureClaimsVerified) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXcd h = random_hermitian(5, rng);
  EXPECT_THROW(Flow(h, FlowStructure::Diagonal, FlowScale::Imaginary), Error);
  EXPECT_THROW(Flow(cplx{0.0, 1.0} * h, FlowStructure::Hermitian, FlowScale::Imaginary), Error);
  EXPECT_THROW(Flow(h, FlowStructure::Nilpotent, FlowScale::Real), Error);
  Eigen::MatrixXcd nil = Eigen::MatrixXcd::Zero(2, 2);
  nil(0, 1) = 3.0;
  const Flow n(nil, FlowStructure::Nilpotent, FlowScale::Real);
  EXPECT_EQ(n.propagator(2.0)(0, 1), cplx(6.0));
  EXPECT_EQ(n.propagator(2.0)(0, 0), cplx(1.0));
}

TEST(Flow, BlockPairMatchesGeneric) {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(6, 6);
  g(0, 3) = 1.0;
  g(3, 0) = -2.0;
  g(1, 4) = 0.5;
  g(4, 1) = 0.5;
  g(2, 2) = -1.0;
  g(5, 5) = 0.25;
  const Flow bp(g, FlowStructure::BlockPair, FlowScale::Real);
  const Flow gen(g, FlowStructure::Generic, FlowScale::Real);
  EXPECT_LT((bp.propagator(0.7) - gen.propagator(0.7)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Split, CommutingPairIsExact) {
  const auto blk = IndexBlock::truncated(1, 10);
  const OpMatrix a = fourier_multiplier(catalog::abs_power(2.0), blk);
  const OpMatrix b = fourier_multiplier(catalog::japanese(1.0), blk);
  const Flow fa = Flow::of(a, FlowStructure::Diagonal), fb = Flow::of(b, FlowStructure::Diagonal);
  const Flow ex = Flow::of(a + b, FlowStructure::Diagonal);
  for (int k : {1, 2, 4}) {
    const Eigen::MatrixXcd e = split_step(composition_scheme(k), fa, fb, 0.3) - ex.propagator(0.3);
    EXPECT_LT(e.cwiseAbs().maxCoeff(), 1e-12) << "k=" << k;
  }
}

TEST(Split, ZeroStepIsIdentity) {
  std::mt19937_64 rng(5);
  const Flow a(random_hermitian(6, rng), FlowStructure::Hermitian, FlowScale::Imaginary);
  const Flow b(random_hermitian(6, rng), FlowStructure::Hermitian, FlowScale::Imaginary);
  for (int k : {1, 2, 4})
    EXPECT_LT((split_step(composition_scheme(k), a, b, 0.0) - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Split, SchemesAndValidation) {
  EXPECT_THROW(composition_scheme(3), Error);
  EXPECT_THROW(composition_scheme(0), Error);
  const SplitScheme tj = composition_scheme(4);
  EXPECT_EQ(tj.order, 4);
  EXPECT_NO_THROW(tj.validate());
  double wa = 0.0, wb = 0.0;
  for (const auto& st : tj.stages) (st.slot == Slot::A ? wa : wb) += st.weight;
  EXPECT_NEAR(wa, 1.0, 1e-14);
  EXPECT_NEAR(wb, 1.0, 1e-14);
  SplitScheme bad{"bad", 1, {{Slot::A, 1.0}, {Slot::B, 0.5}}};
  EXPECT_THROW(bad.validate(), Error);
  EXPECT_EQ(SplitScheme::lie().stages.front().slot, Slot::B);
  EXPECT_EQ(SplitScheme::lie().swapped().stages.front().slot, Slot::A);
}

// Local error of a p-th order scheme on a bounded pair scales like tau^{p+1}.
TEST(Split, BoundedPairLocalOrders) {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXcd ha = random_hermitian(8, rng), hb = random_hermitian(8, rng);
  const Flow a(ha, FlowStructure::Hermitian, FlowScale::Imaginary);
  const Flow b(hb, FlowStructure::Hermitian, FlowScale::Imaginary);
  const Flow ex(ha + hb, FlowStructure::Hermitian, FlowScale::Imaginary);
  const NormBase base = Eigen::VectorXd::Ones(8);
  std::vector<Eigen::VectorXcd> data;
  for (int i = 0; i < 3; ++i) data.push_back(Eigen::VectorXcd::Random(8));
  const auto taus = geometric_taus(0.2, 0.5, 5);
  const double want[] = {2.0, 3.0, 5.0};
  int i = 0;
  for (int k : {1, 2, 4}) {
    const LocalErrorTable t = local_error(composition_scheme(k), a, b, ex, taus, 0.0, data, base);
    EXPECT_NEAR(t.tau_order(), want[i], 0.4) << "k=" << k;
    ++i;
  }
}

TEST(Split, LieOnLaplacianPlusCos) {
  const auto blk = IndexBlock::truncated(1, 32);
  const Flow a = Flow::of(fourier_multiplier(catalog::abs_power(2.0), blk), FlowStructure::Diagonal);
  const OpMatrix v = toeplitz_potential(catalog::cos_potential(), blk);
  const Flow b = Flow::of(v, FlowStructure::Hermitian);
  const Flow ex = Flow::of(fourier_multiplier(catalog::abs_power(2.0), blk) + v, FlowStructure::Hermitian);
  const NormBase base = norm_base(blk);
  std::vector<Eigen::VectorXcd> data{smooth_data(blk, 1.0, 1), smooth_data(blk, 1.0, 2)};
  const LocalErrorTable t = local_error(SplitScheme::lie(), a, b, ex, geometric_taus(0.02, 0.5, 6), 0.0, data, base);
  EXPECT_NEAR(t.tau_order(), 2.0, 0.25);
}

TEST(Split, ZeroCouplingHasNoOrder) {
  const auto blk = IndexBlock::truncated(1, 8);
  const OpMatrix a = fourier_multiplier(catalog::abs_power(2.0), blk);
  const Flow fa = Flow::of(a, FlowStructure::Diagonal);
  const Flow fb = Flow::of(OpMatrix::zero(blk), FlowStructure::Diagonal);
  const LocalErrorTable t =
      local_error(SplitScheme::strang(), fa, fb, fa, geometric_taus(), 1.0, {smooth_data(blk, 0.5, 3)}, norm_base(blk));
  for (const auto& r : t.rows) EXPECT_LE(r.error, 1e-12);
  EXPECT_TRUE(t.order_undefined);
}

TEST(Split, LocalErrorRejectsEmptyInputs) {
  const auto blk = IndexBlock::truncated(1, 4);
  const Flow f = Flow::of(OpMatrix::zero(blk), FlowStructure::Diagonal);
  EXPECT_THROW(local_error(SplitScheme::lie(), f, f, f, {}, 0.0, {smooth_data(blk, 1.0, 1)}, norm_base(blk)), Error);
  EXPECT_THROW(local_error(SplitScheme::lie(), f, f, f, {0.1}, 0.0, {}, norm_base(blk)), Error);
}

TEST(Loss, CommutingPairHasNoLoss) {
  std::vector<LossLevel> levels;
  for (int M : {16, 32, 64}) {
    const auto blk = IndexBlock::truncated(1, M);
    const OpMatrix a = fourier_multiplier(catalog::abs_power(2.0), blk);
    const OpMatrix b = fourier_multiplier(catalog::japanese(1.0), blk);
    levels.push_back({M, Flow::of(a, FlowStructure::Diagonal), Flow::of(b, FlowStructure::Diagonal),
                      Flow::of(a + b, FlowStructure::Diagonal), norm_base(blk)});
  }
  const LossReport r = loss_estimator(SplitScheme::lie(), levels, 1.0, sigma_grid(1.0));
  EXPECT_TRUE(r.stabilized);
  EXPECT_EQ(r.sigma_hat, 0.0);
  EXPECT_THROW(loss_estimator(SplitScheme::lie(), {levels.front()}, 1.0, sigma_grid(1.0)), Error);
  EXPECT_THROW(loss_estimator(SplitScheme::lie(), levels, 1.0, {}), Error);
}

TEST(Loss, SigmaGrid) {
  const auto g = sigma_grid(3.0, 0.25);
  ASSERT_EQ(g.size(), 13u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 3.0);
}

TEST(Stability, ConstantUniformInSize) {
  std::vector<double> c;
  for (int M : {16, 32, 64}) {
    const auto blk = IndexBlock::truncated(1, M);
    const OpMatrix g = fourier_multiplier(catalog::abs_power(2.0), blk) + toeplitz_potential(catalog::cos_potential(), blk);
    c.push_back(flow_stability_constant(Flow::of(g, FlowStructure::Hermitian), norm_base(blk), 1.0));
  }
  for (double v : c) {
    EXPECT_GE(v, 1.0 - 1e-12);
    EXPECT_LE(v, 1.1 * c.front());
  }
}

TEST(Chebyshev, MatchesSpectralFlow) {
  const auto blk = IndexBlock::truncated(1, 24);
  const OpMatrix g = fourier_multiplier(catalog::abs_power(2.0), blk) + toeplitz_potential(catalog::exp_decay(1.0), blk);
  const Flow f = Flow::of(g, FlowStructure::Hermitian);
  const SparseMatrixXcd h = g.entries().sparseView();
  const Eigen::VectorXcd x = smooth_data(blk, 0.3, 7);
  for (double t : {0.0, 0.01, 0.5, -0.2, 3.0}) {
    const Eigen::VectorXcd y = chebyshev_expi(h, t, x);
    EXPECT_LE((y - f.apply(t, x)).norm(), 1e-11 * x.norm()) << "t=" << t;
  }
  EXPECT_THROW(chebyshev_expi(h, 1.0, Eigen::VectorXcd::Ones(3)), Error);
  EXPECT_THROW(chebyshev_expi(h, 1.0, x, 0.0), Error);
}

// Lie splitting of the same pair, once on a truncated block and once through
// the periodic grid multiplier embedded back: errors agree to 10%.
TEST(Consistency, PeriodicAndTruncatedErrorsAgree) {
  const int K = 64;
  const OpMatrix vp = embed(mult_matrix_fourier(catalog::cos_potential(), K));
  const auto& blk = vp.block();
  const OpMatrix vt = toeplitz_potential(catalog::cos_potential(), blk);
  const OpMatrix a = fourier_multiplier(catalog::abs_power(2.0), blk);
  const NormBase base = norm_base(blk);
  const std::vector<Eigen::VectorXcd> data{smooth_data(blk, 1.0, 4)};
  auto err = [&](const OpMatrix& v) {
    return local_error(SplitScheme::lie(), Flow::of(a, FlowStructure::Diagonal), Flow::of(v, FlowStructure::Hermitian),
                       Flow::of(a + v, FlowStructure::Hermitian), {0.05, 0.025}, 0.0, data, base);
  };
  const auto tp = err(vp), tt = err(vt);
  for (std::size_t i = 0; i < tp.rows.size(); ++i)
    EXPECT_NEAR(tp.rows[i].error, tt.rows[i].error, 0.1 * tt.rows[i].error);
}

}  // namespace
}  // namespace pdm
