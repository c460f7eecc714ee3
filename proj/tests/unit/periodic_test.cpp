#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pdm/catalog.hpp"
#include "pdm/operators.hpp"
#include "pdm/periodic.hpp"
#include "pdm/spectral.hpp"

namespace pdm {
namespace {

const std::vector<int> kFamilyK{16, 32, 64, 128};

PeriodicFamily dplus() {
  return {"D+", [](int K) { return fd_symbol(0, Sign::Plus, K); }, kFamilyK};
}
PeriodicFamily dminus() {
  return {"D-", [](int K) { return fd_symbol(0, Sign::Minus, K); }, kFamilyK};
}
PeriodicFamily mcos() {
  return {"Mcos", [](int K) { return mult_matrix_fourier(catalog::cos_potential(), K); }, kFamilyK};
}

// Independent bracket norm: representative in {-K/2..K/2-1} by explicit search.
int bracket_ref(int a, int K) {
  for (int r = -K / 2; r < K / 2; ++r)
    if (((a - r) % K + K) % K == 0) return std::abs(r);
  return -1;
}

TEST(Bracket, ExhaustiveInequalities) {
  for (int dim : {1, 2}) {
    for (int K : {4, 8, 16, 32}) {
      const BracketScan scan = scan_bracket_inequalities(K, dim);
      const auto n = static_cast<std::size_t>(std::pow(K, dim));
      EXPECT_EQ(scan.triangle_checked, n * n) << "K=" << K << " d=" << dim;
      EXPECT_EQ(scan.peetre_checked, n * n * n) << "K=" << K << " d=" << dim;
      EXPECT_TRUE(scan.ok()) << "K=" << K << " d=" << dim;
    }
  }
}

TEST(Bracket, MatchesSearchedRepresentative) {
  for (int K : {4, 8, 16}) {
    const auto blk = IndexBlock::periodic(1, K);
    for (std::size_t p = 0; p < blk.size(); ++p) {
      const int a = blk.index(p)[0];
      EXPECT_EQ(bracket(blk.index(p), K, 1), bracket_ref(a, K));
      EXPECT_EQ(blk.norm_at(p), bracket_ref(a, K));
    }
  }
}

TEST(Dnorm, ZeroFamily) {
  PeriodicFamily z{"zero", [](int K) { return OpMatrix::zero(IndexBlock::periodic(1, K)); }, kFamilyK};
  EXPECT_EQ(dnorm(z, {{0, 0}, 2, 0.0}), 0.0);
}

TEST(Dnorm, ForwardDifferenceBoundedByBracket) {
  EXPECT_LE(dnorm(dplus(), {{0, 0}, 0, 1.0}), 1.0);
}

TEST(Dnorm, CosMultiplierNonIncreasing) {
  const SeminormSpec spec{{0, 0}, 4, 0.0};
  double prev = std::numeric_limits<double>::infinity();
  for (int K : kFamilyK) {
    const double v = seminorm(mcos().at(K), spec);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_LE(v, prev * (1.0 + 1e-12));
    prev = v;
  }
  EXPECT_TRUE(std::isfinite(dnorm(mcos(), spec)));
}

TEST(Dnorm, RejectsEmptyFamily) {
  PeriodicFamily e{"empty", [](int K) { return OpMatrix::zero(IndexBlock::periodic(1, K)); }, {}};
  EXPECT_THROW(dnorm(e, {}), Error);
}

TEST(Family, GeneratorMustMatchPeriod) {
  PeriodicFamily bad{"bad", [](int) { return OpMatrix::zero(IndexBlock::periodic(1, 8)); }, {16}};
  EXPECT_THROW(bad.at(16), Error);
}

TEST(Family, ProductWithIdentity) {
  PeriodicFamily id{"id", [](int K) { return OpMatrix::identity(IndexBlock::periodic(1, K)); }, kFamilyK};
  const auto p = family_product(mcos(), id);
  for (int K : kFamilyK) EXPECT_LT((p.at(K).entries() - mcos().at(K).entries()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Family, DiagonalDifferencesCommute) {
  const auto c = family_commutator(dplus(), dminus());
  for (int K : kFamilyK) EXPECT_EQ(c.at(K).max_abs(), 0.0);
}

TEST(Family, MismatchedPeriodsRejected) {
  PeriodicFamily short_list{"s", [](int K) { return fd_symbol(0, Sign::Plus, K); }, {16, 32}};
  EXPECT_THROW(family_product(dplus(), short_list), Error);
}

TEST(Family, OrderArithmetic) {
  const auto o = OrderOptions::defaults(1);
  EXPECT_EQ(family_order(dplus(), o).r_hat, 1.0);
  EXPECT_EQ(family_order(mcos(), o).r_hat, 0.0);
  EXPECT_LE(family_order(family_product(dplus(), mcos()), o).r_hat, 1.0);
  EXPECT_LE(family_order(family_commutator(dplus(), mcos()), o).r_hat, 0.0);
}

TEST(Embed, ZeroAndDiagonal) {
  const OpMatrix z = embed(OpMatrix::zero(IndexBlock::periodic(1, 16)));
  EXPECT_EQ(z.block().mode(), BlockMode::Truncated);
  EXPECT_EQ(z.max_abs(), 0.0);

  const int K = 16;
  const OpMatrix dk = fd_symbol(0, Sign::Plus, K);
  const OpMatrix e = embed(dk);
  EXPECT_TRUE(diagonal_check(e));
  for (int a = -K / 2; a < K / 2; ++a) EXPECT_EQ(e.at({a, 0}, {a, 0}), dk.at({a, 0}, {a, 0}));
  EXPECT_EQ(e.at({K / 2, 0}, {K / 2, 0}), cplx{});
}

TEST(Embed, AliasingTailClosedForm) {
  const Potential v = catalog::cos_potential();
  for (int K : {8, 16, 32, 64}) {
    const OpMatrix e = embed(mult_matrix_fourier(v, K));
    const OpMatrix bv = toeplitz_potential(v, e.block());
    for (int m = -K / 2; m < K / 2; ++m)
      for (int n = -K / 2; n < K / 2; ++n) {
        cplx tail{};
        for (int l = -3; l <= 3; ++l)
          if (l != 0) tail += v.coeff({m - n + l * K, 0});
        EXPECT_NEAR(std::abs(e.at({m, 0}, {n, 0}) - bv.at({m, 0}, {n, 0}) - tail), 0.0, 1e-14);
      }
  }
}

TEST(Embed, AliasingDoesNotVanishAtCorner) {
  const Potential v = catalog::cos_potential();
  for (int K : {16, 32, 64, 128}) {
    const OpMatrix e = embed(mult_matrix_fourier(v, K));
    const OpMatrix bv = toeplitz_potential(v, e.block());
    const MultiIndex m{-K / 2, 0}, n{K / 2 - 1, 0};
    EXPECT_NEAR(std::abs(e.at(m, n) - bv.at(m, n)), std::abs(v.coeff({1, 0})), 1e-14);
  }
}

TEST(Approx, ExactAtItsOwnPeriod) {
  const int K = 32;
  const OpMatrix limit = embed(mult_matrix_fourier(catalog::exp_decay(1.0), K));
  PeriodicFamily f{"exp", [](int k) { return mult_matrix_fourier(catalog::exp_decay(1.0), k); }, {K}};
  const ApproxTable t = approx_error("self", limit, f, 2.0, 1.0, 1);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].error, 0.0);
  EXPECT_FALSE(t.fit.defined());
}

TEST(Approx, FiniteDifferenceRateIsOne) {
  const OpMatrix limit = fourier_multiplier(catalog::derivative(), IndexBlock::truncated(1, 128));
  const ApproxTable t = approx_error("fd", limit, dplus(), 3.0, 1.0, 1);
  ASSERT_EQ(t.rows.size(), kFamilyK.size());
  EXPECT_NEAR(t.rate(), 1.0, 0.25);
  for (const auto& r : t.rows) EXPECT_LE(r.data_error, r.error * (1.0 + 1e-12));
}

TEST(Approx, MultiplicationRateIsDerivativeGap) {
  const OpMatrix limit = toeplitz_potential(catalog::cos_potential(), IndexBlock::truncated(1, 128));
  const ApproxTable t = approx_error("mult", limit, mcos(), 4.0, 2.0, 1);
  EXPECT_NEAR(t.rate(), 2.0, 0.25);
}

TEST(Approx, LimitTooSmallRejected) {
  const OpMatrix limit = toeplitz_potential(catalog::cos_potential(), IndexBlock::truncated(1, 32));
  EXPECT_THROW(approx_error("mult", limit, mcos(), 4.0, 2.0, 1), Error);
}

TEST(Approx, CsvHeaderAndRows) {
  const OpMatrix limit = toeplitz_potential(catalog::cos_potential(), IndexBlock::truncated(1, 64));
  PeriodicFamily f{"Mcos", [](int K) { return mult_matrix_fourier(catalog::cos_potential(), K); }, {16, 32, 64}};
  const ApproxTable t = approx_error("mult", limit, f, 4.0, 2.0, 1);
  std::ostringstream os;
  write_approx_csv(t, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "probe,K,s,s_prime,error,fitted_rate");
  int rows = 0;
  while (std::getline(is, line)) {
    EXPECT_EQ(line.rfind("mult,", 0), 0u);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}

// Operator bound ||A^K x||_{s-r,K} <= C ||A^K|| ||x||_{s,K}: the ratio of
// the exact operator norm to the seminorm, measured at K = 16, stays valid.
void expect_stable_constant(const PeriodicFamily& f, double r, double s) {
  const int N = static_cast<int>(std::ceil(std::abs(s) + std::abs(r))) + 2;
  std::vector<double> c;
  for (int K : f.K_list) {
    const OpMatrix a = f.at(K);
    const Eigen::VectorXd base = sobolev_weights(a.block(), 1.0);
    c.push_back(weighted_operator_norm(a.entries(), base, s - r, s) / seminorm(a, {{0, 0}, N, r}));
  }
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LE(c[i], 1.1 * c[0]) << f.label << " K=" << f.K_list[i];
}

TEST(OperatorBound, ConstantFromSmallestPeriodHolds) {
  expect_stable_constant(dplus(), 1.0, 1.0);
  expect_stable_constant(dplus(), 1.0, 2.5);
  expect_stable_constant(mcos(), 0.0, 1.0);
  expect_stable_constant(mcos(), 0.0, -1.5);
}

}  // namespace
}  // namespace pdm
