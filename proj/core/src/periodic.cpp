#include "pdm/periodic.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pdm/rough_data.hpp"

namespace pdm {

namespace {

Eigen::Index ei(std::size_t p) { return static_cast<Eigen::Index>(p); }

}  // namespace

BracketScan scan_bracket_inequalities(int K, int dim) {
  const IndexBlock blk = IndexBlock::periodic(dim, K);
  const std::size_t n = blk.size();
  BracketScan scan;
  scan.K = K;
  scan.dim = dim;
  std::vector<MultiIndex> idx(n);
  for (std::size_t p = 0; p < n; ++p) idx[p] = blk.index(p);
  const std::vector<int>& norm = blk.norms();

  // diff[c * n + b] = [c - b]
  std::vector<int> diff(n * n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t b = 0; b < n; ++b) diff[c * n + b] = bracket(idx[c] - idx[b], K, dim);

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (bracket(idx[a] + idx[b], K, dim) > norm[a] + norm[b]) ++scan.triangle_violations;
  scan.triangle_checked = n * n;

  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t b = 0; b < n; ++b) {
      const long factor = 2L * (1 + diff[c * n + b]);
      std::size_t bad = 0;
      for (std::size_t a = 0; a < n; ++a) bad += (1L + norm[a] + norm[c] > factor * (1L + norm[a] + norm[b])) ? 1 : 0;
      scan.peetre_violations += bad;
    }
  }
  scan.peetre_checked = n * n * n;
  return scan;
}

OpMatrix PeriodicFamily::at(int K) const {
  if (!generator) throw Error("PeriodicFamily '" + label + "': no generator");
  OpMatrix m = generator(K);
  if (!m.block().is_periodic() || m.block().extent() != K)
    throw Error("PeriodicFamily '" + label + "': generator returned " + m.block().describe() + " for K=" + std::to_string(K));
  return m;
}

std::vector<OpMatrix> PeriodicFamily::members() const {
  std::vector<OpMatrix> out;
  out.reserve(K_list.size());
  for (int K : K_list) out.push_back(at(K));
  return out;
}

double dnorm(const PeriodicFamily& family, const SeminormSpec& spec) {
  if (family.K_list.empty()) throw Error("dnorm: empty K_list");
  double best = 0.0;
  for (int K : family.K_list) best = std::max(best, seminorm(family.at(K), spec));
  return best;
}

namespace {

PeriodicFamily pointwise(const PeriodicFamily& a, const PeriodicFamily& b, const char* op, OpMatrix (*fn)(const OpMatrix&, const OpMatrix&)) {
  if (a.K_list != b.K_list) throw Error(std::string("family_") + op + ": K_list mismatch");
  PeriodicFamily out;
  out.label = std::string(op) + "(" + a.label + ", " + b.label + ")";
  out.K_list = a.K_list;
  out.generator = [ga = a.generator, gb = b.generator, fn](int K) { return fn(ga(K), gb(K)); };
  return out;
}

}  // namespace

PeriodicFamily family_product(const PeriodicFamily& a, const PeriodicFamily& b) { return pointwise(a, b, "product", &matmul); }

PeriodicFamily family_commutator(const PeriodicFamily& a, const PeriodicFamily& b) {
  return pointwise(a, b, "commutator", &commutator);
}

OrderEstimate family_order(const PeriodicFamily& family, const OrderOptions& options) {
  const auto members = family.members();
  return estimate_order(members, options);
}

OpMatrix embed(const OpMatrix& ak, int radius) {
  const IndexBlock& src = ak.block();
  if (!src.is_periodic()) throw Error("embed: expected a periodic matrix");
  if (!ak.fully_defined()) throw Error("embed: masked operand");
  const int K = src.extent();
  if (radius < 0) radius = K / 2;
  if (radius < K / 2) throw Error("embed: radius must be at least K/2");
  const IndexBlock dst = IndexBlock::truncated(src.dim(), radius);

  // Position in dst of each residue's representative in G_K.
  std::vector<std::size_t> where(src.size());
  for (std::size_t p = 0; p < src.size(); ++p) where[p] = dst.position(src.representative(src.index(p)));

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ei(dst.size()), ei(dst.size()));
  for (std::size_t q = 0; q < src.size(); ++q)
    for (std::size_t p = 0; p < src.size(); ++p) out(ei(where[p]), ei(where[q])) = ak(p, q);
  StructureHints h;
  h.diagonal = ak.hints().diagonal;
  h.hermitian = ak.hints().hermitian;
  return OpMatrix(dst, std::move(out), h);
}

double weighted_operator_norm(const Eigen::MatrixXcd& e, const Eigen::VectorXd& base, double s_out, double s_in) {
  if (e.rows() != e.cols() || e.rows() != base.size()) throw Error("weighted_operator_norm: size mismatch");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < base.size(); ++i)
    if (base(i) > 0.0) keep.push_back(i);
  const auto n = static_cast<Eigen::Index>(keep.size());
  if (n == 0) return 0.0;
  Eigen::MatrixXcd w(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const double win = std::pow(base(keep[static_cast<std::size_t>(c)]), -s_in);
    for (Eigen::Index r = 0; r < n; ++r)
      w(r, c) = std::pow(base(keep[static_cast<std::size_t>(r)]), s_out) * e(keep[static_cast<std::size_t>(r)], keep[static_cast<std::size_t>(c)]) * win;
  }
  if (w.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(w);
  return svd.singularValues()(0);
}

ApproxTable approx_error(const std::string& probe, const OpMatrix& limit, const PeriodicFamily& family, double s,
                         double s_prime, std::uint64_t seed, int samples) {
  const IndexBlock& blk = limit.block();
  if (blk.is_periodic()) throw Error("approx_error: the limit matrix must be truncated");
  if (family.K_list.empty()) throw Error("approx_error: empty K_list");
  Eigen::VectorXd base(ei(blk.size()));
  for (std::size_t p = 0; p < blk.size(); ++p) base(ei(p)) = 1.0 + blk.norm_at(p);

  std::vector<Eigen::VectorXcd> data;
  for (int i = 0; i < samples; ++i) data.push_back(rough_data(blk, s, seed + static_cast<std::uint64_t>(i)));

  ApproxTable table;
  std::vector<double> ks, errs;
  for (int K : family.K_list) {
    if (2 * blk.extent() < K) throw Error("approx_error: limit radius is smaller than K/2 for K=" + std::to_string(K));
    const Eigen::MatrixXcd e = limit.entries() - embed(family.at(K), blk.extent()).entries();
    ApproxRow row{probe, K, s, s_prime, weighted_operator_norm(e, base, s_prime, s), 0.0};
    for (const auto& x : data) {
      const double den = weighted_norm(x, base, s);
      row.data_error = std::max(row.data_error, weighted_norm(e * x, base, s_prime) / den);
    }
    ks.push_back(K);
    errs.push_back(row.error);
    table.rows.push_back(row);
  }
  table.fit = fit_loglog(ks, errs);
  return table;
}

void write_approx_csv(const ApproxTable& table, std::ostream& os, bool header) {
  if (header) os << "probe,K,s,s_prime,error,fitted_rate\n";
  for (const auto& r : table.rows)
    os << r.probe << ',' << r.K << ',' << r.s << ',' << r.s_prime << ',' << r.error << ',' << table.rate() << '\n';
}

}  // namespace pdm
