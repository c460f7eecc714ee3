#include "pdm/flows.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <random>

#include "pdm/periodic.hpp"

namespace pdm {

struct Flow::Impl {
  Eigen::MatrixXcd gen;
  FlowStructure structure;
  FlowScale scale;
  Eigen::VectorXcd diag;
  Eigen::MatrixXcd basis;
  Eigen::VectorXd eigenvalues;
  std::vector<std::vector<Eigen::Index>> components;
};

namespace {

double scale_of(const Eigen::MatrixXcd& g) { return std::max(g.size() ? g.cwiseAbs().maxCoeff() : 0.0, 1.0); }

std::vector<std::vector<Eigen::Index>> connected_components(const Eigen::MatrixXcd& g) {
  const Eigen::Index n = g.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Eigen::Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  };
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r)
      if (g(r, c) != cplx{}) parent[static_cast<std::size_t>(find(r))] = find(c);
  std::vector<std::vector<Eigen::Index>> by_root(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) by_root[static_cast<std::size_t>(find(i))].push_back(i);
  std::vector<std::vector<Eigen::Index>> out;
  for (auto& comp : by_root)
    if (!comp.empty()) out.push_back(std::move(comp));
  return out;
}

cplx time_factor(FlowScale scale, double t) { return scale == FlowScale::Imaginary ? cplx{0.0, t} : cplx{t, 0.0}; }

}  // namespace

Flow::Flow(Eigen::MatrixXcd generator, FlowStructure structure, FlowScale scale) {
  if (generator.rows() != generator.cols()) throw Error("Flow: generator must be square");
  if (!all_finite(generator)) throw NumericalError("Flow: generator is not finite");
  auto impl = std::make_shared<Impl>();
  impl->structure = structure;
  impl->scale = scale;
  const double tol = 1e-12 * scale_of(generator);
  switch (structure) {
    case FlowStructure::Diagonal: {
      Eigen::MatrixXcd off = generator;
      off.diagonal().setZero();
      if (off.size() && off.cwiseAbs().maxCoeff() > tol) throw Error("Flow: generator claimed diagonal is not");
      impl->diag = generator.diagonal();
      break;
    }
    case FlowStructure::Hermitian: {
      if ((generator - generator.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw Error("Flow: generator claimed Hermitian is not");
      if (generator.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(generator.real());
        if (es.info() != Eigen::Success) throw NumericalError("Flow: eigendecomposition failed");
        impl->basis = es.eigenvectors().cast<cplx>();
        impl->eigenvalues = es.eigenvalues();
      } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(generator);
        if (es.info() != Eigen::Success) throw NumericalError("Flow: eigendecomposition failed");
        impl->basis = es.eigenvectors();
        impl->eigenvalues = es.eigenvalues();
      }
      break;
    }
    case FlowStructure::BlockPair:
      impl->components = connected_components(generator);
      break;
    case FlowStructure::Nilpotent: {
      const double sq = (generator * generator).cwiseAbs().maxCoeff();
      if (sq > 1e-12 * scale_of(generator) * scale_of(generator)) throw Error("Flow: generator claimed nilpotent has G^2 != 0");
      break;
    }
    case FlowStructure::Generic:
      break;
  }
  impl->gen = std::move(generator);
  impl_ = std::move(impl);
}

Eigen::Index Flow::dim() const { return impl_->gen.rows(); }
FlowStructure Flow::structure() const { return impl_->structure; }
FlowScale Flow::scale() const { return impl_->scale; }
const Eigen::MatrixXcd& Flow::generator() const { return impl_->gen; }

Eigen::MatrixXcd Flow::propagator(double t) const {
  if (!std::isfinite(t)) throw Error("Flow: non-finite time");
  const Impl& f = *impl_;
  const cplx c = time_factor(f.scale, t);
  const Eigen::Index n = f.gen.rows();
  Eigen::MatrixXcd out;
  switch (f.structure) {
    case FlowStructure::Diagonal:
      out = (c * f.diag).array().exp().matrix().asDiagonal();
      break;
    case FlowStructure::Hermitian: {
      const Eigen::VectorXcd phase = (c * f.eigenvalues.cast<cplx>()).array().exp();
      out = f.basis * phase.asDiagonal() * f.basis.adjoint();
      break;
    }
    case FlowStructure::BlockPair: {
      out = Eigen::MatrixXcd::Zero(n, n);
      for (const auto& comp : f.components) {
        const auto m = static_cast<Eigen::Index>(comp.size());
        Eigen::MatrixXcd sub(m, m);
        for (Eigen::Index j = 0; j < m; ++j)
          for (Eigen::Index i = 0; i < m; ++i) sub(i, j) = f.gen(comp[static_cast<std::size_t>(i)], comp[static_cast<std::size_t>(j)]);
        const Eigen::MatrixXcd e = m == 1 ? Eigen::MatrixXcd::Constant(1, 1, std::exp(c * sub(0, 0))) : Eigen::MatrixXcd((c * sub).exp());
        for (Eigen::Index j = 0; j < m; ++j)
          for (Eigen::Index i = 0; i < m; ++i) out(comp[static_cast<std::size_t>(i)], comp[static_cast<std::size_t>(j)]) = e(i, j);
      }
      break;
    }
    case FlowStructure::Nilpotent:
      out = Eigen::MatrixXcd::Identity(n, n) + c * f.gen;
      break;
    case FlowStructure::Generic:
      out = t == 0.0 ? Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(n, n)) : Eigen::MatrixXcd((c * f.gen).exp());
      break;
  }
  if (!all_finite(out)) throw NumericalError("Flow: propagator is not finite");
  return out;
}

Eigen::VectorXcd Flow::apply(double t, const Eigen::VectorXcd& x) const {
  const Impl& f = *impl_;
  if (x.size() != f.gen.rows()) throw Error("Flow::apply: size mismatch");
  const cplx c = time_factor(f.scale, t);
  switch (f.structure) {
    case FlowStructure::Diagonal:
      return (c * f.diag).array().exp().matrix().cwiseProduct(x);
    case FlowStructure::Hermitian: {
      const Eigen::VectorXcd phase = (c * f.eigenvalues.cast<cplx>()).array().exp();
      return f.basis * phase.cwiseProduct(f.basis.adjoint() * x);
    }
    case FlowStructure::Nilpotent:
      return x + c * (f.gen * x);
    default:
      return propagator(t) * x;
  }
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

SplitScheme SplitScheme::swapped() const {
  SplitScheme out = *this;
  for (auto& st : out.stages) st.slot = st.slot == Slot::A ? Slot::B : Slot::A;
  out.name += "_swapped";
  return out;
}

void SplitScheme::validate() const {
  double wa = 0.0, wb = 0.0;
  for (const auto& st : stages) (st.slot == Slot::A ? wa : wb) += st.weight;
  if (std::abs(wa - 1.0) > 1e-12 || std::abs(wb - 1.0) > 1e-12)
    throw Error("SplitScheme '" + name + "': weights per generator must sum to 1");
}

SplitScheme SplitScheme::lie() { return {"lie", 1, {{Slot::B, 1.0}, {Slot::A, 1.0}}}; }

SplitScheme SplitScheme::strang() { return {"strang", 2, {{Slot::B, 0.5}, {Slot::A, 1.0}, {Slot::B, 0.5}}}; }

SplitScheme composition_scheme(int k) {
  switch (k) {
    case 1:
      return SplitScheme::lie();
    case 2:
      return SplitScheme::strang();
    case 4: {
      const double g1 = 1.0 / (2.0 - std::cbrt(2.0));
      const double g2 = 1.0 - 2.0 * g1;
      SplitScheme s{"triple_jump", 4, {}};
      for (double g : {g1, g2, g1}) {
        for (const auto& st : SplitScheme::strang().stages) {
          const double w = g * st.weight;
          if (!s.stages.empty() && s.stages.back().slot == st.slot)
            s.stages.back().weight += w;
          else
            s.stages.push_back({st.slot, w});
        }
      }
      s.validate();
      return s;
    }
    default:
      throw Error("composition_scheme: unsupported order " + std::to_string(k) + " (expected 1, 2 or 4)");
  }
}

Eigen::MatrixXcd split_step(const SplitScheme& scheme, const Flow& a, const Flow& b, double tau) {
  if (a.dim() != b.dim()) throw Error("split_step: generator size mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(a.dim(), a.dim());
  for (const auto& st : scheme.stages) out = (st.slot == Slot::A ? a : b).propagator(st.weight * tau) * out;
  return out;
}

Eigen::VectorXcd split_apply(const SplitScheme& scheme, const Flow& a, const Flow& b, double tau, const Eigen::VectorXcd& x) {
  Eigen::VectorXcd y = x;
  for (const auto& st : scheme.stages) y = (st.slot == Slot::A ? a : b).apply(st.weight * tau, y);
  return y;
}

NormBase norm_base(const IndexBlock& block) {
  NormBase b(static_cast<Eigen::Index>(block.size()));
  for (std::size_t p = 0; p < block.size(); ++p) b(static_cast<Eigen::Index>(p)) = 1.0 + block.norm_at(p);
  return b;
}

std::vector<double> geometric_taus(double first, double ratio, int count) {
  std::vector<double> t;
  for (int j = 0; j < count; ++j) t.push_back(first * std::pow(ratio, j));
  return t;
}

LocalErrorTable local_error(const SplitScheme& scheme, const Flow& a, const Flow& b, const Flow& exact,
                            const std::vector<double>& taus, double s, const std::vector<Eigen::VectorXcd>& data,
                            const NormBase& base, double data_sigma) {
  if (taus.empty()) throw Error("local_error: empty tau list");
  if (data.empty()) throw Error("local_error: no data samples");
  scheme.validate();
  LocalErrorTable table;
  table.s = s;
  double xnorm = 0.0;
  for (const auto& x : data) xnorm = std::max(xnorm, weighted_norm(x, base, s));
  const double floor = 100.0 * std::numeric_limits<double>::epsilon() * xnorm;

  std::vector<double> ft, fe;
  for (double tau : taus) {
    const Eigen::MatrixXcd e = split_step(scheme, a, b, tau) - exact.propagator(tau);
    LocalErrorRow row;
    row.tau = tau;
    for (const auto& x : data) {
      const double err = weighted_norm(e * x, base, s);
      row.error = std::max(row.error, err);
      row.norm_ratio = std::max(row.norm_ratio, err / weighted_norm(x, base, s + data_sigma));
    }
    row.below_floor = row.error <= floor;
    if (!row.below_floor) {
      ft.push_back(tau);
      fe.push_back(row.error);
    }
    table.rows.push_back(row);
  }
  table.fit = fit_loglog(ft, fe);
  table.order_undefined = !table.fit.defined();
  return table;
}

std::vector<double> sigma_grid(double hi, double step) {
  std::vector<double> g;
  const int n = static_cast<int>(std::floor(hi / step + 1e-9));
  for (int i = 0; i <= n; ++i) g.push_back(step * i);
  return g;
}

namespace {

// Rough data in h^{s} for a one-dimensional base (1+|k|).
Eigen::VectorXcd rough_from_base(const NormBase& base, double s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> theta(0.0, 2.0 * std::numbers::pi);
  Eigen::VectorXcd x(base.size());
  for (Eigen::Index i = 0; i < base.size(); ++i)
    x(i) = base(i) > 0.0 ? std::polar(std::pow(base(i), -s - 0.51), theta(rng)) : cplx{};
  return x;
}

}  // namespace

LossReport loss_estimator(const SplitScheme& scheme, const std::vector<LossLevel>& levels, double s,
                          const std::vector<double>& sigmas, const LossOptions& options) {
  if (levels.size() < 2) throw Error("loss_estimator: need at least two refinement levels");
  if (sigmas.empty()) throw Error("loss_estimator: empty sigma grid");
  scheme.validate();
  LossReport rep;
  rep.s = s;
  rep.tau_star = options.tau_star;

  std::vector<std::vector<double>> value(sigmas.size(), std::vector<double>(levels.size()));
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const auto& lv = levels[l];
    const Eigen::MatrixXcd e = split_step(scheme, lv.a, lv.b, options.tau_star) - lv.exact.propagator(options.tau_star);
    for (std::size_t k = 0; k < sigmas.size(); ++k) {
      LossCell cell{lv.extent, sigmas[k], weighted_operator_norm(e, lv.base, s, s + sigmas[k]), 0.0};
      for (int i = 0; i < options.samples; ++i) {
        const Eigen::VectorXcd x = rough_from_base(lv.base, s + sigmas[k], options.seed + static_cast<std::uint64_t>(i));
        cell.data_ratio = std::max(cell.data_ratio, weighted_norm(e * x, lv.base, s) / weighted_norm(x, lv.base, s + sigmas[k]));
      }
      value[k][l] = cell.value;
      rep.cells.push_back(cell);
    }
  }

  rep.sigma_hat = sigmas.back();
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    double worst = 0.0;
    bool stable = true;
    for (std::size_t l = 1; l < levels.size(); ++l) {
      const double v0 = value[k][l - 1], v1 = value[k][l];
      const double ratio = static_cast<double>(levels[l].extent) / levels[l - 1].extent;
      if (v1 <= options.zero_floor) continue;
      const double g = v0 <= options.zero_floor ? std::numeric_limits<double>::infinity() : std::log(v1 / v0) / std::log(ratio);
      worst = std::max(worst, g);
      if (v1 > v0 * std::pow(ratio, options.max_growth_exponent) + options.zero_floor) stable = false;
    }
    rep.growth.push_back(worst);
    if (stable && !rep.stabilized) {
      rep.stabilized = true;
      rep.sigma_hat = sigmas[k];
    }
  }
  return rep;
}

double flow_stability_constant(const Flow& flow, const NormBase& base, double s, double t_max, int steps) {
  if (steps < 2) throw Error("flow_stability_constant: need at least two time points");
  double best = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double t = t_max * i / (steps - 1);
    best = std::max(best, weighted_operator_norm(flow.propagator(t), base, s, s));
  }
  return best;
}

namespace {

// J_0..J_kmax at x >= 0 by Miller's backward recurrence, normalized with
// J_0 + 2 sum_k J_{2k} = 1.
std::vector<double> bessel_j_orders(double x, int kmax) {
  std::vector<double> out(static_cast<std::size_t>(kmax) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  int start = kmax + static_cast<int>(std::sqrt(160.0 * kmax)) + 20;
  start += start % 2;
  double up = 0.0, cur = 1e-30, norm = 0.0;
  for (int k = start; k > 0; --k) {
    const double down = 2.0 * k / x * cur - up;
    up = cur;
    cur = down;  // J_{k-1}, unnormalized
    if (k - 1 <= kmax) out[static_cast<std::size_t>(k - 1)] = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
    if (std::abs(cur) > 1e250) {
      for (double& v : out) v *= 1e-250;
      up *= 1e-250;
      cur *= 1e-250;
      norm *= 1e-250;
    }
  }
  norm += cur;
  for (double& v : out) v /= norm;
  return out;
}

}  // namespace

Eigen::VectorXcd chebyshev_expi(const SparseMatrixXcd& h, double t, const Eigen::VectorXcd& x, double tol) {
  if (h.rows() != h.cols() || h.cols() != x.size()) throw Error("chebyshev_expi: shape mismatch");
  if (!(tol > 0.0)) throw Error("chebyshev_expi: tol must be positive");
  const Eigen::Index n = h.rows();
  if (n == 0) return x;

  // Gershgorin interval; the diagonal of a Hermitian matrix is real.
  Eigen::VectorXd radius = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < h.outerSize(); ++k)
    for (SparseMatrixXcd::InnerIterator it(h, k); it; ++it) {
      if (it.row() == it.col())
        diag(it.row()) = it.value().real();
      else
        radius(it.row()) += std::abs(it.value());
    }
  const double lo = (diag - radius).minCoeff();
  const double hi = (diag + radius).maxCoeff();
  const double center = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  const cplx phase = std::exp(cplx(0.0, t * center));
  const double z = t * half;
  if (std::abs(z) < 1e-300) return phase * x;

  const double az = std::abs(z);
  const double sgn = z < 0.0 ? -1.0 : 1.0;
  const int kmax = static_cast<int>(std::ceil(1.3 * az)) + 40;
  const std::vector<double> jk = bessel_j_orders(az, kmax);
  auto scaled = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return (h * v - center * v) / half; };

  Eigen::VectorXcd prev = x;
  Eigen::VectorXcd cur = scaled(x);
  Eigen::VectorXcd acc = jk[0] * prev + cplx(0.0, 2.0 * sgn * jk[1]) * cur;
  cplx ik(0.0, sgn);  // (i sgn)^k
  int quiet = 0;
  for (int k = 2; k <= kmax; ++k) {
    Eigen::VectorXcd next = 2.0 * scaled(cur) - prev;
    ik *= cplx(0.0, sgn);
    acc += (2.0 * jk[k]) * ik * next;
    prev.swap(cur);
    cur.swap(next);
    quiet = (k > az && std::abs(jk[k]) < tol) ? quiet + 1 : 0;
    if (quiet >= 2) return phase * acc;
  }
  throw NumericalError("chebyshev_expi: expansion did not converge");
}

}  // namespace pdm
