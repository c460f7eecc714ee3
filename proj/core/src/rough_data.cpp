#include "pdm/rough_data.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace pdm {

namespace {

Eigen::VectorXcd with_phases(const IndexBlock& block, std::uint64_t seed, const std::function<double(int)>& amp) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> theta(0.0, 2.0 * std::numbers::pi);
  Eigen::VectorXcd x(static_cast<Eigen::Index>(block.size()));
  for (std::size_t p = 0; p < block.size(); ++p)
    x(static_cast<Eigen::Index>(p)) = std::polar(amp(block.norm_at(p)), theta(rng));
  return x;
}

}  // namespace

Eigen::VectorXcd rough_data(const IndexBlock& block, double s, std::uint64_t seed, double eps) {
  const double expo = -s - 0.5 * block.dim() - eps;
  return with_phases(block, seed, [expo](int k) { return std::pow(1.0 + k, expo); });
}

Eigen::VectorXcd smooth_data(const IndexBlock& block, double decay, std::uint64_t seed) {
  return with_phases(block, seed, [decay](int k) { return std::exp(-decay * k); });
}

void mask_excluded(Eigen::VectorXcd& x, const Eigen::VectorXd& base) {
  if (x.size() != base.size()) throw Error("mask_excluded: size mismatch");
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (base(i) <= 0.0) x(i) = 0.0;
}

}  // namespace pdm
