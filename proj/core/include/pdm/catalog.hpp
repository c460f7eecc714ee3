#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdm/symbols.hpp"

namespace pdm::catalog {

/// sum_j c_j |x|^j with |x| the l1 size; declared order = highest nonzero power.
Symbol polynomial(std::vector<double> coeffs);
/// |x|^p.
Symbol abs_power(double p);
/// <x>^r = (1 + |x|^2)^{r/2}.
Symbol japanese(double r);
/// i x_1.
Symbol derivative();
/// Omega(k) = sqrt(|k| tanh(sqrt(mu)|k|) / sqrt(mu)); mu = 0 gives |k|.
Symbol waterwave_omega(double mu);
/// G(k) = sech(sqrt(mu)|k|); mu = 0 gives 1.
Symbol waterwave_G(double mu);
Symbol sech(double scale);

Potential constant(double c);
/// amplitude * cos(x_1): coefficients amplitude/2 at k = +-1.
Potential cos_potential(double amplitude = 1.0);
Potential sin_potential(double amplitude = 1.0);
/// V_hat(k) = exp(-rate |k|), summed in closed form.
Potential exp_decay(double rate = 1.0);
/// i cos x: not real, used as a negative control for Hermitian checks.
Potential imaginary_cos();
/// Bounded random coefficients on |k| <= support, b_hat(-k) = conj(b_hat(k)).
Potential rough(std::uint64_t seed, int support);

/// Catalog lookups from strings such as "japanese:0.5" or "cos".
Symbol symbol_by_name(const std::string& spec);
Potential potential_by_name(const std::string& spec);

struct ProbeInfo {
  std::string name;
  std::string kind;
  std::string description;
};
std::vector<ProbeInfo> list_probes();

}  // namespace pdm::catalog
