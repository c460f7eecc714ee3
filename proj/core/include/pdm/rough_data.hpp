#pragma once

#include <cstdint>

#include "pdm/op_matrix.hpp"

namespace pdm {

/// x_n = (1+|n|)^{-s-d/2-eps} e^{i theta_n} with seeded uniform phases.
/// The result lies in h^s but in no h^{s+eps'} for eps' > eps.
Eigen::VectorXcd rough_data(const IndexBlock& block, double s, std::uint64_t seed, double eps = 0.01);

/// Smooth data x_n = e^{-decay |n|} e^{i theta_n}.
Eigen::VectorXcd smooth_data(const IndexBlock& block, double decay, std::uint64_t seed);

/// Zeroes the entries where base == 0 (excluded modes).
void mask_excluded(Eigen::VectorXcd& x, const Eigen::VectorXd& base);

}  // namespace pdm
