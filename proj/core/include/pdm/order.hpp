#pragma once

#include <limits>
#include <span>
#include <vector>

#include "pdm/algebra.hpp"

namespace pdm {

/// Settings for effective-order certification.
///
/// A family of matrices built at increasing block sizes is certified at order
/// r when, for every probed (alpha, N), the seminorm ||A||_{alpha,N,r} does
/// not grow under the finest refinement step:
/// v_n <= v_{n-1} * (size_n/size_{n-1})^{max_growth_exponent} + floor.
/// A probe order below the true order r0 grows like size^{r0 - r}, so the
/// exponent bound is set to half the order-grid step. Earlier steps are
/// recorded per member but do not decide.
struct OrderOptions {
  std::vector<MultiIndex> alpha_grid;
  std::vector<int> N_list{0, 2, 4, 8};
  std::vector<double> order_grid;
  double max_growth_exponent = 0.125;
  /// Values below floor_rel * ||A||_{0,N,r} are treated as roundoff zeros.
  double floor_rel = 1e-9;

  /// alpha in {0, +1, -1, +2} (d = 1) or the matching d = 2 set; N in
  /// {0,2,4,8}; orders -4..4 step 0.25.
  static OrderOptions defaults(int dim);
  static std::vector<double> grid(double lo, double hi, double step);
};

struct OrderProbeRecord {
  MultiIndex alpha{0, 0};
  int N = 0;
  double r = 0.0;
  std::vector<double> values;          // one per family member
  std::vector<bool> certified;         // per refinement step; member 0 is always true
  double growth_exponent = 0.0;        // worst consecutive log-growth exponent
  bool passed = false;                 // finest step certified
};

struct OrderEstimate {
  /// Smallest certified grid order, +infinity if none certifies.
  double r_hat = std::numeric_limits<double>::infinity();
  std::vector<OrderProbeRecord> probes;
  bool certified() const { return r_hat < std::numeric_limits<double>::infinity(); }
};

/// Refinement sizes are taken from the blocks' extents (M or K). Members must
/// share mode and dimension and have strictly increasing extents.
OrderEstimate estimate_order(std::span<const OpMatrix> family, const OrderOptions& options);

}  // namespace pdm
