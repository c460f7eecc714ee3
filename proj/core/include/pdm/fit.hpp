#pragma once

#include <cstddef>
#include <span>

namespace pdm {

/// Least-squares line through (log x, log y).
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual in log space.
  double residual = 0.0;
  std::size_t points = 0;
  bool defined() const { return points >= 2; }
};

/// Points with x <= 0 or y <= 0 are skipped. Fewer than two usable points
/// give slope = NaN and points < 2.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace pdm
