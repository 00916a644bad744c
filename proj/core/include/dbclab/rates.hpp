#pragma once

#include <span>

namespace dbclab {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Pearson correlation of (log x, log y); 1 for a perfect power law, NaN if either is constant.
  double correlation = 0.0;
};

/// Least squares line through (log x_i, log y_i).  Throws std::invalid_argument
/// for fewer than two points, mismatched lengths, non-positive values, or
/// all-equal abscissae.
RateFit fit_rate(std::span<const double> xs, std::span<const double> ys);

}  // namespace dbclab
