#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qlab {

/// Ordinary least-squares line y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual.
  double rms_residual = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Median; averages the two central values for even sizes.
double median(std::vector<double> values);

/// Runs body(i) for i in [0, count) on up to `jobs` threads (0 = hardware
/// concurrency). Results must be written by index; the first exception is
/// rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body);

}  // namespace qlab
