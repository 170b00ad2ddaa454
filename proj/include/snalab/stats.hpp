#pragma once

#include <span>
#include <vector>

namespace snalab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y = slope * x + intercept.
LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Mean with standard error from `blocks` contiguous batch means.
MeanEstimate batch_means(std::span<const double> v, int blocks = 32);

// Linear-interpolated quantile, q in [0,1]. Copies its input.
double quantile(std::vector<double> v, double q);

}  // namespace snalab
