#pragma once

#include <span>
#include <utility>

namespace distill {

// y = alpha * x^beta_exp, fitted by least squares on (ln x, ln y).
struct PowerLawFit {
  double alpha = 0.0;
  double beta_exp = 0.0;
  double r2_log = 0.0;  // coefficient of determination in log space
};

double eval_power_law(const PowerLawFit& fit, double x);

// Throws TooFewPoints (< 2), NonPositiveCoordinate, DegenerateX.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

}  // namespace distill
