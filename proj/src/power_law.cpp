#include "distill/power_law.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "distill/error.hpp"

namespace distill {

double eval_power_law(const PowerLawFit& fit, double x) {
  return fit.alpha * std::pow(x, fit.beta_exp);
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) {
    throw Error(Errc::TooFewPoints, "need >= 2 points, got " + std::to_string(points.size()));
  }
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) {
      throw Error(Errc::NonPositiveCoordinate,
                  "(" + std::to_string(x) + ", " + std::to_string(y) + ")");
    }
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  const auto n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double dx = lx[i] - mx;
    const double dy = ly[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw Error(Errc::DegenerateX, "all x values are equal");

  PowerLawFit fit;
  fit.beta_exp = sxy / sxx;
  // Geometric mean of y / x^beta, taken relative to the first point so that
  // noiseless data gives alpha without a round trip through exp(log(.)).
  const double anchor = points[0].second * std::pow(points[0].first, -fit.beta_exp);
  double log_ratio = 0.0;
  for (const auto& [x, y] : points) log_ratio += std::log(y * std::pow(x, -fit.beta_exp) / anchor);
  fit.alpha = anchor * std::exp(log_ratio / n);

  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (my + fit.beta_exp * (lx[i] - mx));
    ss_res += r * r;
  }
  fit.r2_log = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace distill
