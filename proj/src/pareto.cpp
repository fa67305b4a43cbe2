#include "distill/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "distill/error.hpp"

namespace distill {

void validate_point(const CostPoint& p) {
  if (!(p.flops > 0.0) || !std::isfinite(p.flops)) {
    throw Error(Errc::InvalidArgument, p.label + ": flops must be positive");
  }
  if (!(p.accuracy >= 0.0 && p.accuracy <= 1.0)) {
    throw Error(Errc::InvalidArgument, p.label + ": accuracy must lie in [0, 1]");
  }
}

bool dominates(const CostPoint& a, const CostPoint& b) {
  return a.flops <= b.flops && a.accuracy >= b.accuracy &&
         (a.flops < b.flops || a.accuracy > b.accuracy);
}

std::vector<CostPoint> pareto_frontier(std::span<const CostPoint> points) {
  if (points.empty()) throw Error(Errc::EmptyInput, "no cost points");
  for (const auto& p : points) validate_point(p);

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].flops != points[b].flops) return points[a].flops < points[b].flops;
    return points[a].accuracy > points[b].accuracy;
  });

  std::vector<CostPoint> frontier;
  double best = -1.0;  // best accuracy among strictly cheaper points
  for (std::size_t i = 0; i < order.size();) {
    // Group of equal cost; its first member has the group's top accuracy.
    std::size_t j = i;
    const double cost = points[order[i]].flops;
    const double top = points[order[i]].accuracy;
    while (j < order.size() && points[order[j]].flops == cost) ++j;
    if (top > best) {
      for (std::size_t k = i; k < j && points[order[k]].accuracy == top; ++k) {
        frontier.push_back(points[order[k]]);
      }
      best = top;
    }
    i = j;
  }
  return frontier;
}

}  // namespace distill
