#pragma once

#include <span>
#include <string>
#include <vector>

namespace distill {

struct CostPoint {
  std::string label;
  double flops = 0.0;     // > 0
  double accuracy = 0.0;  // in [0, 1]
};

// Throws InvalidArgument for flops <= 0 or accuracy outside [0, 1].
void validate_point(const CostPoint& p);

// a has cost <= and accuracy >= b, strictly better in at least one.
bool dominates(const CostPoint& a, const CostPoint& b);

// Non-dominated points sorted by flops (accuracy then strictly rises).
// Exact duplicates on both coordinates are all kept, in input order.
// O(n log n). Throws EmptyInput.
std::vector<CostPoint> pareto_frontier(std::span<const CostPoint> points);

}  // namespace distill
