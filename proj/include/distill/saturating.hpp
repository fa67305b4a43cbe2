#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "distill/pareto.hpp"

namespace distill {

// f(x) = alpha + beta * (1 - exp(-gamma * x^delta)), x in FLOPs.
// Constraints: alpha, beta > 0, alpha + beta <= acc_cap, gamma > 0,
// 0 < delta <= 1.
struct SaturatingFit {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;  // in raw FLOPs units
  double delta = 1.0;
  double acc_cap = 1.0;
  double mae = 0.0;
  double x_scale = 1.0;  // FLOPs unit used during the search
};

struct SaturatingFitOptions {
  std::size_t starts = 32;
  std::uint64_t seed = 0;
  // FLOPs are divided by this before the search; reported gamma is
  // converted back to raw units.
  double x_scale = 1e12;
  std::size_t max_iterations = 4000;  // per simplex run
  std::size_t restarts = 4;           // simplex restarts from the incumbent
  double size_tolerance = 1e-12;
};

// Per-start objective values, for diagnostics and tests.
struct SaturatingFitTrace {
  std::vector<double> start_mae;
  std::vector<double> final_mae;
  std::size_t best_start = 0;
};

double eval_saturating(const SaturatingFit& fit, double x);

bool satisfies_constraints(const SaturatingFit& fit);

// Minimizes mean absolute error over `points` with a derivative-free
// simplex search from seeded low-discrepancy starts. Deterministic for a
// given seed; ties between starts go to the lower start index.
// Throws TooFewPoints (< 4), InvalidArgument (acc_cap outside (0, 1]) and
// NoFeasibleFit (every accuracy above acc_cap).
SaturatingFit fit_saturating(std::span<const CostPoint> points, double acc_cap,
                             const SaturatingFitOptions& options = {},
                             SaturatingFitTrace* trace = nullptr);

}  // namespace distill
