#include "distill/saturating.hpp"

#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <string>

#include "distill/error.hpp"

namespace distill {

double eval_saturating(const SaturatingFit& fit, double x) {
  return fit.alpha - fit.beta * std::expm1(-fit.gamma * std::pow(x, fit.delta));
}

bool satisfies_constraints(const SaturatingFit& f) {
  return f.alpha > 0.0 && f.beta > 0.0 && f.alpha + f.beta <= f.acc_cap && f.gamma > 0.0 &&
         f.delta > 0.0 && f.delta <= 1.0 && std::isfinite(f.gamma);
}

namespace {

using Theta = std::array<double, 4>;

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// Unconstrained search coordinates -> feasible parameters (scaled x).
//   alpha = cap * s(a), beta = (cap - alpha) * s(b), gamma = exp(c),
//   delta = s(d), with s the logistic map.
struct Params {
  double alpha, beta, gamma, delta;
};

// Coordinates are clamped so every constraint holds strictly, with margins
// far above rounding error.
Params decode(const Theta& t, double cap) {
  auto clamp = [](double v, double lim) { return std::clamp(v, -lim, lim); };
  Params p;
  p.alpha = cap * logistic(clamp(t[0], 30.0));
  p.beta = (cap - p.alpha) * logistic(clamp(t[1], 30.0));
  p.gamma = std::exp(clamp(t[2], 50.0));
  p.delta = logistic(clamp(t[3], 30.0));
  return p;
}

struct Problem {
  std::vector<double> x;  // scaled
  std::vector<double> y;
  double cap;
};

double mae(const Problem& prob, const Theta& t) {
  const Params p = decode(t, prob.cap);
  double sum = 0.0;
  for (std::size_t i = 0; i < prob.x.size(); ++i) {
    const double f = p.alpha - p.beta * std::expm1(-p.gamma * std::pow(prob.x[i], p.delta));
    sum += std::fabs(f - prob.y[i]);
  }
  const double v = sum / static_cast<double>(prob.x.size());
  return std::isfinite(v) ? v : std::numeric_limits<double>::max();
}

double gsl_objective(const gsl_vector* v, void* ctx) {
  const auto* prob = static_cast<const Problem*>(ctx);
  Theta t{gsl_vector_get(v, 0), gsl_vector_get(v, 1), gsl_vector_get(v, 2),
          gsl_vector_get(v, 3)};
  return mae(*prob, t);
}

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
using VectorPtr = std::unique_ptr<gsl_vector, VectorDeleter>;
using MinimizerPtr = std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter>;

// One Nelder-Mead run from `start`; never returns a point worse than it.
Theta simplex_run(const Problem& prob, const Theta& start, double step,
                  const SaturatingFitOptions& opt) {
  gsl_multimin_function fn;
  fn.n = 4;
  fn.f = &gsl_objective;
  fn.params = const_cast<Problem*>(&prob);

  VectorPtr x0(gsl_vector_alloc(4));
  VectorPtr steps(gsl_vector_alloc(4));
  for (std::size_t i = 0; i < 4; ++i) {
    gsl_vector_set(x0.get(), i, start[i]);
    gsl_vector_set(steps.get(), i, step);
  }
  MinimizerPtr m(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 4));
  gsl_multimin_fminimizer_set(m.get(), &fn, x0.get(), steps.get());

  for (std::size_t iter = 0; iter < opt.max_iterations; ++iter) {
    if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    const double size = gsl_multimin_fminimizer_size(m.get());
    if (gsl_multimin_test_size(size, opt.size_tolerance) == GSL_SUCCESS) break;
  }
  const gsl_vector* best = gsl_multimin_fminimizer_x(m.get());
  Theta out{gsl_vector_get(best, 0), gsl_vector_get(best, 1), gsl_vector_get(best, 2),
            gsl_vector_get(best, 3)};
  return mae(prob, out) <= mae(prob, start) ? out : start;
}

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

// Halton points (bases 2, 3, 5, 7) with a seeded Cranley-Patterson shift,
// mapped onto the search box.
std::vector<Theta> initial_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::array<double, 4> shift{};
  for (auto& s : shift) s = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  constexpr std::array<std::uint64_t, 4> bases = {2, 3, 5, 7};

  std::vector<Theta> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::array<double, 4> u{};
    for (std::size_t k = 0; k < 4; ++k) {
      u[k] = std::fmod(radical_inverse(i + 1, bases[k]) + shift[k], 1.0);
    }
    Theta t;
    t[0] = logit(0.02 + 0.96 * u[0]);          // alpha / cap
    t[1] = logit(0.02 + 0.96 * u[1]);          // beta / (cap - alpha)
    t[2] = std::log(10.0) * (-3.0 + 5.0 * u[2]);  // gamma in [1e-3, 1e2]
    t[3] = logit(0.05 + 0.93 * u[3]);          // delta
    out.push_back(t);
  }
  return out;
}

}  // namespace

SaturatingFit fit_saturating(std::span<const CostPoint> points, double acc_cap,
                             const SaturatingFitOptions& options, SaturatingFitTrace* trace) {
  if (points.size() < 4) {
    throw Error(Errc::TooFewPoints, "need >= 4 points, got " + std::to_string(points.size()));
  }
  if (!(acc_cap > 0.0 && acc_cap <= 1.0)) {
    throw Error(Errc::InvalidArgument, "acc_cap must lie in (0, 1]");
  }
  if (!(options.x_scale > 0.0) || options.starts == 0) {
    throw Error(Errc::InvalidArgument, "x_scale must be positive and starts >= 1");
  }
  Problem prob;
  prob.cap = acc_cap;
  bool any_reachable = false;
  for (const auto& p : points) {
    validate_point(p);
    prob.x.push_back(p.flops / options.x_scale);
    prob.y.push_back(p.accuracy);
    any_reachable = any_reachable || p.accuracy <= acc_cap;
  }
  if (!any_reachable) {
    throw Error(Errc::NoFeasibleFit, "acc_cap " + std::to_string(acc_cap) +
                                         " is below every observed accuracy");
  }

  SaturatingFitTrace local;
  Theta best{};
  double best_mae = std::numeric_limits<double>::infinity();
  const auto starts = initial_points(options.starts, options.seed);
  for (std::size_t s = 0; s < starts.size(); ++s) {
    Theta t = starts[s];
    const double initial = mae(prob, t);
    double current = initial;
    t = simplex_run(prob, t, 1.0, options);
    current = mae(prob, t);
    for (std::size_t r = 0; r < options.restarts; ++r) {
      Theta next = simplex_run(prob, t, 0.25, options);
      const double v = mae(prob, next);
      const bool improved = v < current;
      t = next;
      current = v;
      if (!improved) break;
    }
    local.start_mae.push_back(initial);
    local.final_mae.push_back(current);
    if (current < best_mae) {
      best_mae = current;
      best = t;
      local.best_start = s;
    }
  }

  const Params p = decode(best, acc_cap);
  SaturatingFit fit;
  fit.alpha = p.alpha;
  fit.beta = p.beta;
  fit.delta = p.delta;
  // gamma * (x / scale)^delta == (gamma * scale^-delta) * x^delta
  fit.gamma = p.gamma * std::pow(options.x_scale, -p.delta);
  fit.acc_cap = acc_cap;
  fit.mae = best_mae;
  fit.x_scale = options.x_scale;
  if (!satisfies_constraints(fit)) {
    throw Error(Errc::NoFeasibleFit, "search ended outside the constraint set");
  }
  if (trace != nullptr) *trace = std::move(local);
  return fit;
}

}  // namespace distill
