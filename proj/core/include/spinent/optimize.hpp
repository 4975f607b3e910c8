#pragma once
// Derivative-free simplex minimizer (Nelder-Mead) plus a deterministic
// multistart driver. Converges to a local optimum of a smooth objective;
// global claims come from restarts.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

namespace spinent {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct NelderMeadOptions {
  int max_iterations = 4000;
  double x_tol = 1e-10;  // simplex diameter
  double f_tol = 1e-12;  // value spread across the simplex
  double initial_step = 0.5;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value;
  int iterations;
  bool converged;
};

NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& opts = {});

struct MultistartResult {
  Eigen::VectorXd x;
  double value;
  int best_restart;
  int restarts;
};

// Minimizes f from `restarts` random starts with components uniform in
// [-1, 1], dimension `dim`. Start points derive from (seed, restart index)
// only, so the result is independent of thread scheduling; ties resolve to
// the lowest restart index.
MultistartResult multistart_minimize(const Objective& f, int dim, int restarts,
                                     std::uint64_t seed,
                                     const NelderMeadOptions& opts = {},
                                     bool parallel = true);

// Deterministic per-task seed stream (splitmix64 over a master seed).
std::uint64_t derived_seed(std::uint64_t master, std::uint64_t index);

// Runs fn(i) for i in [0, count) across a small thread pool; fn must only
// write to per-index slots.
void parallel_for_index(int count, const std::function<void(int)>& fn,
                        bool parallel = true);

}  // namespace spinent
