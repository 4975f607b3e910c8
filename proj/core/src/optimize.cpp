#include "spinent/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace spinent {

NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& opts) {
  const int n = static_cast<int>(x0.size());
  if (n < 1) throw std::invalid_argument("nelder_mead needs at least one parameter");

  // Standard coefficients: reflection 1, expansion 2, contraction 1/2,
  // shrink 1/2.
  constexpr double kAlpha = 1.0, kGamma = 2.0, kRho = 0.5, kSigma = 0.5;

  std::vector<Eigen::VectorXd> simplex(n + 1, x0);
  for (int i = 0; i < n; ++i) simplex[i + 1](i) += opts.initial_step;
  std::vector<double> values(n + 1);
  for (int i = 0; i <= n; ++i) values[i] = f(simplex[i]);

  std::vector<int> order(n + 1);
  int iter = 0;
  bool converged = false;
  for (; iter < opts.max_iterations; ++iter) {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return values[a] < values[b]; });
    const int best = order[0], worst = order[n], second_worst = order[n - 1];

    double diameter = 0.0;
    for (int i = 1; i <= n; ++i) {
      diameter = std::max(diameter,
                          (simplex[order[i]] - simplex[best]).cwiseAbs().maxCoeff());
    }
    if (diameter < opts.x_tol &&
        std::abs(values[worst] - values[best]) < opts.f_tol) {
      converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != worst) centroid += simplex[i];
    }
    centroid /= n;

    const Eigen::VectorXd reflected = centroid + kAlpha * (centroid - simplex[worst]);
    const double f_reflected = f(reflected);
    if (f_reflected < values[best]) {
      const Eigen::VectorXd expanded = centroid + kGamma * (reflected - centroid);
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    const Eigen::VectorXd contracted =
        centroid + kRho * (simplex[worst] - centroid);
    const double f_contracted = f(contracted);
    if (f_contracted < values[worst]) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + kSigma * (simplex[i] - simplex[best]);
      values[i] = f(simplex[i]);
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i) {
    if (values[i] < values[best]) best = i;
  }
  return NelderMeadResult{simplex[best], values[best], iter, converged};
}

std::uint64_t derived_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 step over master + index.
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void parallel_for_index(int count, const std::function<void(int)>& fn,
                        bool parallel) {
  if (count <= 0) return;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int n_threads = parallel ? static_cast<int>(std::min<unsigned>(hw, count)) : 1;
  if (n_threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < count; i += n_threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

MultistartResult multistart_minimize(const Objective& f, int dim, int restarts,
                                     std::uint64_t seed,
                                     const NelderMeadOptions& opts, bool parallel) {
  if (restarts < 1) throw std::invalid_argument("multistart needs >= 1 restart");
  std::vector<NelderMeadResult> results(restarts);
  parallel_for_index(restarts, [&](int r) {
    std::mt19937_64 rng(derived_seed(seed, static_cast<std::uint64_t>(r)));
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Eigen::VectorXd x0(dim);
    for (int i = 0; i < dim; ++i) x0(i) = uniform(rng);
    results[r] = nelder_mead(f, x0, opts);
  }, parallel);

  int best = 0;
  for (int r = 1; r < restarts; ++r) {
    if (results[r].value < results[best].value) best = r;
  }
  return MultistartResult{results[best].x, results[best].value, best, restarts};
}

}  // namespace spinent
