#include <doctest.h>

#include <atomic>
#include <cmath>
#include <set>
#include <vector>

#include "spinent/optimize.hpp"

using namespace spinent;

TEST_CASE("nelder-mead converges on smooth objectives") {
  SUBCASE("shifted quadratic") {
    const auto f = [](const Eigen::VectorXd& x) {
      return (x(0) - 1.5) * (x(0) - 1.5) + 2.0 * (x(1) + 0.25) * (x(1) + 0.25);
    };
    const auto res = nelder_mead(f, Eigen::Vector2d(3.0, 3.0));
    CHECK(res.converged);
    CHECK(res.x(0) == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(res.x(1) == doctest::Approx(-0.25).epsilon(1e-6));
    CHECK(res.value <= 1e-10);
  }
  SUBCASE("quartic valley") {
    const auto f = [](const Eigen::VectorXd& x) {
      return std::pow(x(0) - 1.0, 2) + 10.0 * std::pow(x(1) + 0.5, 4);
    };
    const auto res = nelder_mead(f, Eigen::Vector2d(-2.0, 2.0));
    CHECK(res.value <= 1e-8);
  }
  SUBCASE("one-dimensional input works") {
    const auto f = [](const Eigen::VectorXd& x) { return std::cosh(x(0) - 2.0); };
    Eigen::VectorXd x0(1);
    x0 << 0.0;
    const auto res = nelder_mead(f, x0);
    CHECK(res.x(0) == doctest::Approx(2.0).epsilon(1e-6));
  }
}

TEST_CASE("multistart minimization") {
  // Two-well objective; the global minimum sits at x = -1 with value -1.
  const auto f = [](const Eigen::VectorXd& x) {
    const double a = x(0);
    return (a * a - 1.0) * (a * a - 1.0) - 0.5 * a * (a - 1.0) * (a + 1.0) - a;
  };
  const auto res = multistart_minimize(f, 1, 32, 1234);
  CHECK(res.restarts == 32);

  SUBCASE("deterministic under the seed") {
    const auto res2 = multistart_minimize(f, 1, 32, 1234);
    CHECK(res.value == res2.value);
    CHECK(res.best_restart == res2.best_restart);
    CHECK((res.x - res2.x).cwiseAbs().maxCoeff() == 0.0);
    const auto serial = multistart_minimize(f, 1, 32, 1234, {}, false);
    CHECK(serial.value == res.value);
    CHECK(serial.best_restart == res.best_restart);
  }
}

TEST_CASE("derived seeds are distinct and stable") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 4096; ++i) seen.insert(derived_seed(99, i));
  CHECK(seen.size() == 4096);
  CHECK(derived_seed(99, 7) == derived_seed(99, 7));
  CHECK(derived_seed(99, 7) != derived_seed(100, 7));
}

TEST_CASE("parallel_for_index covers every index exactly once") {
  const int count = 1000;
  std::vector<std::atomic<int>> hits(count);
  parallel_for_index(count, [&](int i) { hits[i].fetch_add(1); });
  for (int i = 0; i < count; ++i) CHECK(hits[i].load() == 1);
  parallel_for_index(0, [&](int) { FAIL("must not be called"); });
}
