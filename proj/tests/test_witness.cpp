#include <doctest.h>

#include <cmath>
#include <random>

#include "spinent/oracle.hpp"
#include "spinent/thermo.hpp"
#include "spinent/thresholds.hpp"
#include "spinent/witness.hpp"

using namespace spinent;

TEST_CASE("bound coefficients") {
  CHECK(bound_coefficient(Model::Heisenberg, BoundClass::R2) == -1.0);
  CHECK(bound_coefficient(Model::Heisenberg, BoundClass::C2) == -1.0);
  CHECK(bound_coefficient(Model::Heisenberg, BoundClass::C3) == -1.5);
  CHECK(bound_coefficient(Model::Heisenberg, BoundClass::R3) ==
        doctest::Approx(-(1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-15));
  CHECK(bound_coefficient(Model::XY, BoundClass::C3) == -1.125);
  CHECK(bound_coefficient(Model::XY, BoundClass::R3) ==
        doctest::Approx(-(1.0 + std::sqrt(2.0)) / 2.0).epsilon(1e-15));

  SUBCASE("bound values scale as c J N") {
    CHECK(bound_value(Model::Heisenberg, BoundClass::R3, 10, 1.0) ==
          doctest::Approx(-16.18033988749895).epsilon(1e-12));
    CHECK(bound_value(Model::XY, BoundClass::R3, 10, 1.0) ==
          doctest::Approx(-12.071067811865476).epsilon(1e-12));
    CHECK(bound_value(Model::Heisenberg, BoundClass::C2, 4, 1.0) == -4.0);
    CHECK(bound_value(Model::Heisenberg, BoundClass::C3, 6, 2.0) == -18.0);
  }
  SUBCASE("ordering R2 = C2 > C3 > R3 for both models") {
    for (Model model : {Model::Heisenberg, Model::XY}) {
      for (int n : {4, 8, 12}) {
        const double r2 = bound_value(model, BoundClass::R2, n, 1.0);
        const double c2 = bound_value(model, BoundClass::C2, n, 1.0);
        const double c3 = bound_value(model, BoundClass::C3, n, 1.0);
        const double r3 = bound_value(model, BoundClass::R3, n, 1.0);
        CHECK(r2 == c2);
        CHECK(c2 > c3);
        CHECK(c3 > r3);
      }
    }
  }
}

TEST_CASE("classification") {
  SUBCASE("saturating energy does not fire the strict bound") {
    const ChainSpec spec{Model::Heisenberg, 4, 1.0, Boundary::Periodic};
    const auto verdict = classify(-6.0, spec);
    CHECK_FALSE(verdict[BoundClass::C3].fired);
    CHECK(verdict[BoundClass::C3].margin == doctest::Approx(0.0));
    CHECK(verdict[BoundClass::C2].fired);  // -6 < -4
  }
  SUBCASE("the thermodynamic ground energy fires everything") {
    const ChainSpec spec{Model::Heisenberg, 10, 1.0, Boundary::Periodic};
    const auto verdict = classify(-1.7726 * 10, spec);
    for (BoundClass cls : kAllBoundClasses) CHECK(verdict[cls].fired);
  }
  SUBCASE("the XY ground energy density fires R3") {
    const ChainSpec spec{Model::XY, 8, 1.0, Boundary::Periodic};
    CHECK(classify(-1.273 * 8, spec)[BoundClass::R3].fired);
  }
  SUBCASE("margins are reported in units of J N") {
    const ChainSpec spec{Model::Heisenberg, 8, 2.0, Boundary::Periodic};
    const auto verdict = classify(-20.0, spec);
    // bound_R2 = -16, energy -20: margin (bound - energy)/(J N) = 4/16.
    CHECK(verdict[BoundClass::R2].margin == doctest::Approx(0.25));
  }
  SUBCASE("fired implications hold on random energies") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uniform(-2.2, 0.5);
    for (int trial = 0; trial < 500; ++trial) {
      const ChainSpec spec{trial % 2 == 0 ? Model::Heisenberg : Model::XY,
                           4 + 2 * (trial % 4), 1.0, Boundary::Periodic};
      const auto verdict = classify(uniform(rng) * spec.n_sites, spec);
      if (verdict[BoundClass::R3].fired) CHECK(verdict[BoundClass::C3].fired);
      if (verdict[BoundClass::C3].fired) CHECK(verdict[BoundClass::C2].fired);
      CHECK(verdict[BoundClass::C2].fired == verdict[BoundClass::R2].fired);
    }
  }
  SUBCASE("verdict monotonicity in the energy") {
    const ChainSpec spec{Model::XY, 6, 1.0, Boundary::Periodic};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uniform(-9.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
      double a = uniform(rng), b = uniform(rng);
      if (a > b) std::swap(a, b);  // a <= b
      const auto va = classify(a, spec);
      const auto vb = classify(b, spec);
      for (BoundClass cls : kAllBoundClasses) {
        if (vb[cls].fired) CHECK(va[cls].fired);
      }
    }
  }
}

TEST_CASE("biseparable witness bounds and verdicts") {
  CHECK(biseparable_witness_bound(Model::Heisenberg) ==
        doctest::Approx(3.23606797749979).epsilon(1e-14));
  CHECK(biseparable_witness_bound(Model::XY) ==
        doctest::Approx(2.414213562373095).epsilon(1e-14));
  CHECK(biseparable_witness_bound(Model::Heisenberg) > 2.0);
  CHECK(biseparable_witness_bound(Model::XY) > 2.0);

  CHECK(witness_verdict(-4.0, Model::Heisenberg));       // witness ground state
  CHECK_FALSE(witness_verdict(2.0, Model::Heisenberg));  // GHZ triple
  CHECK(witness_verdict(-2.0 * std::sqrt(2.0), Model::XY));
  CHECK_FALSE(witness_verdict(1.0 + std::sqrt(5.0), Model::Heisenberg));  // strict
}

TEST_CASE("tiling consistency on a translationally invariant gibbs state") {
  const ChainSpec spec{Model::Heisenberg, 6, 1.0, Boundary::Periodic};
  const auto dec = diagonalize(build_hamiltonian(spec));
  const ThermalEnsemble ensemble(dec, 0.5);
  const double u = internal_energy(ensemble);
  REQUIRE(u < bound_value(spec.model, BoundClass::R3, spec.n_sites, spec.coupling));

  double tiling_sum = 0.0;
  for (int t = 0; t < spec.n_sites / 2; ++t) {
    const int i = 2 * t + 1;
    const int j = 2 * t + 2;
    const int k = (2 * t + 2) % spec.n_sites + 1;
    std::vector<int> sites{i, j, k};
    std::sort(sites.begin(), sites.end());
    // Qubits of the reduced state are ordered by site index, so the witness
    // bonds are re-addressed through each site's position in that order.
    const auto pos = [&sites](int site) {
      return static_cast<int>(std::find(sites.begin(), sites.end(), site) -
                              sites.begin()) + 1;
    };
    const auto w_tile = witness_on_chain(
        ChainSpec{spec.model, 3, 1.0, Boundary::Open}, pos(i), pos(j), pos(k));
    const double w_value =
        expectation(w_tile, reduced_thermal_density_matrix(ensemble, sites));
    tiling_sum += w_value;
    // Translation invariance makes every tile beat the biseparable bound.
    CHECK(w_value < -biseparable_witness_bound(spec.model));
    CHECK(witness_verdict(w_value, spec.model));
  }
  CHECK(tiling_sum == doctest::Approx(u / spec.coupling).epsilon(1e-9));
}
