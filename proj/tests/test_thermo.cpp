#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <random>

#include "spinent/oracle.hpp"
#include "spinent/thermo.hpp"
#include "spinent/thresholds.hpp"

using namespace spinent;

namespace {

const SpectralDecomposition& heisenberg_decomposition(int n) {
  static std::map<int, SpectralDecomposition> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, diagonalize(build_hamiltonian(
                              {Model::Heisenberg, n, 1.0, Boundary::Periodic})))
             .first;
  }
  return it->second;
}

Eigen::VectorXcd random_state(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd psi(dim);
  for (int i = 0; i < dim; ++i) psi(i) = std::complex<double>(gauss(rng), gauss(rng));
  psi.normalize();
  return psi;
}

}  // namespace

TEST_CASE("diagonalization reproduces the operator") {
  for (Model model : {Model::Heisenberg, Model::XY}) {
    const auto h = build_hamiltonian({model, 6, 1.0, Boundary::Periodic});
    const auto dec = diagonalize(h);
    const Eigen::MatrixXd v = dec.eigenvector_matrix();
    const double scale = h.matrix().cwiseAbs().maxCoeff();
    CHECK((v * dec.eigenvalues().asDiagonal() * v.transpose() - h.matrix())
              .cwiseAbs()
              .maxCoeff() <= 1e-9 * scale);
    CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(h.dim(), h.dim()))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    // Eigenvalues ascending, summing to the zero trace.
    for (Eigen::Index i = 1; i < dec.dim(); ++i) {
      CHECK(dec.eigenvalues()(i) >= dec.eigenvalues()(i - 1));
    }
    CHECK(dec.eigenvalues().sum() == doctest::Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("ground energies") {
  CHECK(heisenberg_decomposition(4).ground_energy() == doctest::Approx(-8.0));
  // Thermodynamic-limit anchor -(4 ln 2 - 1) with finite-size room.
  const double per_site = heisenberg_decomposition(12).ground_energy() / 12.0;
  CHECK(per_site >= -1.82);
  CHECK(per_site <= -1.77);
  CHECK(std::abs(per_site - (-(4.0 * std::log(2.0) - 1.0))) <= 0.05);
}

TEST_CASE("internal energy") {
  const auto& dec = heisenberg_decomposition(4);
  SUBCASE("U(0) equals the ground energy") {
    CHECK(internal_energy(ThermalEnsemble(dec, 0.0)) == doctest::Approx(-8.0));
  }
  SUBCASE("U at huge and infinite T approaches the traceless mean") {
    CHECK(std::abs(internal_energy(ThermalEnsemble(dec, 1e6))) <= 1e-3 * 4);
    CHECK(std::abs(internal_energy(
              ThermalEnsemble(dec, std::numeric_limits<double>::infinity()))) <=
          1e-12 * 4);
  }
  SUBCASE("U is non-decreasing on a grid") {
    double prev = internal_energy(ThermalEnsemble(dec, 0.0));
    for (int i = 1; i <= 50; ++i) {
      const double u = internal_energy(ThermalEnsemble(dec, 0.1 * i));
      CHECK(u >= prev - 1e-12);
      prev = u;
    }
  }
  SUBCASE("weights normalize at extreme temperatures") {
    for (double t : {std::numeric_limits<double>::infinity(), 1.0, 0.1, 1e-6}) {
      CHECK(ThermalEnsemble(dec, t).weights().sum() ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("negative temperature is rejected") {
    CHECK_THROWS_AS(ThermalEnsemble(dec, -0.5), std::invalid_argument);
  }
}

TEST_CASE("degenerate ground sector is averaged uniformly at T = 0") {
  // The two-bond witness has a twofold ground space at -4.
  const auto dec = diagonalize(build_witness_operator(1, 2, 3, Model::Heisenberg));
  const ThermalEnsemble ensemble(dec, 0.0);
  CHECK(ensemble.weights()(0) == doctest::Approx(0.5));
  CHECK(ensemble.weights()(1) == doctest::Approx(0.5));
  CHECK(ensemble.weights().tail(6).cwiseAbs().maxCoeff() == 0.0);
  CHECK(internal_energy(ensemble) == doctest::Approx(-4.0));
}

TEST_CASE("thermal density matrices") {
  SUBCASE("T = 0 with a unique ground state is a rank-1 projector") {
    const auto& dec = heisenberg_decomposition(4);
    const auto rho = thermal_density_matrix(ThermalEnsemble(dec, 0.0));
    CHECK((rho.matrix() * rho.matrix() - rho.matrix()).cwiseAbs().maxCoeff() <=
          1e-12);
    CHECK(rho.matrix().trace().real() == doctest::Approx(1.0));
  }
  SUBCASE("very hot states approach the maximally mixed state") {
    const auto& dec = heisenberg_decomposition(4);
    const auto rho = thermal_density_matrix(ThermalEnsemble(dec, 1e8));
    CHECK((rho.matrix() - Eigen::MatrixXcd::Identity(16, 16) / 16.0)
              .cwiseAbs()
              .maxCoeff() <= 1e-6);
  }
  SUBCASE("Tr(rho H) equals the spectral internal energy at N = 8") {
    const auto& dec = heisenberg_decomposition(8);
    const auto h = build_hamiltonian({Model::Heisenberg, 8, 1.0, Boundary::Periodic});
    for (double t : {0.5, 1.0, 2.0}) {
      const ThermalEnsemble ensemble(dec, t);
      CHECK(std::abs(expectation(h, thermal_density_matrix(ensemble)) -
                     internal_energy(ensemble)) <= 1e-9 * 8);
    }
  }
  SUBCASE("registers above ten sites are rejected") {
    CHECK_THROWS_AS(thermal_density_matrix(ThermalEnsemble(
                        heisenberg_decomposition(12), 1.0)),
                    std::invalid_argument);
  }
}

TEST_CASE("reduced density matrices") {
  SUBCASE("one qubit of the singlet is maximally mixed") {
    Eigen::VectorXcd singlet(4);
    singlet << 0.0, -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0;
    const auto rho = reduced_density_matrix(singlet, {1});
    CHECK((rho.matrix() - Eigen::MatrixXcd::Identity(2, 2) / 2.0)
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
  }
  SUBCASE("three qubits of GHZ4 form the classical mixture") {
    const auto rho = reduced_density_matrix(ghz_state(4), {1, 2, 3});
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(8, 8);
    expected(0, 0) = 0.5;
    expected(7, 7) = 0.5;
    CHECK((rho.matrix() - expected).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("reduced expectations agree with embedded ones on random states") {
    for (int n : {6, 8}) {
      const ChainSpec spec{Model::Heisenberg, n, 1.0, Boundary::Periodic};
      const auto w8 = build_witness_operator(1, 2, 3, spec.model);
      const auto w_full = witness_on_chain(spec, 1, 2, 3);
      for (std::uint64_t seed : {11u, 22u, 33u}) {
        const auto psi = random_state(1 << n, seed);
        const auto rho = reduced_density_matrix(psi, {1, 2, 3});
        CHECK(std::abs(expectation(w8, rho) - expectation(w_full, psi)) <= 1e-10);
      }
    }
  }
  SUBCASE("density-matrix input agrees with the pure-state path") {
    const auto psi = random_state(64, 77);
    const auto from_rho = reduced_density_matrix(DensityMatrix::pure(psi), {2, 5});
    const auto from_psi = reduced_density_matrix(psi, {2, 5});
    CHECK((from_rho.matrix() - from_psi.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("invalid subsets are rejected") {
    const auto psi = random_state(16, 5);
    CHECK_THROWS_AS(reduced_density_matrix(psi, {}), std::invalid_argument);
    CHECK_THROWS_AS(reduced_density_matrix(psi, {1, 2, 3, 4, 5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(reduced_density_matrix(psi, {2, 1}), std::invalid_argument);
    CHECK_THROWS_AS(reduced_density_matrix(psi, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(reduced_density_matrix(psi, {1, 9}), std::invalid_argument);
  }
}

TEST_CASE("reduced thermal states agree with the full gibbs matrix") {
  const auto& dec = heisenberg_decomposition(8);
  const ThermalEnsemble ensemble(dec, 1.0);
  const auto full = thermal_density_matrix(ensemble);
  const auto direct = reduced_thermal_density_matrix(ensemble, {1, 2});
  const auto via_full = reduced_density_matrix(full, {1, 2});
  CHECK((direct.matrix() - via_full.matrix()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("two-qubit PPT test") {
  SUBCASE("singlet is entangled with PT eigenvalue -1/2") {
    Eigen::VectorXcd singlet(4);
    singlet << 0.0, -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0;
    const auto result = two_qubit_entangled(DensityMatrix::pure(singlet));
    CHECK(result.entangled);
    CHECK(result.min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));
  }
  SUBCASE("maximally mixed is separable") {
    const auto result =
        two_qubit_entangled(DensityMatrix(Eigen::MatrixXcd::Identity(4, 4) / 4.0));
    CHECK_FALSE(result.entangled);
    CHECK(result.min_eigenvalue >= 0.25 - 1e-12);
  }
  SUBCASE("nearest-neighbor gibbs pair below T_R2 is entangled") {
    const auto& dec = heisenberg_decomposition(8);
    const auto threshold = threshold_temperature(dec, BoundClass::R2);
    REQUIRE(threshold.has_value());
    const ThermalEnsemble ensemble(dec, 0.95 * threshold->temperature);
    const auto pair = reduced_thermal_density_matrix(ensemble, {1, 2});
    CHECK(two_qubit_entangled(pair).entangled);
  }
  SUBCASE("wrong dimension is rejected") {
    CHECK_THROWS_AS(
        two_qubit_entangled(DensityMatrix(Eigen::MatrixXcd::Identity(8, 8) / 8.0)),
        std::invalid_argument);
  }
}

TEST_CASE("density matrix validation") {
  SUBCASE("non-hermitian, wrong-trace and negative matrices are rejected") {
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(DensityMatrix{bad}, std::invalid_argument);
    CHECK_THROWS_AS(DensityMatrix(Eigen::MatrixXcd::Identity(2, 2)),
                    std::invalid_argument);
    Eigen::MatrixXcd negative = Eigen::MatrixXcd::Zero(2, 2);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix{negative}, std::invalid_argument);
  }
  SUBCASE("eigenvalue noise just below zero is clipped") {
    Eigen::MatrixXcd noisy = Eigen::MatrixXcd::Zero(2, 2);
    noisy(0, 0) = 1.0 + 5e-11;
    noisy(1, 1) = -5e-11;
    const DensityMatrix rho(noisy);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
    CHECK(solver.eigenvalues().minCoeff() >= 0.0);
    CHECK(rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }
}
