#pragma once
// Brute-force and constructive verification of every inequality the energy
// bounds rest on, plus generators for the named saturating states.
//
// Everything here is a pure function of (inputs, seed). Sweeps draw
// per-sample seeds from the master seed by index, so results do not depend
// on thread scheduling.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinent/optimize.hpp"
#include "spinent/thermo.hpp"
#include "spinent/witness.hpp"

namespace spinent {

// ---------------------------------------------------------------------------
// Named states
// ---------------------------------------------------------------------------

// |psi-> x |psi-> x ... on bonds (1,2), (3,4), ...; saturates the Heisenberg
// 2-producible bound at -(3/2) J N. n even.
Eigen::VectorXcd singlet_chain_state(int n_sites);

// Product of identical non-maximally entangled two-qubit states on bonds
// (1,2), (3,4), ...; saturates the XY 2-producible bound at -(9/8) J N.
// The two-qubit block is verified rank-1, PSD and unit-trace on construction.
DensityMatrix xy_dimer_chain_state(int n_sites);

// The pure two-qubit block of the dimer chain.
Eigen::VectorXcd xy_dimer_block_state();

// (|0...0> + |1...1>)/sqrt(2), n >= 3.
Eigen::VectorXcd ghz_state(int n_sites);

// ---------------------------------------------------------------------------
// Producible families and sampling
// ---------------------------------------------------------------------------

// Partition of sites into blocks of size <= 2; k = 1 blocks give fully
// separable states, size-2 blocks allow pair entanglement (2-producible).
struct ProducibleFamily {
  int n_sites;
  std::vector<std::vector<int>> blocks;  // disjoint, union = all sites

  int max_block_size() const;
  void validate() const;  // throws std::invalid_argument
};

ProducibleFamily fully_separable_family(int n_sites);
// Nearest-neighbor dimer covering; offset 0 pairs (1,2),(3,4),...,
// offset 1 pairs (2,3),(4,5),...,(N,1). A ring admits exactly these two.
ProducibleFamily dimer_covering(int n_sites, int offset);
// Random pairing with non-adjacent pairs and isolated singles.
ProducibleFamily random_pairing_with_singles(int n_sites, std::uint64_t seed);

// Tensor product of per-block Haar-random pure states (independent complex
// Gaussian components, normalized). Deterministic under seed.
Eigen::VectorXcd sample_producible(const ProducibleFamily& family,
                                   std::uint64_t seed);

// Product state over the family's blocks from explicit block factors
// (factor f has dimension 2^|block f|, local bit t = block site t).
Eigen::VectorXcd assemble_product_state(
    const ProducibleFamily& family,
    const std::vector<Eigen::VectorXcd>& factors);

// ---------------------------------------------------------------------------
// Pair and segment statistics
// ---------------------------------------------------------------------------

// chi = |Bloch_i|^2 + |Bloch_j|^2 + sum of squared diagonal correlators;
// chi <= 4 Tr(rho^2) - 1 <= 3 for every two-qubit state.
double chi_statistic(const DensityMatrix& rho2);

// XY counterpart with alpha^2 = 4/3 weights:
// xi = x_i^2 + y_i^2 + x_j^2 + y_j^2 + 2 alpha^2 beta^2 <= 3,
// where beta = (<xx> + <yy>)/2.
double xi_statistic(const DensityMatrix& rho2);

// Quadratic form bounded by 5 (Heisenberg) resp. 9/2 (XY) on three-qubit
// product states |phi_ij> x |phi_k>: Bloch of i, squared diagonal pair
// correlators (Heisenberg) or weighted planar correlators (XY), the squared
// j-k bond scalar built from single-site moments, and Bloch of k.
double segment_statistic(const Eigen::VectorXcd& pair_state,
                         const Eigen::VectorXcd& single_state, Model model);

// ---------------------------------------------------------------------------
// Optimization sweeps
// ---------------------------------------------------------------------------

struct OptimizationReport {
  std::string objective;
  double best_value;
  int restarts;
  std::vector<std::uint64_t> restart_seeds;
  double tolerance;           // convergence tolerance requested
  Eigen::VectorXcd best_state;  // full state achieving best_value
};

// Maximizes |<W_123>| over pure biseparable triples across the three
// bipartitions 1|23, 2|13 and 3|12, each parameterized as (single qubit
// state) x (two qubit state). Simplex search with >= 200 uniform restarts.
OptimizationReport maximize_witness_over_biseparable(Model model,
                                                     int restarts = 200,
                                                     std::uint64_t seed = 1,
                                                     bool parallel = true);

// Maximizes |<W_123>| over fully product triples (three Bloch vectors);
// the separable ceiling is 2 for both models.
OptimizationReport maximize_witness_over_product(Model model,
                                                 int restarts = 200,
                                                 std::uint64_t seed = 1,
                                                 bool parallel = true);

// Minimizes <H> over states of a fixed block family by exact per-block
// updates (each block is set to the ground state of its effective local
// operator until the energy stops decreasing), multistarted.
OptimizationReport minimize_energy_over_family(const ChainSpec& spec,
                                               const ProducibleFamily& family,
                                               int restarts = 24,
                                               std::uint64_t seed = 1,
                                               bool parallel = true);

// Convenience: minimum over both dimer coverings plus `n_random_pairings`
// random non-adjacent pairings with singles.
OptimizationReport minimize_energy_over_two_producible(
    const ChainSpec& spec, int n_random_pairings = 8, int restarts = 24,
    std::uint64_t seed = 1, bool parallel = true);

// ---------------------------------------------------------------------------
// One-shot certification (drives everything above)
// ---------------------------------------------------------------------------

// Sweep sizes and tolerances for the certification run; the defaults are
// the published configuration.
struct VerifyConfig {
  std::uint64_t seed = 1;
  int sweep_samples = 100000;       // per (model, family, N) energy sweep
  int statistic_samples = 100000;   // chi / xi / segment sweeps
  int witness_restarts = 200;
  int pairing_restarts = 24;
  int random_pairings = 8;
  std::vector<int> sweep_sizes = {6, 8};
  double bound_slack = 1e-9;        // numerical slack on strict inequalities
  double supremum_tol = 1e-4;       // optimizer must get this close
  double overshoot_tol = 1e-7;      // and never exceed a bound by more
  std::string counterexample_dir = ".";
  bool parallel = true;
  // Test hook: overrides the 2-producible bound coefficient so the failure
  // and counterexample machinery can be exercised end to end.
  std::optional<double> injected_c3_coefficient;
};

struct VerifyCheck {
  std::string name;
  bool passed;
  double observed;     // the extremal value the check saw
  std::string detail;  // human-readable one-liner
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  std::vector<std::string> counterexample_files;
  bool all_passed() const;
};

VerifyReport verify_all(const VerifyConfig& config = {});

// Plain-text amplitude dump (one "re im" pair per line, row-major), named
// counterexample_<objective>_<seed>.txt inside dir. Returns the path.
std::string write_counterexample(const std::string& dir,
                                 const std::string& objective,
                                 std::uint64_t seed,
                                 const Eigen::VectorXcd& state);

}  // namespace spinent
