#pragma once
// Spin-ring Hamiltonians, local witness operators and Pauli-string
// observables as explicit real symmetric matrices.
//
// Conventions used throughout the library:
//   - sites are 1-based; site s occupies bit (s-1) of the basis index
//   - bit set means |1>, with sigma_z|0> = +|0>, sigma_z|1> = -|1>
//   - energies are in units of J, temperatures in J/k_B
//
// Both model Hamiltonians are real symmetric in this basis (the two
// sigma_y factors of every bond contribute a real sign) and commute with
// total sigma_z, so every operator here is stored as a real dense matrix
// with an optional magnetization block structure.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spinent {

enum class Model { Heisenberg, XY };
enum class Boundary { Periodic, Open };

// Largest ring supported by dense diagonalization (largest sector block
// C(14,7) = 3432). Larger requests are rejected, not attempted.
inline constexpr int kMaxSites = 14;

std::string model_name(Model model);

// Problem identity: model, size, coupling and boundary.
struct ChainSpec {
  Model model = Model::Heisenberg;
  int n_sites = 4;
  double coupling = 1.0;  // J > 0 (antiferromagnetic)
  Boundary boundary = Boundary::Periodic;

  // Throws std::invalid_argument on: J <= 0, odd or short periodic rings,
  // open segments longer than 4 sites, n_sites above the dense ceiling.
  void validate() const;

  // Ring bonds (i, i+1), 1-based; bond (N, 1) included iff periodic.
  std::vector<std::pair<int, int>> bonds() const;
};

enum class Axis { X, Y, Z };

// coefficient * product of single-site Pauli factors, each site at most once.
struct PauliString {
  double coefficient = 1.0;
  std::vector<std::pair<int, Axis>> factors;  // (site, axis), sites unique

  void validate(int n_sites) const;
};

// Real symmetric operator on an n-qubit register.
class HermitianOperator {
 public:
  HermitianOperator(int n_sites, Eigen::MatrixXd matrix,
                    std::optional<ChainSpec> source = std::nullopt);

  int n_sites() const { return n_sites_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const std::optional<ChainSpec>& source() const { return source_; }

  double trace() const { return matrix_.trace(); }
  // True when all elements between different total-sigma_z sectors vanish.
  bool conserves_magnetization(double tol = 1e-12) const;

 private:
  int n_sites_;
  Eigen::MatrixXd matrix_;
  std::optional<ChainSpec> source_;
};

// One total-sigma_z block: magnetization = n_sites - 2*popcount.
struct SectorBlock {
  int magnetization;
  std::vector<int> basis_states;  // ascending basis indices of the sector
  Eigen::MatrixXd block;
};

// H = J * sum over ring bonds of (sx sx + sy sy [+ sz sz]).
HermitianOperator build_hamiltonian(const ChainSpec& spec);

// Dimensionless two-bond witness W_ijk = (bond ij) + (bond jk) on the
// 8-dimensional space of the triple, slots ordered (i, j, k). Three Pauli
// couplings per bond for Heisenberg, two for the XY model.
HermitianOperator build_witness_operator(int i, int j, int k, Model model);

// W_ijk embedded in the full register of `spec` (dimensionless).
HermitianOperator witness_on_chain(const ChainSpec& spec, int i, int j, int k);

// Dense matrix of a Pauli string. Requires an even number of Y factors
// (odd-Y strings are imaginary antisymmetric in this basis).
HermitianOperator pauli_matrix(const PauliString& p, int n_sites);

// <psi|O|psi>, exact real for symmetric O. Throws on dimension mismatch or
// if the state norm deviates from 1 by more than 1e-10.
double expectation(const HermitianOperator& op, const Eigen::VectorXcd& psi);
double expectation(const HermitianOperator& op, const Eigen::VectorXd& psi);

// Splits a magnetization-conserving operator into dense sector blocks whose
// spectra union to the full spectrum. Throws if any off-block element
// exceeds 1e-12.
std::vector<SectorBlock> sector_blocks(const HermitianOperator& op);

}  // namespace spinent
