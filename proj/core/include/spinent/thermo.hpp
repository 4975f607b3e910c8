#pragma once
// Spectral decompositions, Gibbs ensembles, internal energy, reduced
// density matrices and the two-qubit PPT entanglement test.

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <vector>

#include "spinent/hilbert.hpp"

namespace spinent {

// Raised when the dense eigensolver fails to converge.
struct EigensolverError : std::runtime_error {
  explicit EigensolverError(const std::string& what) : std::runtime_error(what) {}
};

// Full spectrum (ascending) with eigenvectors kept in per-sector compressed
// form; a full 2^N x 2^N eigenvector matrix is only materialized on demand.
class SpectralDecomposition {
 public:
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  double ground_energy() const { return eigenvalues_(0); }
  Eigen::Index dim() const { return eigenvalues_.size(); }
  int n_sites() const { return n_sites_; }
  const std::optional<ChainSpec>& source() const { return source_; }

  // Scatters eigenvector i (ascending-eigenvalue order) into the full basis.
  Eigen::VectorXd eigenvector(Eigen::Index i) const;
  // Full orthonormal column matrix; intended for small registers.
  Eigen::MatrixXd eigenvector_matrix() const;
  // sum_i weights(i) |v_i><v_i| assembled at per-block cost.
  Eigen::MatrixXd weighted_projector_sum(const Eigen::VectorXd& weights) const;

 private:
  struct Block {
    std::vector<int> basis_states;
    Eigen::MatrixXd vectors;  // columns in the local sector basis
  };

  friend SpectralDecomposition diagonalize(const HermitianOperator& op);

  std::vector<Block> blocks_;
  std::vector<std::pair<int, int>> location_;  // global index -> (block, column)
  Eigen::VectorXd eigenvalues_;
  int n_sites_ = 0;
  std::optional<ChainSpec> source_;
};

// Blocked when the operator conserves magnetization, dense otherwise.
// Sector blocks are solved concurrently and merged deterministically.
SpectralDecomposition diagonalize(const HermitianOperator& op);

// Hermitian, unit-trace, positive semidefinite matrix on 2^m dimensions.
// Construction validates trace to 1e-10 and eigenvalues to -1e-10;
// eigenvalue noise in (-1e-10, 0) is clipped to zero.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd matrix);
  static DensityMatrix pure(const Eigen::VectorXcd& psi);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  struct Trusted {};
  DensityMatrix(Eigen::MatrixXcd matrix, Trusted);
  friend DensityMatrix thermal_density_matrix(const class ThermalEnsemble&);
  friend DensityMatrix reduced_density_matrix(const DensityMatrix&,
                                              const std::vector<int>&);
  friend DensityMatrix reduced_density_matrix(const Eigen::VectorXcd&,
                                              const std::vector<int>&);
  friend DensityMatrix reduced_thermal_density_matrix(const ThermalEnsemble&,
                                                      const std::vector<int>&);

  Eigen::MatrixXcd matrix_;
  int n_qubits_;
};

// Gibbs ensemble over a spectral decomposition. T = 0 yields the uniform
// mixture over the (possibly degenerate) ground sector; T may be +infinity.
// Boltzmann weights are always computed from shifted energies E_i - E_0, so
// no beta overflows. The decomposition must outlive the ensemble.
class ThermalEnsemble {
 public:
  ThermalEnsemble(const SpectralDecomposition& decomposition, double temperature);

  double temperature() const { return temperature_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const SpectralDecomposition& decomposition() const { return *decomposition_; }

 private:
  const SpectralDecomposition* decomposition_;
  double temperature_;
  Eigen::VectorXd weights_;
};

// U(T) = sum_i E_i w_i; equals E_0 at T = 0 and tends to 0 as T -> inf.
double internal_energy(const ThermalEnsemble& ensemble);

// Full Gibbs matrix sum_i w_i |v_i><v_i|; registers above 10 qubits are
// rejected (use reduced_thermal_density_matrix instead).
DensityMatrix thermal_density_matrix(const ThermalEnsemble& ensemble);

// Partial trace onto `sites` (1-based, ascending, at most 4 sites).
DensityMatrix reduced_density_matrix(const DensityMatrix& rho,
                                     const std::vector<int>& sites);
DensityMatrix reduced_density_matrix(const Eigen::VectorXcd& psi,
                                     const std::vector<int>& sites);

// Eigenvector-weighted partial trace of the Gibbs state; never forms the
// full 2^N matrix, so it works at any supported N.
DensityMatrix reduced_thermal_density_matrix(const ThermalEnsemble& ensemble,
                                             const std::vector<int>& sites);

struct PptResult {
  bool entangled;             // some partial-transpose eigenvalue < -1e-10
  double min_eigenvalue;      // smallest partial-transpose eigenvalue
};

// Peres-Horodecki test, necessary and sufficient for two qubits.
PptResult two_qubit_entangled(const DensityMatrix& rho);

// Tr(rho O); throws on dimension mismatch.
double expectation(const HermitianOperator& op, const DensityMatrix& rho);

}  // namespace spinent
