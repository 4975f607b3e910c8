#include "spinent/thermo.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spinent/optimize.hpp"

namespace spinent {

// ---------------------------------------------------------------------------
// Diagonalization
// ---------------------------------------------------------------------------

namespace {

struct SolvedBlock {
  std::vector<int> basis_states;
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

SolvedBlock solve_block(std::vector<int> basis, const Eigen::MatrixXd& block) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
  if (solver.info() != Eigen::Success) {
    throw EigensolverError("symmetric eigensolver failed to converge");
  }
  return SolvedBlock{std::move(basis), solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

SpectralDecomposition diagonalize(const HermitianOperator& op) {
  std::vector<SolvedBlock> solved;
  if (op.conserves_magnetization()) {
    auto sectors = sector_blocks(op);
    solved.resize(sectors.size());
    parallel_for_index(static_cast<int>(sectors.size()), [&](int b) {
      solved[b] = solve_block(std::move(sectors[b].basis_states), sectors[b].block);
    });
  } else {
    std::vector<int> basis(op.dim());
    std::iota(basis.begin(), basis.end(), 0);
    solved.push_back(solve_block(std::move(basis), op.matrix()));
  }

  // Merge ascending; ties resolve by (block, column) so the order is
  // deterministic regardless of how blocks were scheduled.
  struct Entry {
    double value;
    int block;
    int column;
  };
  std::vector<Entry> entries;
  entries.reserve(op.dim());
  for (int b = 0; b < static_cast<int>(solved.size()); ++b) {
    for (int c = 0; c < solved[b].values.size(); ++c) {
      entries.push_back(Entry{solved[b].values(c), b, c});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.block != b.block) return a.block < b.block;
    return a.column < b.column;
  });

  SpectralDecomposition dec;
  dec.n_sites_ = op.n_sites();
  dec.source_ = op.source();
  dec.eigenvalues_.resize(entries.size());
  dec.location_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    dec.eigenvalues_(static_cast<Eigen::Index>(i)) = entries[i].value;
    dec.location_.emplace_back(entries[i].block, entries[i].column);
  }
  dec.blocks_.reserve(solved.size());
  for (auto& s : solved) {
    dec.blocks_.push_back(
        SpectralDecomposition::Block{std::move(s.basis_states), std::move(s.vectors)});
  }
  return dec;
}

Eigen::VectorXd SpectralDecomposition::eigenvector(Eigen::Index i) const {
  const auto& [b, c] = location_.at(static_cast<std::size_t>(i));
  const Block& block = blocks_[b];
  Eigen::VectorXd full = Eigen::VectorXd::Zero(Eigen::Index{1} << n_sites_);
  for (std::size_t r = 0; r < block.basis_states.size(); ++r) {
    full(block.basis_states[r]) = block.vectors(static_cast<Eigen::Index>(r), c);
  }
  return full;
}

Eigen::MatrixXd SpectralDecomposition::eigenvector_matrix() const {
  const Eigen::Index d = dim();
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& [b, c] = location_[static_cast<std::size_t>(i)];
    const Block& block = blocks_[b];
    for (std::size_t r = 0; r < block.basis_states.size(); ++r) {
      v(block.basis_states[r], i) = block.vectors(static_cast<Eigen::Index>(r), c);
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Density matrices
// ---------------------------------------------------------------------------

namespace {

int qubit_count_for_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw std::invalid_argument("density matrix dimension is not a power of two");
  }
  return n;
}

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix)
    : matrix_(std::move(matrix)), n_qubits_(0) {
  if (matrix_.rows() != matrix_.cols()) {
    throw std::invalid_argument("density matrix must be square");
  }
  n_qubits_ = qubit_count_for_dim(matrix_.rows());
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(matrix_.trace().real() - 1.0) > 1e-10 ||
      std::abs(matrix_.trace().imag()) > 1e-10) {
    throw std::invalid_argument("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_);
  if (solver.info() != Eigen::Success) {
    throw EigensolverError("density matrix eigensolver failed");
  }
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -1e-10) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
  if (min_eig < 0.0) {
    // Clip eigensolver noise and restore the unit trace.
    Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
    clipped /= clipped.sum();
    matrix_ = solver.eigenvectors() * clipped.asDiagonal() *
              solver.eigenvectors().adjoint();
  }
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix, Trusted)
    : matrix_(std::move(matrix)), n_qubits_(qubit_count_for_dim(matrix_.rows())) {}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("state vector is not normalized");
  }
  return DensityMatrix(psi * psi.adjoint(), Trusted{});
}

// ---------------------------------------------------------------------------
// Thermal ensembles
// ---------------------------------------------------------------------------

ThermalEnsemble::ThermalEnsemble(const SpectralDecomposition& decomposition,
                                 double temperature)
    : decomposition_(&decomposition), temperature_(temperature) {
  if (std::isnan(temperature) || temperature < 0.0) {
    throw std::invalid_argument("temperature must be non-negative");
  }
  const Eigen::VectorXd& e = decomposition.eigenvalues();
  const Eigen::Index n = e.size();
  weights_.resize(n);
  if (temperature == 0.0) {
    // Uniform mixture over the (possibly degenerate) ground sector.
    const double tol = 1e-9 * std::max(1.0, std::abs(e(0)));
    Eigen::Index count = 0;
    while (count < n && e(count) - e(0) <= tol) ++count;
    weights_.setZero();
    weights_.head(count).setConstant(1.0 / static_cast<double>(count));
  } else if (std::isinf(temperature)) {
    weights_.setConstant(1.0 / static_cast<double>(n));
  } else {
    // Shifted exponentials never overflow at any beta.
    weights_ = ((e.array() - e(0)) / -temperature).exp();
    weights_ /= weights_.sum();
  }
}

double internal_energy(const ThermalEnsemble& ensemble) {
  return ensemble.weights().dot(ensemble.decomposition().eigenvalues());
}

Eigen::MatrixXd SpectralDecomposition::weighted_projector_sum(
    const Eigen::VectorXd& weights) const {
  const Eigen::Index d = dim();
  if (weights.size() != d) {
    throw std::invalid_argument("one weight per eigenvector required");
  }
  // Per-block weight slices keep the assembly at block cost.
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  std::vector<Eigen::VectorXd> by_block;
  by_block.reserve(blocks_.size());
  for (const auto& block : blocks_) {
    by_block.emplace_back(Eigen::VectorXd::Zero(block.vectors.cols()));
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& [b, c] = location_[static_cast<std::size_t>(i)];
    by_block[b](c) = weights(i);
  }
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& block = blocks_[b];
    const Eigen::Index bdim = block.vectors.rows();
    const Eigen::MatrixXd g =
        block.vectors * by_block[b].asDiagonal() * block.vectors.transpose();
    for (Eigen::Index cc = 0; cc < bdim; ++cc) {
      for (Eigen::Index rr = 0; rr < bdim; ++rr) {
        out(block.basis_states[rr], block.basis_states[cc]) += g(rr, cc);
      }
    }
  }
  return out;
}

DensityMatrix thermal_density_matrix(const ThermalEnsemble& ensemble) {
  const SpectralDecomposition& dec = ensemble.decomposition();
  if (dec.n_sites() > 10) {
    throw std::invalid_argument(
        "full thermal density matrices are capped at 10 sites");
  }
  Eigen::MatrixXd rho = dec.weighted_projector_sum(ensemble.weights());
  return DensityMatrix(rho.cast<std::complex<double>>(), DensityMatrix::Trusted{});
}

// ---------------------------------------------------------------------------
// Partial traces
// ---------------------------------------------------------------------------

namespace {

struct TraceIndexing {
  std::vector<Eigen::Index> sub;   // local index -> scattered bits
  std::vector<Eigen::Index> env;   // environment index -> scattered bits
};

TraceIndexing build_indexing(int n_sites, const std::vector<int>& sites) {
  if (sites.empty() || sites.size() > 4) {
    throw std::invalid_argument("reduced states are supported for 1 to 4 sites");
  }
  for (std::size_t t = 0; t < sites.size(); ++t) {
    if (sites[t] < 1 || sites[t] > n_sites) {
      throw std::invalid_argument("reduced-state site outside the register");
    }
    if (t > 0 && sites[t] <= sites[t - 1]) {
      throw std::invalid_argument("reduced-state sites must be strictly ascending");
    }
  }
  std::vector<int> kept_bits, env_bits;
  for (int s : sites) kept_bits.push_back(s - 1);
  for (int b = 0; b < n_sites; ++b) {
    if (std::find(kept_bits.begin(), kept_bits.end(), b) == kept_bits.end()) {
      env_bits.push_back(b);
    }
  }
  TraceIndexing ix;
  ix.sub.resize(Eigen::Index{1} << kept_bits.size());
  for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(ix.sub.size()); ++a) {
    Eigen::Index scattered = 0;
    for (std::size_t t = 0; t < kept_bits.size(); ++t) {
      if ((a >> t) & 1) scattered |= Eigen::Index{1} << kept_bits[t];
    }
    ix.sub[a] = scattered;
  }
  ix.env.resize(Eigen::Index{1} << env_bits.size());
  for (Eigen::Index e = 0; e < static_cast<Eigen::Index>(ix.env.size()); ++e) {
    Eigen::Index scattered = 0;
    for (std::size_t t = 0; t < env_bits.size(); ++t) {
      if ((e >> t) & 1) scattered |= Eigen::Index{1} << env_bits[t];
    }
    ix.env[e] = scattered;
  }
  return ix;
}

Eigen::MatrixXcd partial_trace_pure(const Eigen::VectorXcd& psi,
                                    const TraceIndexing& ix) {
  const Eigen::Index sub_dim = static_cast<Eigen::Index>(ix.sub.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(sub_dim, sub_dim);
  Eigen::VectorXcd slice(sub_dim);
  for (Eigen::Index e = 0; e < static_cast<Eigen::Index>(ix.env.size()); ++e) {
    const Eigen::Index base = ix.env[e];
    for (Eigen::Index a = 0; a < sub_dim; ++a) slice(a) = psi(base | ix.sub[a]);
    rho.noalias() += slice * slice.adjoint();
  }
  return rho;
}

}  // namespace

DensityMatrix reduced_density_matrix(const DensityMatrix& rho,
                                     const std::vector<int>& sites) {
  const TraceIndexing ix = build_indexing(rho.n_qubits(), sites);
  const Eigen::Index sub_dim = static_cast<Eigen::Index>(ix.sub.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(sub_dim, sub_dim);
  for (Eigen::Index e = 0; e < static_cast<Eigen::Index>(ix.env.size()); ++e) {
    const Eigen::Index base = ix.env[e];
    for (Eigen::Index b = 0; b < sub_dim; ++b) {
      for (Eigen::Index a = 0; a < sub_dim; ++a) {
        out(a, b) += rho.matrix()(base | ix.sub[a], base | ix.sub[b]);
      }
    }
  }
  return DensityMatrix(std::move(out), DensityMatrix::Trusted{});
}

DensityMatrix reduced_density_matrix(const Eigen::VectorXcd& psi,
                                     const std::vector<int>& sites) {
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("state vector is not normalized");
  }
  const TraceIndexing ix = build_indexing(qubit_count_for_dim(psi.size()), sites);
  return DensityMatrix(partial_trace_pure(psi, ix), DensityMatrix::Trusted{});
}

DensityMatrix reduced_thermal_density_matrix(const ThermalEnsemble& ensemble,
                                             const std::vector<int>& sites) {
  const SpectralDecomposition& dec = ensemble.decomposition();
  const TraceIndexing ix = build_indexing(dec.n_sites(), sites);
  const Eigen::Index sub_dim = static_cast<Eigen::Index>(ix.sub.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(sub_dim, sub_dim);
  double included = 0.0;
  for (Eigen::Index i = 0; i < dec.dim(); ++i) {
    const double w = ensemble.weights()(i);
    if (w < 1e-16) continue;
    included += w;
    out += w * partial_trace_pure(
                   dec.eigenvector(i).cast<std::complex<double>>(), ix);
  }
  out /= included;  // discards only weights below 1e-16
  return DensityMatrix(std::move(out), DensityMatrix::Trusted{});
}

// ---------------------------------------------------------------------------
// Two-qubit PPT test
// ---------------------------------------------------------------------------

PptResult two_qubit_entangled(const DensityMatrix& rho) {
  if (rho.dim() != 4) {
    throw std::invalid_argument("PPT test expects a two-qubit density matrix");
  }
  // Transpose the second qubit (bit 1 of the basis index).
  Eigen::MatrixXcd pt(4, 4);
  for (int c = 0; c < 4; ++c) {
    for (int r = 0; r < 4; ++r) {
      const int rp = (r & 1) | (c & 2);
      const int cp = (c & 1) | (r & 2);
      pt(r, c) = rho.matrix()(rp, cp);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(pt, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  return PptResult{min_eig < -1e-10, min_eig};
}

double expectation(const HermitianOperator& op, const DensityMatrix& rho) {
  if (rho.dim() != op.dim()) {
    throw std::invalid_argument("density matrix dimension does not match operator");
  }
  // Tr(O rho) is real for symmetric O and Hermitian rho.
  return op.matrix().cwiseProduct(rho.matrix().real()).sum();
}

}  // namespace spinent
