#include "spinent/hilbert.hpp"

#include <bit>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace spinent {

namespace {

// sigma_x sigma_x + sigma_y sigma_y on anti-aligned bits flips both with
// amplitude 2 (the two contributions add); on aligned bits they cancel.
// sigma_z sigma_z is diagonal with sign +1 aligned / -1 anti-aligned.
void add_bond(Eigen::MatrixXd& m, int a_bit, int b_bit, double scale, bool with_zz) {
  const Eigen::Index dim = m.rows();
  const int flip = (1 << a_bit) | (1 << b_bit);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const bool a = (s >> a_bit) & 1;
    const bool b = (s >> b_bit) & 1;
    if (with_zz) m(s, s) += (a == b) ? scale : -scale;
    if (a != b) m(static_cast<Eigen::Index>(s) ^ flip, s) += 2.0 * scale;
  }
}

void check_dim_fits(int n_sites) {
  if (n_sites < 1 || n_sites > kMaxSites) {
    std::ostringstream os;
    os << "n_sites " << n_sites << " outside supported range [1, " << kMaxSites << "]";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

std::string model_name(Model model) {
  return model == Model::Heisenberg ? "heisenberg" : "xy";
}

void ChainSpec::validate() const {
  if (!(coupling > 0.0)) {
    throw std::invalid_argument("coupling J must be positive (antiferromagnetic)");
  }
  check_dim_fits(n_sites);
  if (boundary == Boundary::Periodic) {
    if (n_sites % 2 != 0) {
      throw std::invalid_argument("periodic rings require an even number of sites");
    }
    if (n_sites < 4) {
      throw std::invalid_argument(
          "periodic rings need at least 4 sites (a 2-ring degenerates to a double bond)");
    }
  } else {
    if (n_sites < 2 || n_sites > 4) {
      throw std::invalid_argument("open segments are supported for 2 to 4 sites only");
    }
  }
}

std::vector<std::pair<int, int>> ChainSpec::bonds() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i < n_sites; ++i) out.emplace_back(i, i + 1);
  if (boundary == Boundary::Periodic) out.emplace_back(n_sites, 1);
  return out;
}

void PauliString::validate(int n_sites) const {
  std::set<int> seen;
  for (const auto& [site, axis] : factors) {
    (void)axis;
    if (site < 1 || site > n_sites) {
      throw std::invalid_argument("Pauli factor site index out of range");
    }
    if (!seen.insert(site).second) {
      throw std::invalid_argument("Pauli string repeats a site");
    }
  }
}

HermitianOperator::HermitianOperator(int n_sites, Eigen::MatrixXd matrix,
                                     std::optional<ChainSpec> source)
    : n_sites_(n_sites), matrix_(std::move(matrix)), source_(std::move(source)) {
  check_dim_fits(n_sites);
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw std::invalid_argument("operator dimension must be 2^n_sites");
  }
  const double asym = (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    throw std::invalid_argument("operator matrix is not symmetric");
  }
}

bool HermitianOperator::conserves_magnetization(double tol) const {
  const Eigen::Index dim = matrix_.rows();
  for (Eigen::Index c = 0; c < dim; ++c) {
    const int pc = std::popcount(static_cast<unsigned>(c));
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (std::popcount(static_cast<unsigned>(r)) != pc &&
          std::abs(matrix_(r, c)) > tol) {
        return false;
      }
    }
  }
  return true;
}

HermitianOperator build_hamiltonian(const ChainSpec& spec) {
  spec.validate();
  const Eigen::Index dim = Eigen::Index{1} << spec.n_sites;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  const bool with_zz = spec.model == Model::Heisenberg;
  for (const auto& [i, j] : spec.bonds()) {
    add_bond(m, i - 1, j - 1, spec.coupling, with_zz);
  }
  return HermitianOperator(spec.n_sites, std::move(m), spec);
}

HermitianOperator build_witness_operator(int i, int j, int k, Model model) {
  if (i < 1 || j < 1 || k < 1 || i == j || j == k || i == k) {
    throw std::invalid_argument("witness sites must be positive and pairwise distinct");
  }
  // Slots (i, j, k) -> bits (0, 1, 2); the matrix is site-label independent.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, 8);
  const bool with_zz = model == Model::Heisenberg;
  add_bond(m, 0, 1, 1.0, with_zz);
  add_bond(m, 1, 2, 1.0, with_zz);
  return HermitianOperator(3, std::move(m));
}

HermitianOperator witness_on_chain(const ChainSpec& spec, int i, int j, int k) {
  spec.validate();
  if (i == j || j == k || i == k) {
    throw std::invalid_argument("witness sites must be pairwise distinct");
  }
  for (int s : {i, j, k}) {
    if (s < 1 || s > spec.n_sites) {
      throw std::invalid_argument("witness site outside the chain");
    }
  }
  const Eigen::Index dim = Eigen::Index{1} << spec.n_sites;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  const bool with_zz = spec.model == Model::Heisenberg;
  add_bond(m, i - 1, j - 1, 1.0, with_zz);
  add_bond(m, j - 1, k - 1, 1.0, with_zz);
  return HermitianOperator(spec.n_sites, std::move(m));
}

HermitianOperator pauli_matrix(const PauliString& p, int n_sites) {
  check_dim_fits(n_sites);
  p.validate(n_sites);

  int flip_mask = 0;   // X and Y flip the bit
  int sign_mask = 0;   // Y and Z contribute (-1)^bit
  int y_count = 0;
  for (const auto& [site, axis] : p.factors) {
    const int bit = 1 << (site - 1);
    if (axis == Axis::X || axis == Axis::Y) flip_mask |= bit;
    if (axis == Axis::Y || axis == Axis::Z) sign_mask |= bit;
    if (axis == Axis::Y) ++y_count;
  }
  if (y_count % 2 != 0) {
    throw std::invalid_argument(
        "Pauli strings with an odd number of Y factors are imaginary "
        "antisymmetric and have no real symmetric matrix");
  }
  // i^y_count is real for even y_count.
  const double y_phase = (y_count % 4 == 0) ? 1.0 : -1.0;

  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const int ones = std::popcount(static_cast<unsigned>(s & sign_mask));
    const double val = p.coefficient * y_phase * ((ones % 2 == 0) ? 1.0 : -1.0);
    m(s ^ flip_mask, s) += val;
  }
  return HermitianOperator(n_sites, std::move(m));
}

namespace {

void check_state_dim(const HermitianOperator& op, Eigen::Index state_dim) {
  if (state_dim != op.dim()) {
    throw std::invalid_argument("state dimension does not match operator");
  }
}

}  // namespace

double expectation(const HermitianOperator& op, const Eigen::VectorXcd& psi) {
  check_state_dim(op, psi.size());
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("state vector is not normalized");
  }
  // <psi|O|psi> = Re(psi)^T O Re(psi) + Im(psi)^T O Im(psi) for symmetric O.
  const Eigen::VectorXd re = psi.real();
  const Eigen::VectorXd im = psi.imag();
  return re.dot(op.matrix() * re) + im.dot(op.matrix() * im);
}

double expectation(const HermitianOperator& op, const Eigen::VectorXd& psi) {
  check_state_dim(op, psi.size());
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("state vector is not normalized");
  }
  return psi.dot(op.matrix() * psi);
}

std::vector<SectorBlock> sector_blocks(const HermitianOperator& op) {
  const Eigen::Index dim = op.dim();
  const int n = op.n_sites();

  std::vector<std::vector<int>> by_popcount(n + 1);
  for (Eigen::Index s = 0; s < dim; ++s) {
    by_popcount[std::popcount(static_cast<unsigned>(s))].push_back(static_cast<int>(s));
  }

  // Any element between different sectors breaks the decomposition.
  std::vector<int> sector_of(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    sector_of[s] = std::popcount(static_cast<unsigned>(s));
  }
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (sector_of[r] != sector_of[c] && std::abs(op.matrix()(r, c)) > 1e-12) {
        throw std::runtime_error("operator has off-block magnetization elements");
      }
    }
  }

  std::vector<SectorBlock> out;
  out.reserve(n + 1);
  for (int pc = 0; pc <= n; ++pc) {
    const auto& basis = by_popcount[pc];
    const Eigen::Index bdim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd block(bdim, bdim);
    for (Eigen::Index c = 0; c < bdim; ++c) {
      for (Eigen::Index r = 0; r < bdim; ++r) {
        block(r, c) = op.matrix()(basis[r], basis[c]);
      }
    }
    out.push_back(SectorBlock{n - 2 * pc, basis, std::move(block)});
  }
  return out;
}

}  // namespace spinent
