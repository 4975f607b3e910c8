#include "spinent/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "local_ops.hpp"

namespace spinent {

using detail::Complex;
using detail::bloch_vector;
using detail::kron2;
using detail::pair_correlator;
using detail::pair_moment;
using detail::sigma;

// ---------------------------------------------------------------------------
// Named states
// ---------------------------------------------------------------------------

Eigen::VectorXcd singlet_chain_state(int n_sites) {
  if (n_sites < 2 || n_sites % 2 != 0 || n_sites > kMaxSites) {
    throw std::invalid_argument("singlet chain needs an even site count");
  }
  // |psi->: local index order (bit0, bit1) = (odd site, even site).
  Eigen::VectorXcd singlet(4);
  singlet << 0.0, -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0;
  std::vector<Eigen::VectorXcd> factors(n_sites / 2, singlet);
  return assemble_product_state(dimer_covering(n_sites, 0), factors);
}

Eigen::VectorXcd xy_dimer_block_state() {
  // 1/4 (1x1 - XX - [YY + ZZ]/2 - sqrt(3)/2 (1X - X1)) as a matrix, then
  // verified to be a pure state before the eigenvector is extracted.
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const double s32 = std::sqrt(3.0) / 2.0;
  Eigen::Matrix4cd block =
      0.25 * (kron2(id, id).eval() - kron2(sigma(Axis::X), sigma(Axis::X)).eval() -
              0.5 * (kron2(sigma(Axis::Y), sigma(Axis::Y)).eval() +
                     kron2(sigma(Axis::Z), sigma(Axis::Z)).eval()) -
              s32 * (kron2(id, sigma(Axis::X)).eval() -
                     kron2(sigma(Axis::X), id).eval()));

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(block);
  const Eigen::Vector4d ev = solver.eigenvalues();
  if (std::abs(block.trace().real() - 1.0) > 1e-12 || ev.minCoeff() < -1e-12 ||
      std::abs(ev(3) - 1.0) > 1e-12 || ev.head<3>().cwiseAbs().maxCoeff() > 1e-12) {
    throw std::runtime_error("dimer block is not a rank-1 unit-trace PSD matrix");
  }
  Eigen::Vector4cd psi = solver.eigenvectors().col(3);
  // Fix the global phase so repeated calls agree bit for bit.
  int pivot = 0;
  for (int i = 1; i < 4; ++i) {
    if (std::abs(psi(i)) > std::abs(psi(pivot))) pivot = i;
  }
  psi *= std::abs(psi(pivot)) / psi(pivot);
  return psi;
}

DensityMatrix xy_dimer_chain_state(int n_sites) {
  if (n_sites < 2 || n_sites % 2 != 0 || n_sites > 10) {
    throw std::invalid_argument(
        "dimer chain needs an even site count of at most 10");
  }
  const Eigen::VectorXcd block = xy_dimer_block_state();
  std::vector<Eigen::VectorXcd> factors(n_sites / 2, block);
  return DensityMatrix::pure(
      assemble_product_state(dimer_covering(n_sites, 0), factors));
}

Eigen::VectorXcd ghz_state(int n_sites) {
  if (n_sites < 3 || n_sites > kMaxSites) {
    throw std::invalid_argument("GHZ state needs at least 3 sites");
  }
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(0) = 1.0 / std::sqrt(2.0);
  psi(dim - 1) = 1.0 / std::sqrt(2.0);
  return psi;
}

// ---------------------------------------------------------------------------
// Producible families
// ---------------------------------------------------------------------------

int ProducibleFamily::max_block_size() const {
  std::size_t m = 0;
  for (const auto& b : blocks) m = std::max(m, b.size());
  return static_cast<int>(m);
}

void ProducibleFamily::validate() const {
  if (n_sites < 1 || n_sites > kMaxSites) {
    throw std::invalid_argument("family site count out of range");
  }
  std::set<int> seen;
  for (const auto& block : blocks) {
    if (block.empty() || block.size() > 2) {
      throw std::invalid_argument("family blocks must have one or two sites");
    }
    for (int s : block) {
      if (s < 1 || s > n_sites) {
        throw std::invalid_argument("family block site out of range");
      }
      if (!seen.insert(s).second) {
        throw std::invalid_argument("family blocks are not disjoint");
      }
    }
  }
  if (static_cast<int>(seen.size()) != n_sites) {
    throw std::invalid_argument("family blocks do not cover every site");
  }
}

ProducibleFamily fully_separable_family(int n_sites) {
  ProducibleFamily f{n_sites, {}};
  for (int s = 1; s <= n_sites; ++s) f.blocks.push_back({s});
  f.validate();
  return f;
}

ProducibleFamily dimer_covering(int n_sites, int offset) {
  if (n_sites % 2 != 0) {
    throw std::invalid_argument("dimer coverings need an even site count");
  }
  if (offset != 0 && offset != 1) {
    throw std::invalid_argument("a ring admits exactly the two coverings 0 and 1");
  }
  ProducibleFamily f{n_sites, {}};
  for (int t = 0; t < n_sites / 2; ++t) {
    const int a = (offset + 2 * t) % n_sites + 1;
    const int b = (offset + 2 * t + 1) % n_sites + 1;
    f.blocks.push_back({std::min(a, b), std::max(a, b)});
  }
  f.validate();
  return f;
}

ProducibleFamily random_pairing_with_singles(int n_sites, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> order(n_sites);
  std::iota(order.begin(), order.end(), 1);
  std::shuffle(order.begin(), order.end(), rng);

  const auto adjacent = [n_sites](int a, int b) {
    const int d = std::abs(a - b);
    return d == 1 || d == n_sites - 1;
  };

  ProducibleFamily f{n_sites, {}};
  std::vector<bool> used(n_sites + 1, false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int a = order[i];
    if (used[a]) continue;
    used[a] = true;
    int partner = 0;
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const int b = order[j];
      if (!used[b] && !adjacent(a, b)) {
        partner = b;
        break;
      }
    }
    if (partner != 0) {
      used[partner] = true;
      f.blocks.push_back({std::min(a, partner), std::max(a, partner)});
    } else {
      f.blocks.push_back({a});
    }
  }
  f.validate();
  return f;
}

Eigen::VectorXcd assemble_product_state(
    const ProducibleFamily& family, const std::vector<Eigen::VectorXcd>& factors) {
  family.validate();
  if (factors.size() != family.blocks.size()) {
    throw std::invalid_argument("one factor per family block required");
  }
  for (std::size_t b = 0; b < factors.size(); ++b) {
    if (factors[b].size() != Eigen::Index{1} << family.blocks[b].size()) {
      throw std::invalid_argument("factor dimension does not match its block");
    }
  }
  const Eigen::Index dim = Eigen::Index{1} << family.n_sites;
  Eigen::VectorXcd psi(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    Complex amp = 1.0;
    for (std::size_t b = 0; b < factors.size(); ++b) {
      Eigen::Index local = 0;
      for (std::size_t t = 0; t < family.blocks[b].size(); ++t) {
        if ((s >> (family.blocks[b][t] - 1)) & 1) local |= Eigen::Index{1} << t;
      }
      amp *= factors[b](local);
    }
    psi(s) = amp;
  }
  return psi;
}

Eigen::VectorXcd sample_producible(const ProducibleFamily& family,
                                   std::uint64_t seed) {
  family.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::VectorXcd> factors;
  factors.reserve(family.blocks.size());
  for (const auto& block : family.blocks) {
    Eigen::VectorXcd f(Eigen::Index{1} << block.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      f(i) = Complex(re, im);
    }
    f.normalize();
    factors.push_back(std::move(f));
  }
  return assemble_product_state(family, factors);
}

// ---------------------------------------------------------------------------
// Pair and segment statistics
// ---------------------------------------------------------------------------

double chi_statistic(const DensityMatrix& rho2) {
  if (rho2.dim() != 4) {
    throw std::invalid_argument("chi statistic expects a two-qubit state");
  }
  const Eigen::MatrixXcd& rho = rho2.matrix();
  double chi = 0.0;
  for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    const double mi = pair_moment(rho, 1, axis);
    const double mj = pair_moment(rho, 2, axis);
    const double cc = pair_correlator(rho, axis);
    chi += mi * mi + mj * mj + cc * cc;
  }
  return chi;
}

double xi_statistic(const DensityMatrix& rho2) {
  if (rho2.dim() != 4) {
    throw std::invalid_argument("xi statistic expects a two-qubit state");
  }
  const Eigen::MatrixXcd& rho = rho2.matrix();
  const double alpha_sq = 4.0 / 3.0;
  double xi = 0.0;
  for (Axis axis : {Axis::X, Axis::Y}) {
    const double mi = pair_moment(rho, 1, axis);
    const double mj = pair_moment(rho, 2, axis);
    xi += mi * mi + mj * mj;
  }
  const double beta =
      0.5 * (pair_correlator(rho, Axis::X) + pair_correlator(rho, Axis::Y));
  return xi + 2.0 * alpha_sq * beta * beta;
}

double segment_statistic(const Eigen::VectorXcd& pair_state,
                         const Eigen::VectorXcd& single_state, Model model) {
  if (pair_state.size() != 4 || single_state.size() != 2) {
    throw std::invalid_argument("segment statistic expects a pair and a single qubit");
  }
  Eigen::Vector4cd pair = pair_state;
  Eigen::Vector2cd single = single_state;
  if (pair.norm() < 1e-12 || single.norm() < 1e-12) {
    throw std::invalid_argument("segment statistic factors must be nonzero");
  }
  pair.normalize();
  single.normalize();

  const Eigen::Matrix4cd rho = pair * pair.adjoint();
  const Eigen::Vector3d bloch_k = bloch_vector(single);

  if (model == Model::Heisenberg) {
    double value = 0.0;
    double scalar_jk = 0.0;
    for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
      const int a = static_cast<int>(axis);
      const double mi = pair_moment(rho, 1, axis);
      const double cc = pair_correlator(rho, axis);
      value += mi * mi + cc * cc + bloch_k(a) * bloch_k(a);
      scalar_jk += pair_moment(rho, 2, axis) * bloch_k(a);
    }
    return value + scalar_jk * scalar_jk;
  }

  const double alpha_sq = 4.0 / 3.0;
  double value = 0.0;
  double scalar_jk = 0.0;
  for (Axis axis : {Axis::X, Axis::Y}) {
    const int a = static_cast<int>(axis);
    const double mi = pair_moment(rho, 1, axis);
    value += mi * mi + bloch_k(a) * bloch_k(a);
    scalar_jk += pair_moment(rho, 2, axis) * bloch_k(a);
  }
  const double beta =
      0.5 * (pair_correlator(rho, Axis::X) + pair_correlator(rho, Axis::Y));
  return value + 2.0 * alpha_sq * beta * beta + alpha_sq * scalar_jk * scalar_jk;
}

}  // namespace spinent
