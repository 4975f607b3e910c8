#pragma once
// Internal helpers for one- and two-qubit algebra: Pauli matrices, local
// tensor products and moments. Not part of the installed surface.

#include <Eigen/Dense>

#include <complex>

#include "spinent/hilbert.hpp"

namespace spinent::detail {

using Complex = std::complex<double>;

inline const Eigen::Matrix2cd& sigma(Axis axis) {
  static const Eigen::Matrix2cd sx = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
  static const Eigen::Matrix2cd sy =
      (Eigen::Matrix2cd() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  static const Eigen::Matrix2cd sz = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
  switch (axis) {
    case Axis::X: return sx;
    case Axis::Y: return sy;
    default: return sz;
  }
}

// Two-qubit operator with `a` on local bit 0 (first site) and `b` on bit 1.
inline Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd m;
  for (int c = 0; c < 4; ++c) {
    for (int r = 0; r < 4; ++r) {
      m(r, c) = a(r & 1, c & 1) * b((r >> 1) & 1, (c >> 1) & 1);
    }
  }
  return m;
}

inline double real_trace(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& op) {
  return (op * rho).trace().real();
}

// <sigma_axis> on one qubit of a two-qubit state, site in {1, 2}.
inline double pair_moment(const Eigen::MatrixXcd& rho, int site, Axis axis) {
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  return real_trace(rho,
                    site == 1 ? kron2(sigma(axis), id) : kron2(id, sigma(axis)));
}

inline double pair_correlator(const Eigen::MatrixXcd& rho, Axis axis) {
  return real_trace(rho, kron2(sigma(axis), sigma(axis)));
}

inline Eigen::Vector3d bloch_vector(const Eigen::Vector2cd& psi) {
  Eigen::Vector3d r;
  r(0) = (psi.adjoint() * sigma(Axis::X) * psi).value().real();
  r(1) = (psi.adjoint() * sigma(Axis::Y) * psi).value().real();
  r(2) = (psi.adjoint() * sigma(Axis::Z) * psi).value().real();
  return r;
}

// sum over model axes of sigma x sigma on a local pair (slots 0 and 1).
inline Eigen::Matrix4cd bond_matrix_local(Model model) {
  Eigen::Matrix4cd m = kron2(sigma(Axis::X), sigma(Axis::X)) +
                       kron2(sigma(Axis::Y), sigma(Axis::Y));
  if (model == Model::Heisenberg) {
    m += kron2(sigma(Axis::Z), sigma(Axis::Z));
  }
  return m;
}

// sigma_axis acting on one slot of a 2^size local space (size 1 or 2).
inline Eigen::MatrixXcd sigma_at_slot(Axis axis, int slot, int block_size) {
  if (block_size == 1) return sigma(axis);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  return slot == 0 ? kron2(sigma(axis), id) : kron2(id, sigma(axis));
}

}  // namespace spinent::detail
