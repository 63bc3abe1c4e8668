#pragma once

// Seeded random generators for states, operators and coefficient vectors.

#include "qshare/linalg.hpp"
#include "qshare/states.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace qshare {

using Rng = std::mt19937_64;

inline ComplexVector random_gaussian_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    v[i] = Complex(re, normal(rng));
  }
  return v;
}

inline ComplexMatrix random_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) m.col(c) = random_gaussian_vector(rows, rng);
  return m;
}

/// Haar-random pure state.
inline PureState random_state(const Dims& dims, Rng& rng) {
  return PureState::normalized(dims, random_gaussian_vector(static_cast<Eigen::Index>(product(dims)), rng));
}

inline ComplexMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  const ComplexMatrix g = random_gaussian_matrix(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

/// Full-rank random density matrix G G^dagger / Tr.
inline DensityMatrix random_density(Eigen::Index n, Rng& rng) {
  const ComplexMatrix g = random_gaussian_matrix(n, n, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

/// Haar-random element of SU(d): QR of a Ginibre matrix with the phase
/// ambiguity of R removed, then divided by a d-th root of the determinant.
inline ComplexMatrix random_special_unitary(int d, Rng& rng) {
  const ComplexMatrix g = random_gaussian_matrix(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const Complex rk = r(k, k);
    if (std::abs(rk) > 0.0) q.col(k) *= rk / std::abs(rk);
  }
  const Complex det = q.determinant();
  return q * std::polar(1.0, -std::arg(det) / d);
}

inline BetaVector random_beta(Rng& rng) {
  return BetaVector(random_gaussian_vector(kZetaDim, rng));
}

}  // namespace qshare
