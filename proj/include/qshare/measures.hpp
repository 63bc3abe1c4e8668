#pragma once

// Entanglement quantities: entropies, the concurrence-to-E_f map, two-qubit
// concurrence, and the Werner-state formulas.

#include "qshare/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qshare {

/// Entanglement in bits.
using Ebits = double;

/// Concurrence-like quantity. `value` may be negative for Werner states
/// (c = -Tr rho F); `clamped()` is the physical concurrence.
struct Concurrence {
  double value = 0.0;
  double clamped() const { return std::clamp(value, 0.0, 1.0); }
};

/// rho = a_w I + b_w F on C^d (x) C^d.
struct WernerParams {
  double a_w = 0.0;
  double b_w = 0.0;
  int d = 2;
};

struct WernerFit {
  std::optional<WernerParams> params;  // empty when the residual exceeds tolerance
  double residual = 0.0;               // max-norm of rho - (a_w I + b_w F)
  bool is_werner() const { return params.has_value(); }
};

inline constexpr double kWernerTolerance = 1e-10;

/// Weighted ensemble of pure states.
class Decomposition {
 public:
  struct Element {
    double weight;
    PureState state;
  };

  explicit Decomposition(std::vector<Element> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw std::invalid_argument("decomposition must have at least one element");
    double sum = 0.0;
    for (const auto& e : elements_) {
      if (!(e.weight > 0.0)) throw std::invalid_argument("decomposition weights must be positive");
      if (e.state.size() != elements_.front().state.size()) throw std::invalid_argument("decomposition states differ in size");
      sum += e.weight;
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance) throw std::invalid_argument("decomposition weights do not sum to 1");
  }

  const std::vector<Element>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }

  /// sum_j p_j |phi_j><phi_j|
  DensityMatrix mixture() const {
    const auto n = static_cast<Eigen::Index>(elements_.front().state.size());
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    for (const auto& e : elements_) rho.noalias() += e.weight * e.state.projector();
    return DensityMatrix(std::move(rho));
  }

 private:
  std::vector<Element> elements_;
};

inline Ebits shannon_entropy(const ProbabilityVector& p) {
  double h = 0.0;
  for (double v : p.values())
    if (v > 0.0) h -= v * std::log2(v);
  return std::max(0.0, h);
}

inline Ebits pure_entanglement(const PureState& psi, const std::vector<int>& side) {
  return shannon_entropy(schmidt_spectrum(psi, side));
}

inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("binary entropy argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

/// E_f as a function of concurrence: h((1 + sqrt(1 - C^2)) / 2).
inline Ebits entanglement_from_concurrence(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("concurrence outside [0,1]");
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

namespace detail {

inline void require_two_qubits(const Dims& dims) {
  if (dims != Dims{2, 2}) throw std::invalid_argument("expected a two-qubit system");
}

inline ComplexMatrix sigma_y_sigma_y() {
  ComplexMatrix yy = ComplexMatrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  return yy;
}

}  // namespace detail

/// 2 sqrt(det rho_A).
inline Concurrence qubit_concurrence_pure(const PureState& psi) {
  detail::require_two_qubits(psi.dims());
  // det rho_A = |det M|^2 for the 2x2 amplitude matrix M.
  const Complex det = psi[0] * psi[3] - psi[1] * psi[2];
  return {std::min(1.0, 2.0 * std::abs(det))};
}

/// Mixed-state two-qubit concurrence max(0, l1 - l2 - l3 - l4), with l_i the
/// square roots of the eigenvalues of rho (Y(x)Y) rho* (Y(x)Y), conjugation in
/// the computational basis. That product is similar to A A^dagger with
/// A = sqrt(rho) (Y(x)Y) conj(sqrt(rho)), so the l_i are the singular values
/// of A; this keeps the small ones at round-off size instead of its square root.
inline Concurrence qubit_concurrence_mixed(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw std::invalid_argument("mixed concurrence needs a 4x4 density matrix");
  const auto es = hermitian_eigensystem(rho.matrix());
  Eigen::VectorXd root(4);
  for (int k = 0; k < 4; ++k) root[k] = std::sqrt(std::max(0.0, es.values[static_cast<std::size_t>(k)]));
  const ComplexMatrix sqrt_rho = es.vectors * root.cast<Complex>().asDiagonal() * es.vectors.adjoint();
  const ComplexMatrix a = sqrt_rho * detail::sigma_y_sigma_y() * sqrt_rho.conjugate();
  const Eigen::VectorXd lambda = Eigen::JacobiSVD<ComplexMatrix>(a).singularValues();  // descending
  return {std::clamp(lambda[0] - lambda[1] - lambda[2] - lambda[3], 0.0, 1.0)};
}

inline Ebits qubit_eof(const DensityMatrix& rho) {
  return entanglement_from_concurrence(qubit_concurrence_mixed(rho).clamped());
}

/// Swap F = sum_ij |ij><ji| on C^d (x) C^d.
inline ComplexMatrix swap_operator(int d) {
  if (d < 1) throw std::invalid_argument("swap operator dimension must be positive");
  ComplexMatrix f = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
  return f;
}

namespace detail {

inline void require_pair_dim(const DensityMatrix& rho, int d) {
  if (d < 2 || rho.dim() != d * d) throw std::invalid_argument("density matrix is not on C^d (x) C^d");
}

// Tr(rho F) = sum_ij rho[ij, ji]
inline Complex trace_with_swap(const ComplexMatrix& rho, int d) {
  Complex acc = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) acc += rho(i * d + j, j * d + i);
  return acc;
}

}  // namespace detail

/// c(rho) = -Tr(rho F).
inline Concurrence werner_c(const DensityMatrix& rho, int d) {
  detail::require_pair_dim(rho, d);
  return {-detail::trace_with_swap(rho.matrix(), d).real()};
}

/// Least-squares projection of rho onto span{I, F}; accepted when the
/// max-norm residual is within `tol`.
inline WernerFit werner_fit(const DensityMatrix& rho, int d, double tol = kWernerTolerance) {
  detail::require_pair_dim(rho, d);
  // Normal equations with <I,I> = d^2, <I,F> = d, <F,F> = d^2.
  const double dd = static_cast<double>(d);
  const double tr = rho.matrix().trace().real();
  const double trf = detail::trace_with_swap(rho.matrix(), d).real();
  const double det = dd * dd * dd * dd - dd * dd;
  const double a_w = (dd * dd * tr - dd * trf) / det;
  const double b_w = (dd * dd * trf - dd * tr) / det;
  const ComplexMatrix model =
      a_w * ComplexMatrix::Identity(d * d, d * d) + b_w * swap_operator(d);
  WernerFit fit;
  fit.residual = max_abs(rho.matrix() - model);
  if (fit.residual <= tol) fit.params = WernerParams{a_w, b_w, d};
  return fit;
}

/// E_f of a Werner state, E(max(0, c)). Negative c means separable.
inline Ebits werner_eof(const DensityMatrix& rho, int d, double tol = kWernerTolerance) {
  const auto fit = werner_fit(rho, d, tol);
  if (!fit.is_werner()) throw std::invalid_argument("state is not a Werner state within tolerance");
  return entanglement_from_concurrence(werner_c(rho, d).clamped());
}

/// Pairwise E_f bound for n qubits from the maximal pairwise concurrence 2/n.
inline Ebits koashi_bound(int n) {
  if (n < 2) throw std::invalid_argument("particle count must be at least 2");
  return entanglement_from_concurrence(std::min(1.0, 2.0 / n));
}

}  // namespace qshare
