#pragma once

// Dense complex linear algebra for small tensor-product systems.
//
// Composite kets |i_1 ... i_n> are flattened big-endian: the first label is
// the most significant digit, flat = sum_k i_k * prod_{m>k} d_m.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qshare {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Dims = std::vector<int>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kProbabilityTolerance = 1e-10;
// Eigenvalues below this are treated as exact zeros before any logarithm.
inline constexpr double kEigenvalueClip = 1e-12;

inline bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

inline std::size_t product(const Dims& dims) {
  std::size_t total = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("subsystem dimensions must be positive");
    total *= static_cast<std::size_t>(d);
  }
  return total;
}

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Normalized pure state over a tensor-product index space.
class PureState {
 public:
  PureState(Dims dims, ComplexVector amplitudes) : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
    if (dims_.empty()) throw std::invalid_argument("PureState needs at least one subsystem");
    if (product(dims_) != static_cast<std::size_t>(amps_.size()))
      throw std::invalid_argument("PureState amplitude count does not match dims");
    if (!amps_.allFinite()) throw std::invalid_argument("PureState has non-finite amplitudes");
    if (std::abs(amps_.norm() - 1.0) > kNormTolerance)
      throw std::invalid_argument("PureState is not normalized (norm " + std::to_string(amps_.norm()) + ")");
  }

  /// Rescales `amplitudes` to unit norm; rejects the zero vector.
  static PureState normalized(Dims dims, ComplexVector amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("cannot normalize a zero or non-finite vector");
    amplitudes /= n;
    return PureState(std::move(dims), std::move(amplitudes));
  }

  const Dims& dims() const { return dims_; }
  const ComplexVector& amplitudes() const { return amps_; }
  std::size_t size() const { return static_cast<std::size_t>(amps_.size()); }
  Complex operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

  ComplexMatrix projector() const { return amps_ * amps_.adjoint(); }

 private:
  Dims dims_;
  ComplexVector amps_;
};

inline Complex inner(const PureState& lhs, const PureState& rhs) {
  if (lhs.size() != rhs.size()) throw std::invalid_argument("inner product of states of different size");
  return lhs.amplitudes().dot(rhs.amplitudes());  // conjugates lhs
}

inline double fidelity(const PureState& lhs, const PureState& rhs) {
  return std::norm(inner(lhs, rhs));
}

/// Hermitian, unit-trace, positive-semidefinite matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) throw std::invalid_argument("density matrix must be square and non-empty");
    if (!all_finite(m_)) throw std::invalid_argument("density matrix has non-finite entries");
    if (max_abs(m_ - m_.adjoint()) > kHermitianTolerance) throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(m_.trace() - Complex(1.0)) > kTraceTolerance)
      throw std::invalid_argument("density matrix trace is not 1");
    // Symmetrize away round-off so the eigensolver sees an exactly Hermitian input.
    m_ = 0.5 * (m_ + m_.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPsdTolerance) throw std::invalid_argument("density matrix is not positive semidefinite");
  }

  static DensityMatrix from_pure(const PureState& psi) { return DensityMatrix(psi.projector()); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

/// Non-negative reals summing to one.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<double> values) : values_(std::move(values)) {
    double sum = 0.0;
    for (double v : values_) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("probabilities must be finite and non-negative");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance) throw std::invalid_argument("probabilities do not sum to 1");
  }

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

namespace detail {

inline std::vector<int> validated_keep(const Dims& dims, std::vector<int> keep) {
  if (keep.empty()) throw std::invalid_argument("partial trace must keep at least one subsystem");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
    throw std::invalid_argument("partial trace keep set has duplicates");
  for (int k : keep)
    if (k < 0 || k >= static_cast<int>(dims.size())) throw std::invalid_argument("partial trace index out of range");
  return keep;
}

inline std::vector<int> complement(const Dims& dims, const std::vector<int>& keep) {
  std::vector<int> rest;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (!std::binary_search(keep.begin(), keep.end(), k)) rest.push_back(k);
  return rest;
}

// Flat-index offset of each (kept, traced) multi-index in the full space.
struct SplitIndex {
  std::vector<std::size_t> kept;    // offset contributed by each kept multi-index
  std::vector<std::size_t> traced;  // offset contributed by each traced multi-index
};

inline std::vector<std::size_t> strides(const Dims& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * static_cast<std::size_t>(dims[k + 1]);
  return s;
}

inline std::vector<std::size_t> group_offsets(const Dims& dims, const std::vector<int>& group) {
  const auto s = strides(dims);
  std::vector<std::size_t> offsets{0};
  for (int k : group) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * static_cast<std::size_t>(dims[k]));
    for (std::size_t base : offsets)
      for (int i = 0; i < dims[k]; ++i) next.push_back(base + static_cast<std::size_t>(i) * s[k]);
    offsets = std::move(next);
  }
  return offsets;
}

inline SplitIndex split_index(const Dims& dims, const std::vector<int>& keep) {
  return {group_offsets(dims, keep), group_offsets(dims, complement(dims, keep))};
}

}  // namespace detail

/// Amplitudes reshaped to a (rows = kept group, cols = other group) matrix.
inline ComplexMatrix bipartite_matrix(const PureState& psi, const std::vector<int>& side) {
  const auto keep = detail::validated_keep(psi.dims(), side);
  const auto idx = detail::split_index(psi.dims(), keep);
  ComplexMatrix m(idx.kept.size(), idx.traced.size());
  for (std::size_t r = 0; r < idx.kept.size(); ++r)
    for (std::size_t c = 0; c < idx.traced.size(); ++c) m(r, c) = psi[idx.kept[r] + idx.traced[c]];
  return m;
}

/// Reduced density matrix of `keep` (sorted ascending) for a pure state,
/// without forming the full projector.
inline DensityMatrix partial_trace(const PureState& psi, const std::vector<int>& keep) {
  const ComplexMatrix m = bipartite_matrix(psi, keep);
  return DensityMatrix(m * m.adjoint());
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, const Dims& dims, const std::vector<int>& keep_in) {
  if (product(dims) != static_cast<std::size_t>(rho.dim())) throw std::invalid_argument("dims do not match density matrix");
  const auto keep = detail::validated_keep(dims, keep_in);
  const auto idx = detail::split_index(dims, keep);
  const auto n = static_cast<Eigen::Index>(idx.kept.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  const ComplexMatrix& m = rho.matrix();
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      Complex acc = 0.0;
      for (std::size_t t : idx.traced)
        acc += m(static_cast<Eigen::Index>(idx.kept[r] + t), static_cast<Eigen::Index>(idx.kept[c] + t));
      out(r, c) = acc;
    }
  return DensityMatrix(std::move(out));
}

struct EigenSystem {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // column k belongs to values[k]
};

inline EigenSystem hermitian_eigensystem(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eigensystem requires a square matrix");
  if (!all_finite(h)) throw std::invalid_argument("eigensystem input has non-finite entries");
  const double scale = std::max(1.0, max_abs(h));
  if (max_abs(h - h.adjoint()) > 1e-10 * scale) throw std::invalid_argument("eigensystem input is not Hermitian");
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed to converge");
  // Eigen returns ascending order.
  const auto n = sym.rows();
  EigenSystem out{std::vector<double>(static_cast<std::size_t>(n)), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[static_cast<std::size_t>(k)] = es.eigenvalues()[n - 1 - k];
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return out;
}

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  return hermitian_eigensystem(h).values;
}

/// Spectrum of a density matrix with round-off negatives clipped to zero.
inline ProbabilityVector clipped_spectrum(const ComplexMatrix& rho) {
  std::vector<double> values = hermitian_eigenvalues(rho);
  for (double& v : values)
    if (v < kEigenvalueClip) v = 0.0;
  return ProbabilityVector(std::move(values));
}

/// Squared Schmidt coefficients across the cut `side | rest`, descending.
inline ProbabilityVector schmidt_spectrum(const PureState& psi, const std::vector<int>& side) {
  const auto keep = detail::validated_keep(psi.dims(), side);
  const auto rest = detail::complement(psi.dims(), keep);
  if (rest.empty()) throw std::invalid_argument("cut must leave both sides non-empty");
  std::size_t keep_dim = 1;
  for (int k : keep) keep_dim *= static_cast<std::size_t>(psi.dims()[k]);
  const bool keep_smaller = keep_dim * keep_dim <= psi.size();
  const ComplexMatrix m = bipartite_matrix(psi, keep_smaller ? keep : rest);
  return clipped_spectrum(m * m.adjoint());
}

}  // namespace qshare
