#pragma once

// Constructors for the multi-qudit states and operators: SU(d) singlets,
// the d = 7 zeta family and its BC-pair structure, the local unitaries
// that generate decompositions, and the W state.

#include "qshare/linalg.hpp"
#include "qshare/measures.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qshare {

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

/// Nonzero squares mod an odd prime p.
inline std::set<int> quadratic_residues(int p) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("quadratic residues need an odd prime, got " + std::to_string(p));
  std::set<int> q;
  for (long long x = 1; x < p; ++x) q.insert(static_cast<int>((x * x) % p));
  q.erase(0);
  return q;
}

inline int mod(long long x, int m) {
  const long long r = x % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

// ---------------------------------------------------------------------------
// SU(d) singlet

struct SingletSpec {
  int d = 3;

  std::uint64_t factorial() const {
    if (d < 0 || d > 12) throw std::invalid_argument("factorial supported for d <= 12");
    std::uint64_t f = 1;
    for (int k = 2; k <= d; ++k) f *= static_cast<std::uint64_t>(k);
    return f;
  }
};

inline constexpr int kMaxSingletDim = 7;

/// Levi-Civita symbol by inversion count; 0 on repeated labels.
inline int levi_civita(const std::vector<int>& labels) {
  int inversions = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      if (labels[i] == labels[j]) return 0;
      if (labels[i] > labels[j]) ++inversions;
    }
  return inversions % 2 == 0 ? 1 : -1;
}

/// Totally antisymmetric state of d qudits, amplitude eps/sqrt(d!).
inline PureState singlet_state(SingletSpec spec) {
  const int d = spec.d;
  if (d < 2 || d > kMaxSingletDim)
    throw std::invalid_argument("full singlet construction supports 2 <= d <= 7, got " + std::to_string(d));
  const Dims dims(static_cast<std::size_t>(d), d);
  ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(product(dims)));
  const double weight = 1.0 / std::sqrt(static_cast<double>(spec.factorial()));
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::size_t flat = 0;
    for (int label : perm) flat = flat * static_cast<std::size_t>(d) + static_cast<std::size_t>(label);
    amps[static_cast<Eigen::Index>(flat)] = static_cast<double>(levi_civita(perm)) * weight;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return PureState(dims, std::move(amps));
}

/// Closed-form pair marginal of the singlet, (I - F) / (d(d-1)).
inline DensityMatrix singlet_pair_reduced(int d) {
  if (d < 2) throw std::invalid_argument("singlet needs d >= 2");
  const double norm = 1.0 / (static_cast<double>(d) * (d - 1));
  return DensityMatrix(norm * (ComplexMatrix::Identity(d * d, d * d) - swap_operator(d)));
}

// ---------------------------------------------------------------------------
// The d = 7 family

inline constexpr int kZetaDim = 7;

class ZetaParams {
 public:
  /// a in [0,1]; b = sqrt((1 - a^2)/3); Q = quadratic residues mod 7.
  explicit ZetaParams(double a) : ZetaParams(a, quadratic_residues(kZetaDim)) {
    for (int k : residues_)
      if (residues_.count(mod(2LL * k, kZetaDim)) == 0) throw std::logic_error("Q is not closed under doubling mod 7");
  }

  /// Test hook: arbitrary residue set, skipping the closure check.
  static ZetaParams with_residues_unchecked(double a, std::set<int> residues) { return ZetaParams(a, std::move(residues)); }

  double a() const { return a_; }
  double b() const { return b_; }
  const std::set<int>& residues() const { return residues_; }

 private:
  ZetaParams(double a, std::set<int> residues) : a_(a), residues_(std::move(residues)) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("zeta parameter a must lie in [0,1]");
    if (residues_.size() != 3) throw std::invalid_argument("residue set must have three elements");
    b_ = std::sqrt(std::max(0.0, (1.0 - a * a) / 3.0));
  }

  double a_;
  double b_ = 0.0;
  std::set<int> residues_;
};

/// Equivalent index forms of the zeta state, all of which must agree.
enum class ZetaForm {
  kDirect,    // |j+k, j+2k, j+4k>
  kHalved,    // k = 2k', summed over k' in Q: |j+2k', j+4k', j+k'>
  kShifted,   // j' = j+k: |j, j+k, j+3k>
};

inline std::size_t triple_index(int i, int j, int k) {
  return static_cast<std::size_t>((mod(i, kZetaDim) * kZetaDim + mod(j, kZetaDim)) * kZetaDim + mod(k, kZetaDim));
}

inline PureState zeta_state(const ZetaParams& params, ZetaForm form = ZetaForm::kDirect) {
  ComplexVector amps = ComplexVector::Zero(kZetaDim * kZetaDim * kZetaDim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(kZetaDim));
  for (int j = 0; j < kZetaDim; ++j) {
    amps[static_cast<Eigen::Index>(triple_index(j, j, j))] += scale * params.a();
    for (int k : params.residues()) {
      std::size_t idx = 0;
      switch (form) {
        case ZetaForm::kDirect: idx = triple_index(j + k, j + 2 * k, j + 4 * k); break;
        case ZetaForm::kHalved: idx = triple_index(j + 2 * k, j + 4 * k, j + k); break;
        case ZetaForm::kShifted: idx = triple_index(j, j + k, j + 3 * k); break;
      }
      amps[static_cast<Eigen::Index>(idx)] += scale * params.b();
    }
  }
  return PureState::normalized({kZetaDim, kZetaDim, kZetaDim}, std::move(amps));
}

/// |s_j> as a 7x7 amplitude matrix, rows = particle B, cols = particle C.
inline ComplexMatrix s_matrix(int j, const ZetaParams& params) {
  if (j < 0 || j >= kZetaDim) throw std::invalid_argument("s_j index outside 0..6");
  ComplexMatrix m = ComplexMatrix::Zero(kZetaDim, kZetaDim);
  m(j, j) += params.a();
  for (int k : params.residues()) m(mod(j + k, kZetaDim), mod(j + 3LL * k, kZetaDim)) += params.b();
  return m;
}

inline ComplexVector flatten_rows(const ComplexMatrix& m) {
  ComplexVector v(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v[r * m.cols() + c] = m(r, c);
  return v;
}

/// a|j,j> + b sum_{k in Q} |j+k, j+3k>
inline PureState s_state(int j, const ZetaParams& params) {
  return PureState::normalized({kZetaDim, kZetaDim}, flatten_rows(s_matrix(j, params)));
}

/// (1/7) sum_j |s_j><s_j|
inline DensityMatrix rho_bc(const ZetaParams& params) {
  ComplexMatrix rho = ComplexMatrix::Zero(kZetaDim * kZetaDim, kZetaDim * kZetaDim);
  for (int j = 0; j < kZetaDim; ++j) rho.noalias() += s_state(j, params).projector() / static_cast<double>(kZetaDim);
  return DensityMatrix(std::move(rho));
}

/// Unit 7-vector of coefficients over the |s_j> basis, gauge-fixed so the
/// first nonzero coefficient is real and non-negative.
class BetaVector {
 public:
  static constexpr double kGaugeThreshold = 1e-14;

  explicit BetaVector(const ComplexVector& coeffs) {
    if (coeffs.size() != kZetaDim) throw std::invalid_argument("beta vector must have 7 components");
    if (!coeffs.allFinite()) throw std::invalid_argument("beta vector has non-finite components");
    const double n = coeffs.norm();
    if (!(n > 0.0)) throw std::invalid_argument("beta vector must be nonzero");
    coeffs_ = coeffs / n;
    for (Eigen::Index j = 0; j < coeffs_.size(); ++j) {
      if (std::abs(coeffs_[j]) > kGaugeThreshold) {
        const Complex phase = std::conj(coeffs_[j]) / std::abs(coeffs_[j]);
        coeffs_ *= phase;
        coeffs_[j] = std::abs(coeffs_[j]);
        break;
      }
    }
  }

  static BetaVector basis(int j) {
    ComplexVector e = ComplexVector::Zero(kZetaDim);
    e[j] = 1.0;
    return BetaVector(e);
  }

  const ComplexVector& coeffs() const { return coeffs_; }
  Complex operator[](int j) const { return coeffs_[j]; }

 private:
  ComplexVector coeffs_;
};

/// sum_j beta_j s_j as a 7x7 amplitude matrix.
inline ComplexMatrix beta_matrix(const BetaVector& beta, const ZetaParams& params) {
  ComplexMatrix m = ComplexMatrix::Zero(kZetaDim, kZetaDim);
  for (int j = 0; j < kZetaDim; ++j) m += beta[j] * s_matrix(j, params);
  return m;
}

inline PureState beta_to_state(const BetaVector& beta, const ZetaParams& params) {
  return PureState::normalized({kZetaDim, kZetaDim}, flatten_rows(beta_matrix(beta, params)));
}

struct SymmetryOperators {
  Complex omega;
  ComplexMatrix S, T;  // 7x7
  ComplexMatrix U, V;  // 49x49
};

inline ComplexMatrix matrix_power(const ComplexMatrix& m, int p) {
  ComplexMatrix out = ComplexMatrix::Identity(m.rows(), m.cols());
  for (int k = 0; k < p; ++k) out = out * m;
  return out;
}

/// Clock S|j> = w^j|j>, shift T|j> = |j+1>, U = S^5 (x) S^3, V = T (x) T,
/// with w = exp(2 pi i / 7). Then U|s_j> = w^j |s_j> and V|s_j> = |s_{j+1}>.
inline SymmetryOperators symmetry_operators() {
  SymmetryOperators ops;
  ops.omega = std::polar(1.0, 2.0 * std::numbers::pi / kZetaDim);
  ops.S = ComplexMatrix::Zero(kZetaDim, kZetaDim);
  ops.T = ComplexMatrix::Zero(kZetaDim, kZetaDim);
  for (int j = 0; j < kZetaDim; ++j) {
    ops.S(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / kZetaDim);
    ops.T(mod(j + 1, kZetaDim), j) = 1.0;
  }
  ops.U = kron(matrix_power(ops.S, 5), matrix_power(ops.S, 3));
  ops.V = kron(ops.T, ops.T);
  return ops;
}

/// 49 equally weighted states V^p U^m |beta>, m,p = 0..6, whose mixture is rho_BC.
inline Decomposition generate_decomposition(const BetaVector& beta, const ZetaParams& params) {
  const auto ops = symmetry_operators();
  const PureState base = beta_to_state(beta, params);
  std::vector<Decomposition::Element> elements;
  elements.reserve(kZetaDim * kZetaDim);
  ComplexVector um = base.amplitudes();
  for (int m = 0; m < kZetaDim; ++m) {
    ComplexVector vp = um;
    for (int p = 0; p < kZetaDim; ++p) {
      elements.push_back({1.0 / (kZetaDim * kZetaDim), PureState::normalized(base.dims(), vp)});
      vp = ops.V * vp;
    }
    um = ops.U * um;
  }
  return Decomposition(std::move(elements));
}

/// Relabels particles so the amplitude of |i,j,k> moves to |k,i,j>.
inline PureState cyclic_permute(const PureState& psi) {
  const auto& dims = psi.dims();
  if (dims.size() != 3 || dims[0] != dims[1] || dims[1] != dims[2])
    throw std::invalid_argument("cyclic permutation needs three particles of equal dimension");
  const int d = dims[0];
  ComplexVector out(psi.amplitudes().size());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) out[(k * d + i) * d + j] = psi[static_cast<std::size_t>((i * d + j) * d + k)];
  return PureState(dims, std::move(out));
}

/// Uniform superposition of the n single-excitation kets.
inline PureState w_state(int n) {
  if (n < 2 || n > 24) throw std::invalid_argument("W state needs 2 <= n <= 24");
  ComplexVector amps = ComplexVector::Zero(Eigen::Index{1} << n);
  for (int q = 0; q < n; ++q) amps[Eigen::Index{1} << q] = 1.0;
  return PureState::normalized(Dims(static_cast<std::size_t>(n), 2), std::move(amps));
}

}  // namespace qshare
