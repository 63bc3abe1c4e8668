#include "qshare/measures.hpp"
#include "qshare/optimize.hpp"
#include "qshare/random.hpp"
#include "qshare/states.hpp"

#include <gtest/gtest.h>

#include <numbers>

namespace qshare {
namespace {

double max_diff(const ComplexVector& l, const ComplexVector& r) { return (l - r).cwiseAbs().maxCoeff(); }

std::set<int> squares_mod(int p) {
  std::set<int> out;
  for (int x = 0; x < p; ++x)
    for (int y = 1; y < p; ++y)
      if ((y * y - x) % p == 0 && x != 0) out.insert(x);
  return out;
}

TEST(QuadraticResidues, Values) {
  EXPECT_EQ(quadratic_residues(7), (std::set<int>{1, 2, 4}));
  EXPECT_EQ(quadratic_residues(3), (std::set<int>{1}));
  EXPECT_EQ(quadratic_residues(11), (std::set<int>{1, 3, 4, 5, 9}));
  for (int p : {5, 13, 17, 19, 23}) EXPECT_EQ(quadratic_residues(p), squares_mod(p));
  EXPECT_THROW(quadratic_residues(2), std::invalid_argument);
  EXPECT_THROW(quadratic_residues(9), std::invalid_argument);
}

TEST(LeviCivita, Signs) {
  EXPECT_EQ(levi_civita({0, 1, 2}), 1);
  EXPECT_EQ(levi_civita({1, 0, 2}), -1);
  EXPECT_EQ(levi_civita({1, 2, 0}), 1);
  EXPECT_EQ(levi_civita({0, 0, 2}), 0);
}

TEST(SingletState, QubitCase) {
  const PureState xi = singlet_state({2});
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(xi[1] - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(xi[2] + r), 0.0, 1e-15);
  EXPECT_EQ(xi[0], Complex(0.0));
  EXPECT_EQ(xi[3], Complex(0.0));
}

TEST(SingletState, QutritAmplitudes) {
  const PureState xi = singlet_state({3});
  const double r = 1.0 / std::sqrt(6.0);
  int nonzero = 0;
  for (std::size_t i = 0; i < xi.size(); ++i)
    if (std::abs(xi[i]) > 0.0) ++nonzero;
  EXPECT_EQ(nonzero, 6);
  // |012> + |120> + |201> - |021> - |102> - |210>
  EXPECT_NEAR(xi[0 * 9 + 1 * 3 + 2].real(), r, 1e-15);
  EXPECT_NEAR(xi[1 * 9 + 2 * 3 + 0].real(), r, 1e-15);
  EXPECT_NEAR(xi[2 * 9 + 0 * 3 + 1].real(), r, 1e-15);
  EXPECT_NEAR(xi[0 * 9 + 2 * 3 + 1].real(), -r, 1e-15);
  EXPECT_NEAR(xi[1 * 9 + 0 * 3 + 2].real(), -r, 1e-15);
  EXPECT_NEAR(xi[2 * 9 + 1 * 3 + 0].real(), -r, 1e-15);
}

TEST(SingletState, AntisymmetricUnderTransposition) {
  for (int d = 2; d <= 4; ++d) {
    const PureState xi = singlet_state({d});
    EXPECT_EQ(xi[0], Complex(0.0));
    // Swap the first two slots.
    for (std::size_t idx = 0; idx < xi.size(); ++idx) {
      const std::size_t block = xi.size() / static_cast<std::size_t>(d * d);
      const std::size_t i = idx / (block * d), j = (idx / block) % d, rest = idx % block;
      const std::size_t swapped = (j * d + i) * block + rest;
      EXPECT_EQ(xi[idx], -xi[swapped]);
    }
  }
}

TEST(SingletState, RangeIsEnforced) {
  EXPECT_THROW(singlet_state({1}), std::invalid_argument);
  EXPECT_THROW(singlet_state({8}), std::invalid_argument);
  EXPECT_EQ(SingletSpec{7}.factorial(), 5040u);
  EXPECT_EQ(SingletSpec{12}.factorial(), 479001600u);
}

TEST(SingletState, InvariantUnderCollectiveSpecialUnitaries) {
  Rng rng(41);
  for (int d = 2; d <= 4; ++d) {
    const PureState xi = singlet_state({d});
    for (int t = 0; t < 20; ++t) {
      const ComplexMatrix u = random_special_unitary(d, rng);
      EXPECT_NEAR(std::abs(u.determinant() - Complex(1.0)), 0.0, 1e-12);
      ComplexMatrix full = u;
      for (int k = 1; k < d; ++k) full = kron(full, u);
      EXPECT_NEAR(std::abs(xi.amplitudes().dot(full * xi.amplitudes())), 1.0, 1e-9);
    }
  }
}

TEST(SwapOperator, Properties) {
  const ComplexMatrix f2 = swap_operator(2);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = expected(3, 3) = 1.0;
  expected(1, 2) = expected(2, 1) = 1.0;
  EXPECT_EQ(f2, expected);
  const ComplexMatrix f3 = swap_operator(3);
  EXPECT_EQ(f3.trace(), Complex(3.0));
  EXPECT_EQ(f3 * f3, ComplexMatrix::Identity(9, 9));
  EXPECT_EQ(f3, f3.adjoint());
}

TEST(SwapOperator, SpectrumSplitsSymmetricAndAntisymmetric) {
  const auto es = hermitian_eigensystem(swap_operator(3));
  int plus = 0, minus = 0;
  for (double v : es.values) (std::abs(v - 1.0) < 1e-12 ? plus : minus) += 1;
  EXPECT_EQ(plus, 6);
  EXPECT_EQ(minus, 3);
  const auto rho = hermitian_eigensystem(singlet_pair_reduced(3).matrix());
  for (int k = 0; k < 9; ++k) EXPECT_NEAR(rho.values[static_cast<std::size_t>(k)], k < 3 ? 1.0 / 3.0 : 0.0, 1e-14);
}

TEST(SingletPairReduced, ClosedForms) {
  const ComplexMatrix expected3 = (ComplexMatrix::Identity(9, 9) - swap_operator(3)) / 6.0;
  EXPECT_LT(max_abs(singlet_pair_reduced(3).matrix() - expected3), 1e-15);
  EXPECT_LT(max_abs(singlet_pair_reduced(2).matrix() - singlet_state({2}).projector()), 1e-15);
  for (int d = 2; d <= 10; ++d) EXPECT_NEAR(werner_c(singlet_pair_reduced(d), d).value, 1.0, 1e-12);
}

TEST(SingletPairReduced, MatchesFullStateMarginals) {
  for (int d = 2; d <= 5; ++d) {
    const PureState xi = singlet_state({d});
    const DensityMatrix closed = singlet_pair_reduced(d);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) EXPECT_LT(max_abs(partial_trace(xi, {i, j}).matrix() - closed.matrix()), 1e-10);
  }
  // The qutrit marginal via the full-density-matrix path.
  const PureState xi3 = singlet_state({3});
  const auto rho = partial_trace(DensityMatrix::from_pure(xi3), {3, 3, 3}, {0, 1});
  EXPECT_LT(max_abs(rho.matrix() - singlet_pair_reduced(3).matrix()), 1e-15);
}

TEST(ZetaParams, Invariants) {
  const ZetaParams p(0.461);
  EXPECT_NEAR(p.b(), 0.512, 5e-4);
  EXPECT_NEAR(p.a() * p.a() + 3.0 * p.b() * p.b(), 1.0, 1e-12);
  EXPECT_EQ(p.residues(), (std::set<int>{1, 2, 4}));
  EXPECT_DOUBLE_EQ(ZetaParams(0.5).b(), 0.5);
  EXPECT_THROW(ZetaParams(1.2), std::invalid_argument);
  EXPECT_THROW(ZetaParams(-0.1), std::invalid_argument);
}

TEST(ZetaState, ProductLimit) {
  const PureState z = zeta_state(ZetaParams(1.0));
  const double r = 1.0 / std::sqrt(7.0);
  for (int j = 0; j < 7; ++j) EXPECT_NEAR(z[triple_index(j, j, j)].real(), r, 1e-15);
  EXPECT_NEAR(z.amplitudes().cwiseAbs2().sum(), 1.0, 1e-15);
}

TEST(ZetaState, TwentyEightTermsWithExpectedWeights) {
  const ZetaParams p(0.3);
  const PureState z = zeta_state(p);
  int heavy = 0, light = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double v = z[i].real();
    if (std::abs(v - p.a() / std::sqrt(7.0)) < 1e-15) ++heavy;
    else if (std::abs(v - p.b() / std::sqrt(7.0)) < 1e-15) ++light;
    else EXPECT_EQ(v, 0.0);
  }
  EXPECT_EQ(heavy, 7);
  EXPECT_EQ(light, 21);
}

TEST(ZetaState, IndexFormsAgreeExactly) {
  for (double a : {0.0, 0.2, 0.461, 0.5, 1.0}) {
    const ZetaParams p(a);
    const auto direct = zeta_state(p).amplitudes();
    EXPECT_EQ(zeta_state(p, ZetaForm::kHalved).amplitudes(), direct);
    EXPECT_EQ(zeta_state(p, ZetaForm::kShifted).amplitudes(), direct);
  }
}

TEST(ZetaState, HalvedFormNeedsClosedResidues) {
  const auto bad = ZetaParams::with_residues_unchecked(0.5, {1, 2, 3});
  EXPECT_GT(max_diff(zeta_state(bad, ZetaForm::kHalved).amplitudes(), zeta_state(bad).amplitudes()), 0.1);
}

TEST(CyclicPermute, MovesLabelsAndHasPeriodThree) {
  ComplexVector v = ComplexVector::Zero(8);
  v[1] = 1.0;  // |001>
  const PureState moved = cyclic_permute(PureState({2, 2, 2}, v));
  EXPECT_EQ(moved[4], Complex(1.0));  // |100>
  Rng rng(43);
  const PureState psi = random_state({3, 3, 3}, rng);
  EXPECT_EQ(cyclic_permute(cyclic_permute(cyclic_permute(psi))).amplitudes(), psi.amplitudes());
  EXPECT_THROW(cyclic_permute(random_state({2, 3, 2}, rng)), std::invalid_argument);
}

TEST(CyclicPermute, ZetaIsInvariant) {
  for (double a : {0.0, 0.461, 0.5, 0.9}) {
    const PureState z = zeta_state(ZetaParams(a));
    EXPECT_NEAR(fidelity(z, cyclic_permute(z)), 1.0, 1e-12);
  }
  const PureState bad = zeta_state(ZetaParams::with_residues_unchecked(0.5, {1, 2, 3}));
  EXPECT_LT(fidelity(bad, cyclic_permute(bad)), 1.0 - 1e-3);
}

TEST(ZetaState, PairMarginalsShareSpectrum) {
  for (double a : {0.1, 0.461, 0.77}) {
    const PureState z = zeta_state(ZetaParams(a));
    const auto ab = clipped_spectrum(partial_trace(z, {0, 1}).matrix()).values();
    const auto bc = clipped_spectrum(partial_trace(z, {1, 2}).matrix()).values();
    const auto ca = clipped_spectrum(partial_trace(z, {0, 2}).matrix()).values();
    for (std::size_t k = 0; k < ab.size(); ++k) {
      EXPECT_NEAR(ab[k], bc[k], 1e-10);
      EXPECT_NEAR(bc[k], ca[k], 1e-10);
    }
  }
}

TEST(SState, OrthonormalAndTwoBitsAtHalf) {
  const ZetaParams p(0.5);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) EXPECT_NEAR(std::abs(inner(s_state(i, p), s_state(j, p))), i == j ? 1.0 : 0.0, 1e-15);
  const auto lambda = schmidt_spectrum(s_state(2, p), {0});
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(lambda[static_cast<std::size_t>(k)], 0.25, 1e-15);
  for (int k = 4; k < 7; ++k) EXPECT_EQ(lambda[static_cast<std::size_t>(k)], 0.0);
  EXPECT_THROW(s_state(7, p), std::invalid_argument);
}

TEST(RhoBc, ClosedFormMatchesPartialTrace) {
  for (double a : {0.0, 0.461, 0.5, 1.0}) {
    const ZetaParams p(a);
    const auto closed = rho_bc(p);
    EXPECT_NEAR(closed.matrix().trace().real(), 1.0, 1e-14);
    EXPECT_LT(max_abs(closed.matrix() - partial_trace(zeta_state(p), {1, 2}).matrix()), 1e-12);
  }
  // The full 343x343 density-matrix path at the optimal a.
  const ZetaParams p(0.461);
  const auto via_rho = partial_trace(DensityMatrix::from_pure(zeta_state(p)), {7, 7, 7}, {1, 2});
  EXPECT_LT(max_abs(rho_bc(p).matrix() - via_rho.matrix()), 1e-12);
}

TEST(RhoBc, ProductLimit) {
  ComplexMatrix expected = ComplexMatrix::Zero(49, 49);
  for (int j = 0; j < 7; ++j) expected(j * 7 + j, j * 7 + j) = 1.0 / 7.0;
  EXPECT_LT(max_abs(rho_bc(ZetaParams(1.0)).matrix() - expected), 1e-15);
}

TEST(BetaVector, NormalizesAndFixesGauge) {
  ComplexVector raw(7);
  raw << 0.0, Complex(0.0, 2.0), 1.0, 0.0, 0.0, 0.0, Complex(-1.0, 1.0);
  const BetaVector beta(raw);
  EXPECT_NEAR(beta.coeffs().norm(), 1.0, 1e-15);
  EXPECT_EQ(beta[0], Complex(0.0));
  EXPECT_GE(beta[1].real(), 0.0);
  EXPECT_EQ(beta[1].imag(), 0.0);
  // Relative phases survive gauge fixing.
  EXPECT_NEAR(std::arg(beta[2] / beta[1]), std::arg(Complex(1.0) / Complex(0.0, 2.0)), 1e-15);
  EXPECT_THROW(BetaVector(ComplexVector::Zero(7)), std::invalid_argument);
  EXPECT_THROW(BetaVector(ComplexVector::Ones(6)), std::invalid_argument);
}

TEST(BetaToState, BasisVectorGivesSj) {
  const ZetaParams p(0.37);
  for (int j = 0; j < 7; ++j) EXPECT_LT(max_diff(beta_to_state(BetaVector::basis(j), p).amplitudes(), s_state(j, p).amplitudes()), 1e-15);
}

TEST(BetaToState, UniformBetaAgreesWithSvdOracle) {
  const ZetaParams p(0.461);
  const BetaVector uniform(ComplexVector::Ones(7));
  const PureState state = beta_to_state(uniform, p);
  // Orthonormal s_j: the norm is |beta| = 1 before any renormalization.
  ComplexVector raw = ComplexVector::Zero(49);
  for (int j = 0; j < 7; ++j) raw += uniform[j] * s_state(j, p).amplitudes();
  EXPECT_NEAR(raw.norm(), 1.0, 1e-14);
  // Oracle: singular values of the 7x7 amplitude matrix.
  ComplexMatrix m(7, 7);
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 7; ++c) m(r, c) = state[static_cast<std::size_t>(r * 7 + c)];
  const Eigen::VectorXd sv = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
  double oracle = 0.0;
  for (int k = 0; k < 7; ++k) {
    const double p2 = sv[k] * sv[k];
    if (p2 > 0.0) oracle -= p2 * std::log2(p2);
  }
  EXPECT_NEAR(pure_entanglement(state, {0}), oracle, 1e-12);
}

TEST(BetaToState, PublishedCoefficientsAtOptimalA) {
  ComplexVector raw(7);
  raw << 0.120, 0.197, 0.689, 0.259, -0.468, -0.275, -0.332;
  const BetaVector beta(raw);
  EXPECT_NEAR(pure_entanglement(beta_to_state(beta, ZetaParams(0.461)), {0}), 1.9944, 5e-4);
}

TEST(SymmetryOperators, Structure) {
  const auto ops = symmetry_operators();
  EXPECT_NEAR(std::abs(ops.omega - std::polar(1.0, 2.0 * std::numbers::pi / 7.0)), 0.0, 1e-15);
  EXPECT_LT(max_abs(ops.U * ops.U.adjoint() - ComplexMatrix::Identity(49, 49)), 1e-12);
  EXPECT_LT(max_abs(ops.V * ops.V.adjoint() - ComplexMatrix::Identity(49, 49)), 1e-12);
  for (int j = 0; j < 7; ++j) {
    EXPECT_EQ(ops.T((j + 1) % 7, j), Complex(1.0));
    for (int i = 0; i < 7; ++i)
      EXPECT_NEAR(std::abs(ops.U(i * 7 + j, i * 7 + j) - std::pow(ops.omega, 5 * i + 3 * j)), 0.0, 1e-12);
  }
}

TEST(SymmetryOperators, ActionOnSj) {
  const auto ops = symmetry_operators();
  for (double a : {0.2, 0.461, 0.5}) {
    const ZetaParams p(a);
    for (int j = 0; j < 7; ++j) {
      const auto s = s_state(j, p).amplitudes();
      EXPECT_LT(max_diff(ops.U * s, std::pow(ops.omega, j) * s), 1e-12);
      EXPECT_LT(max_diff(ops.V * s, s_state((j + 1) % 7, p).amplitudes()), 1e-12);
      // UV = w VU on the span.
      EXPECT_LT(max_diff(ops.U * (ops.V * s), ops.omega * (ops.V * (ops.U * s))), 1e-12);
    }
  }
  const auto s0 = s_state(0, ZetaParams(0.5)).amplitudes();
  EXPECT_LT(max_diff(ops.U * s0, s0), 1e-12);
  EXPECT_LT(max_diff(ops.V * s_state(6, ZetaParams(0.5)).amplitudes(), s0), 1e-12);
}

TEST(GenerateDecomposition, BasisVectorGivesSevenCopiesOfEachSj) {
  const ZetaParams p(0.461);
  const Decomposition dec = generate_decomposition(BetaVector::basis(0), p);
  ASSERT_EQ(dec.size(), 49u);
  std::vector<int> hits(7, 0);
  for (const auto& e : dec.elements()) {
    EXPECT_DOUBLE_EQ(e.weight, 1.0 / 49.0);
    for (int j = 0; j < 7; ++j)
      if (fidelity(e.state, s_state(j, p)) > 1.0 - 1e-12) ++hits[static_cast<std::size_t>(j)];
  }
  for (int h : hits) EXPECT_EQ(h, 7);
  EXPECT_LT(max_abs(dec.mixture().matrix() - rho_bc(p).matrix()), 1e-12);
}

TEST(GenerateDecomposition, RandomBetaReconstructsWithEqualEntanglement) {
  Rng rng(47);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    const ZetaParams p(unit(rng));
    const DensityMatrix target = rho_bc(p);
    for (int r = 0; r < 10; ++r) {
      const BetaVector beta = random_beta(rng);
      const Decomposition dec = generate_decomposition(beta, p);
      EXPECT_LT(max_abs(dec.mixture().matrix() - target.matrix()), 1e-10);
      const double e0 = pure_entanglement(beta_to_state(beta, p), {0});
      for (const auto& e : dec.elements()) EXPECT_NEAR(pure_entanglement(e.state, {0}), e0, 1e-10);
    }
  }
}

TEST(WState, Construction) {
  const PureState w3 = w_state(3);
  const double r = 1.0 / std::sqrt(3.0);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(w3[i].real(), (i == 1 || i == 2 || i == 4) ? r : 0.0, 1e-15);
  const PureState w2 = w_state(2);
  EXPECT_NEAR(qubit_concurrence_pure(w2).value, 1.0, 1e-15);
  EXPECT_THROW(w_state(1), std::invalid_argument);
}

TEST(WState, PairwiseConcurrenceIsTwoOverN) {
  for (int n = 3; n <= 6; ++n) {
    const DensityMatrix pair = partial_trace(w_state(n), {0, 1});
    EXPECT_NEAR(qubit_concurrence_mixed(pair).value, 2.0 / n, 1e-9);
  }
  EXPECT_NEAR(qubit_concurrence_mixed(partial_trace(w_state(4), {1, 3})).value, 0.5, 1e-9);
}

}  // namespace
}  // namespace qshare
