#pragma once

// Minimization of the pure-state entanglement E(beta) over the span of the
// |s_j> states, and the outer maximization of that minimum over a.
//
// beta is carried as 14 real coordinates x = (Re beta, Im beta). Each local
// search runs BFGS on f(x / |x|) and renormalizes x after every accepted
// step. The gradient is analytic:
//
//   E = -Tr rho log2 rho,  rho = M M^dagger,  M = sum_j beta_j S_j
//   dE = -2 Re sum_j dbeta_j Tr(M^dagger G S_j),  G = log2 rho + 1/ln 2
//
// projected onto the tangent space of the unit sphere.

#include "qshare/linalg.hpp"
#include "qshare/measures.hpp"
#include "qshare/states.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace qshare {

struct OptimizationConfig {
  int restarts = 200;
  int max_iterations = 5000;
  double value_tolerance = 1e-10;
  double step_tolerance = 1e-12;
  std::uint64_t seed = 0;
  bool parallel = true;

  void validate() const {
    if (restarts <= 0 || max_iterations <= 0) throw std::invalid_argument("restarts and max_iterations must be positive");
    if (!(value_tolerance > 0.0 && value_tolerance < 1.0) || !(step_tolerance > 0.0 && step_tolerance < 1.0))
      throw std::invalid_argument("tolerances must lie in (0, 1)");
  }
};

struct OptimizationResult {
  Ebits value = 0.0;
  BetaVector argmin = BetaVector::basis(0);
  int restart_index = 0;
  int iterations_used = 0;
  std::vector<double> all_restart_values;
  int non_converged_restarts = 0;
  // Some restart within 1e-6 of the best value ended away from every |s_j>.
  bool nontrivial_minimizer_found = false;
};

struct OuterScanResult {
  double a_star = 0.0;
  Ebits e_star = 0.0;
  std::vector<std::pair<double, double>> scan_trace;  // (a, min_beta E), grid then refinement
  bool unimodal = true;
  std::vector<std::string> warnings;
};

struct ScanOptions {
  double a_min = 0.0;
  double a_max = 1.0;
  double step = 0.005;
  double refine_width = 1e-4;
  std::vector<double> grid;  // if non-empty, replaces the uniform grid
};

namespace detail {

using Mat7 = Eigen::Matrix<Complex, kZetaDim, kZetaDim>;
using Coords = Eigen::Matrix<double, 2 * kZetaDim, 1>;

inline double entropy_of_clipped(double lambda) {
  return lambda > kEigenvalueClip ? -lambda * std::log2(lambda) : 0.0;
}

}  // namespace detail

/// E(beta) across the B|C cut for fixed a, on the 14 real coordinates.
class SpanObjective {
 public:
  using Coords = detail::Coords;

  explicit SpanObjective(const ZetaParams& params) {
    for (int j = 0; j < kZetaDim; ++j) s_[static_cast<std::size_t>(j)] = s_matrix(j, params);
  }
  explicit SpanObjective(double a) : SpanObjective(ZetaParams(a)) {}

  static Coords to_coords(const ComplexVector& beta) {
    Coords x;
    for (int j = 0; j < kZetaDim; ++j) {
      x[j] = beta[j].real();
      x[j + kZetaDim] = beta[j].imag();
    }
    return x;
  }

  static ComplexVector to_beta(const Coords& x) {
    ComplexVector beta(kZetaDim);
    for (int j = 0; j < kZetaDim; ++j) beta[j] = Complex(x[j], x[j + kZetaDim]);
    return beta;
  }

  /// E of the normalized state x / |x|.
  double value(const Coords& x) const {
    const detail::Mat7 m = amplitude_matrix(x) / x.norm();
    Eigen::SelfAdjointEigenSolver<detail::Mat7> es(m * m.adjoint(), Eigen::EigenvaluesOnly);
    double e = 0.0;
    for (int k = 0; k < kZetaDim; ++k) e += detail::entropy_of_clipped(es.eigenvalues()[k]);
    return e;
  }

  /// Value and tangent-space gradient at a unit vector x.
  double value_and_gradient(const Coords& x, Coords& grad) const {
    const detail::Mat7 m = amplitude_matrix(x);
    Eigen::SelfAdjointEigenSolver<detail::Mat7> es(m * m.adjoint());
    Eigen::Matrix<double, kZetaDim, 1> log_weights;
    double e = 0.0;
    for (int k = 0; k < kZetaDim; ++k) {
      const double lambda = es.eigenvalues()[k];
      e += detail::entropy_of_clipped(lambda);
      log_weights[k] = std::log2(std::max(lambda, kEigenvalueClip)) + 1.0 / std::numbers::ln2;
    }
    const auto& v = es.eigenvectors();
    const detail::Mat7 g = v * log_weights.cast<Complex>().asDiagonal() * v.adjoint();
    const detail::Mat7 mg = m.adjoint() * g;
    for (int j = 0; j < kZetaDim; ++j) {
      // Tr(mg S_j) = sum_ab mg(a,b) S_j(b,a)
      const Complex c = (mg.transpose().cwiseProduct(s_[static_cast<std::size_t>(j)])).sum();
      grad[j] = -2.0 * c.real();
      grad[j + kZetaDim] = 2.0 * c.imag();
    }
    grad -= grad.dot(x) * x;
    return e;
  }

 private:
  detail::Mat7 amplitude_matrix(const Coords& x) const {
    detail::Mat7 m = detail::Mat7::Zero();
    for (int j = 0; j < kZetaDim; ++j) m += Complex(x[j], x[j + kZetaDim]) * s_[static_cast<std::size_t>(j)];
    return m;
  }

  std::array<detail::Mat7, kZetaDim> s_;
};

inline Ebits entanglement_of_beta(const BetaVector& beta, const ZetaParams& params) {
  return pure_entanglement(beta_to_state(beta, params), {0});
}

inline Ebits entanglement_of_beta(const BetaVector& beta, double a) {
  return entanglement_of_beta(beta, ZetaParams(a));
}

struct LocalSearchResult {
  SpanObjective::Coords x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// BFGS from a unit starting point, staying on the unit sphere.
inline LocalSearchResult local_minimize(const SpanObjective& objective, SpanObjective::Coords x,
                                        const OptimizationConfig& config) {
  using Coords = SpanObjective::Coords;
  using Hessian = Eigen::Matrix<double, 2 * kZetaDim, 2 * kZetaDim>;
  constexpr double kArmijo = 1e-4;
  constexpr double kGradientTolerance = 1e-10;
  constexpr int kMaxBacktracks = 60;

  x.normalize();
  Coords g;
  double f = objective.value_and_gradient(x, g);
  Hessian h = Hessian::Identity();
  LocalSearchResult out{x, f, 0, false};
  int flat_steps = 0;

  for (int it = 1; it <= config.max_iterations; ++it) {
    out.iterations = it;
    if (g.norm() <= kGradientTolerance) {
      out.converged = true;
      break;
    }
    Coords dir = -h * g;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      h.setIdentity();
      dir = -g;
      slope = -g.squaredNorm();
    }
    // Steps longer than a quarter turn only revisit the sphere.
    const double max_len = 0.5;
    if (dir.norm() > max_len) {
      const double shrink = max_len / dir.norm();
      dir *= shrink;
      slope *= shrink;
    }

    double t = 1.0;
    Coords x_new;
    double f_new = f;
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt, t *= 0.5) {
      x_new = (x + t * dir).normalized();
      f_new = objective.value(x_new);
      if (f_new <= f + kArmijo * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No representable descent left along this direction.
      out.converged = true;
      break;
    }

    Coords g_new;
    f_new = objective.value_and_gradient(x_new, g_new);
    const Coords s = x_new - x;
    const Coords y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-16) {
      const double rho = 1.0 / sy;
      const Hessian left = Hessian::Identity() - rho * s * y.transpose();
      h = left * h * left.transpose() + rho * s * s.transpose();
    }
    const double decrease = f - f_new;
    x = x_new;
    f = f_new;
    g = g_new;
    out.x = x;
    out.value = f;

    if (s.norm() <= config.step_tolerance) {
      out.converged = true;
      break;
    }
    flat_steps = decrease <= config.value_tolerance ? flat_steps + 1 : 0;
    if (flat_steps >= 3) {
      out.converged = true;
      break;
    }
  }
  out.x = x;
  out.value = f;
  return out;
}

/// Deterministic starting point for one restart: a Gaussian vector seeded
/// by seed + restart_index.
inline SpanObjective::Coords restart_start(std::uint64_t seed, int restart_index) {
  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(restart_index));
  std::normal_distribution<double> normal(0.0, 1.0);
  SpanObjective::Coords x;
  for (int k = 0; k < x.size(); ++k) x[k] = normal(rng);
  return x.normalized();
}

namespace detail {

template <typename Task>
void run_indexed(int count, bool parallel, Task&& task) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = parallel ? static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(count))) : 1;
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) task(i);
    });
}

inline bool is_basis_like(const ComplexVector& beta, double tol) {
  return beta.cwiseAbs2().maxCoeff() >= 1.0 - tol;
}

}  // namespace detail

inline OptimizationResult min_entanglement_in_span(const ZetaParams& params, const OptimizationConfig& config) {
  config.validate();
  const SpanObjective objective(params);
  std::vector<LocalSearchResult> runs(static_cast<std::size_t>(config.restarts));
  detail::run_indexed(config.restarts, config.parallel, [&](int r) {
    runs[static_cast<std::size_t>(r)] = local_minimize(objective, restart_start(config.seed, r), config);
  });

  OptimizationResult result;
  result.all_restart_values.reserve(runs.size());
  int best = -1;
  for (int r = 0; r < config.restarts; ++r) {
    const auto& run = runs[static_cast<std::size_t>(r)];
    result.all_restart_values.push_back(run.value);
    if (!run.converged) ++result.non_converged_restarts;
    if (!std::isfinite(run.value)) continue;
    if (best < 0 || run.value < runs[static_cast<std::size_t>(best)].value) best = r;
  }
  if (best < 0 || result.non_converged_restarts == config.restarts)
    throw std::runtime_error("every optimizer restart failed");

  const auto& winner = runs[static_cast<std::size_t>(best)];
  result.value = winner.value;
  result.argmin = BetaVector(SpanObjective::to_beta(winner.x));
  result.restart_index = best;
  result.iterations_used = winner.iterations;
  for (const auto& run : runs)
    if (run.value <= winner.value + 1e-6 && !detail::is_basis_like(SpanObjective::to_beta(run.x), 1e-6))
      result.nontrivial_minimizer_found = true;
  return result;
}

inline OptimizationResult min_entanglement_in_span(double a, const OptimizationConfig& config) {
  return min_entanglement_in_span(ZetaParams(a), config);
}

/// sum_j p_j E(phi_j) across the cut `side | rest`.
inline Ebits decomposition_average_entanglement(const Decomposition& dec, const std::vector<int>& side) {
  double avg = 0.0;
  for (const auto& e : dec.elements()) avg += e.weight * pure_entanglement(e.state, side);
  return avg;
}

struct ZetaEofResult {
  OptimizationResult optimum;
  Ebits decomposition_average = 0.0;  // average over the 49-element decomposition from argmin
  double reconstruction_residual = 0.0;  // max-norm of mixture - rho_BC
  bool verified = false;  // |average - value| <= 1e-8 and residual <= 1e-10

  Ebits value() const { return optimum.value; }
};

/// E_f(rho_BC): the span minimum, plus the decomposition that attains it.
inline ZetaEofResult eof_zeta(double a, const OptimizationConfig& config) {
  const ZetaParams params(a);
  ZetaEofResult out{min_entanglement_in_span(params, config)};
  const Decomposition dec = generate_decomposition(out.optimum.argmin, params);
  out.decomposition_average = decomposition_average_entanglement(dec, {0});
  out.reconstruction_residual = max_abs(dec.mixture().matrix() - rho_bc(params).matrix());
  out.verified = std::abs(out.decomposition_average - out.optimum.value) <= 1e-8 && out.reconstruction_residual <= 1e-10;
  return out;
}

namespace detail {

inline std::vector<double> scan_grid(const ScanOptions& opts) {
  if (!opts.grid.empty()) return opts.grid;
  if (!(opts.step > 0.0) || opts.a_min > opts.a_max) throw std::invalid_argument("invalid scan range");
  std::vector<double> grid;
  const auto n = static_cast<int>(std::floor((opts.a_max - opts.a_min) / opts.step + 1e-9));
  for (int i = 0; i <= n; ++i) grid.push_back(std::min(opts.a_max, opts.a_min + i * opts.step));
  if (grid.back() < opts.a_max - 1e-12) grid.push_back(opts.a_max);
  return grid;
}

inline bool unimodal(const std::vector<std::pair<double, double>>& trace, std::size_t peak, double slack) {
  for (std::size_t i = 1; i <= peak; ++i)
    if (trace[i].second < trace[i - 1].second - slack) return false;
  for (std::size_t i = peak + 1; i < trace.size(); ++i)
    if (trace[i].second > trace[i - 1].second + slack) return false;
  return true;
}

}  // namespace detail

/// Coarse grid over a, then golden-section refinement on the two grid
/// intervals around the best grid point. `unimodal` describes the whole
/// grid trace; refinement only needs the best point to dominate its
/// neighbours, which holds by construction unless it sits on the boundary.
inline OuterScanResult maximize_over_a(const OptimizationConfig& config, const ScanOptions& opts = {}) {
  const auto grid = detail::scan_grid(opts);
  for (double a : grid)
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("scan points must lie in [0,1]");
  if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("scan grid must be ascending");

  OuterScanResult out;
  auto evaluate = [&](double a) {
    const double e = min_entanglement_in_span(a, config).value;
    out.scan_trace.emplace_back(a, e);
    if (out.scan_trace.size() == 1 || e > out.e_star) {
      out.e_star = e;
      out.a_star = a;
    }
    return e;
  };
  for (double a : grid) evaluate(a);

  const auto peak = static_cast<std::size_t>(
      std::max_element(out.scan_trace.begin(), out.scan_trace.end(),
                       [](const auto& l, const auto& r) { return l.second < r.second; }) -
      out.scan_trace.begin());
  out.unimodal = detail::unimodal(out.scan_trace, peak, 1e-9);
  if (grid.size() < 3) return out;
  if (peak == 0 || peak + 1 == grid.size()) {
    out.warnings.emplace_back("best grid point lies on the scan boundary; reporting it without refinement");
    return out;
  }

  double lo = grid[peak - 1];
  double hi = grid[peak + 1];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = evaluate(x1);
  double f2 = evaluate(x2);
  while (hi - lo > opts.refine_width) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = evaluate(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = evaluate(x2);
    }
  }
  return out;
}

}  // namespace qshare
