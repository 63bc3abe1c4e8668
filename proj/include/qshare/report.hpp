#pragma once

// Report-producing commands behind the qshare CLI: the summary table, the
// singlet and zeta reports, and the invariant verification suite.
//
// Every command returns a Report, serialized as
//   { "schema_version": 1, "command", "inputs", "results", "residuals", "warnings" }
// `results.ok` is false when any check inside the command failed.

#include "qshare/linalg.hpp"
#include "qshare/measures.hpp"
#include "qshare/optimize.hpp"
#include "qshare/random.hpp"
#include "qshare/states.hpp"

#include <json.hpp>

#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qshare {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum class Provenance { kClosedForm, kOptimized, kKnownBound };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::kClosedForm: return "closed-form";
    case Provenance::kOptimized: return "optimized";
    case Provenance::kKnownBound: return "known-bound";
  }
  throw std::invalid_argument("unknown provenance");
}

inline Provenance provenance_from_string(const std::string& s) {
  if (s == "closed-form") return Provenance::kClosedForm;
  if (s == "optimized") return Provenance::kOptimized;
  if (s == "known-bound") return Provenance::kKnownBound;
  throw std::invalid_argument("unknown provenance '" + s + "'");
}

/// One row of the summary table: pairwise E_f bound for n particles of
/// dimension d and its fraction of the pair capacity log2 d.
struct ReportRecord {
  int d = 2;
  int n = 3;
  Ebits e_bound = 0.0;
  double ratio = 0.0;
  Provenance provenance = Provenance::kClosedForm;

  static ReportRecord make(int d, int n, Ebits e, Provenance p) {
    if (d < 2) throw std::invalid_argument("record dimension must be at least 2");
    return {d, n, e, e / std::log2(static_cast<double>(d)), p};
  }

  bool consistent() const { return std::abs(ratio - e_bound / std::log2(static_cast<double>(d))) <= 1e-9; }

  bool operator==(const ReportRecord&) const = default;
};

inline void to_json(Json& j, const ReportRecord& r) {
  j = Json{{"d", r.d}, {"n", r.n}, {"e_bound", r.e_bound}, {"ratio", r.ratio}, {"provenance", to_string(r.provenance)}};
}

inline void from_json(const Json& j, ReportRecord& r) {
  r.d = j.at("d").get<int>();
  r.n = j.at("n").get<int>();
  r.e_bound = j.at("e_bound").get<double>();
  r.ratio = j.at("ratio").get<double>();
  r.provenance = provenance_from_string(j.at("provenance").get<std::string>());
}

struct Report {
  int schema_version = kSchemaVersion;
  std::string command;
  Json inputs = Json::object();
  Json results = Json::object();
  Json residuals = Json::object();
  std::vector<std::string> warnings;

  bool ok() const { return results.value("ok", false); }

  bool operator==(const Report&) const = default;
};

inline void to_json(Json& j, const Report& r) {
  j = Json{{"schema_version", r.schema_version}, {"command", r.command},   {"inputs", r.inputs},
           {"results", r.results},               {"residuals", r.residuals}, {"warnings", r.warnings}};
}

inline void from_json(const Json& j, Report& r) {
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kSchemaVersion) throw std::invalid_argument("unsupported report schema version");
  r.command = j.at("command").get<std::string>();
  r.inputs = j.at("inputs");
  r.results = j.at("results");
  r.residuals = j.at("residuals");
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
}

inline std::string emit_json(const Report& r) { return Json(r).dump(2); }

inline Report parse_json(const std::string& text) { return Json::parse(text).get<Report>(); }

/// 0 iff the report's checks passed and, under `strict`, it carries no warnings.
inline int exit_code(const Report& r, bool strict) {
  if (!r.ok()) return 1;
  if (strict && !r.warnings.empty()) return 2;
  return 0;
}

struct CommandOptions {
  OptimizationConfig config;
  double werner_tolerance = kWernerTolerance;
  ScanOptions scan;
};

namespace detail {

inline Json config_json(const CommandOptions& opts) {
  return Json{{"seed", opts.config.seed},
              {"restarts", opts.config.restarts},
              {"max_iterations", opts.config.max_iterations},
              {"value_tolerance", opts.config.value_tolerance},
              {"step_tolerance", opts.config.step_tolerance},
              {"parallel", opts.config.parallel}};
}

inline void note_non_convergence(Report& report, const OptimizationResult& opt, const std::string& where) {
  if (opt.non_converged_restarts > 0)
    report.warnings.push_back(std::to_string(opt.non_converged_restarts) + " optimizer restarts did not converge (" + where + ")");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// table

struct TableReport {
  Report report;
  std::vector<ReportRecord> rows;
};

inline TableReport cmd_table(const CommandOptions& opts) {
  TableReport out;
  Report& report = out.report;
  report.command = "table";
  report.inputs = detail::config_json(opts);
  report.inputs["grid_step"] = opts.scan.step;
  report.inputs["refine_width"] = opts.scan.refine_width;
  report.inputs["werner_tolerance"] = opts.werner_tolerance;
  bool ok = true;

  // d = 2: three-qubit W state, pairwise E_f via the mixed-state concurrence.
  const DensityMatrix w_pair = partial_trace(w_state(3), {0, 1});
  const Concurrence w_c = qubit_concurrence_mixed(w_pair);
  const Ebits w_eof = qubit_eof(w_pair);
  out.rows.push_back(ReportRecord::make(2, 3, w_eof, Provenance::kKnownBound));
  report.residuals["d2_concurrence_minus_two_thirds"] = std::abs(w_c.value - 2.0 / 3.0);
  report.residuals["d2_eof_minus_koashi_bound"] = std::abs(w_eof - koashi_bound(3));

  // d = 3: SU(3) singlet pair marginal is a Werner state with c = 1.
  const DensityMatrix singlet_pair = singlet_pair_reduced(3);
  const WernerFit fit = werner_fit(singlet_pair, 3, opts.werner_tolerance);
  report.residuals["d3_werner_fit"] = fit.residual;
  if (fit.is_werner()) {
    out.rows.push_back(ReportRecord::make(3, 3, werner_eof(singlet_pair, 3, opts.werner_tolerance), Provenance::kClosedForm));
  } else {
    ok = false;
    report.warnings.push_back("d=3 singlet pair marginal failed the Werner fit");
  }

  // d = 7: zeta family, maximized over a.
  const OuterScanResult scan = maximize_over_a(opts.config, opts.scan);
  out.rows.push_back(ReportRecord::make(7, 3, scan.e_star, Provenance::kOptimized));
  for (const auto& w : scan.warnings) report.warnings.push_back(w);
  const ZetaEofResult at_star = eof_zeta(scan.a_star, opts.config);
  detail::note_non_convergence(report, at_star.optimum, "a*");
  report.residuals["d7_decomposition_average_gap"] = std::abs(at_star.decomposition_average - at_star.value());
  report.residuals["d7_reconstruction"] = at_star.reconstruction_residual;
  if (!at_star.verified) ok = false;

  report.results["rows"] = out.rows;
  report.results["a_star"] = scan.a_star;
  report.results["b_star"] = ZetaParams(scan.a_star).b();
  report.results["scan_points"] = scan.scan_trace.size();
  report.results["scan_unimodal"] = scan.unimodal;
  report.results["ok"] = ok;
  return out;
}

inline std::vector<ReportRecord> table_rows(const Report& report) {
  return report.results.at("rows").get<std::vector<ReportRecord>>();
}

// ---------------------------------------------------------------------------
// singlet

inline constexpr int kMaxSingletReportDim = 32;
inline constexpr int kMaxFullStateCheckDim = 5;

inline Report cmd_singlet(int d, const CommandOptions& opts) {
  if (d < 2 || d > kMaxSingletReportDim)
    throw std::invalid_argument("singlet report supports 2 <= d <= " + std::to_string(kMaxSingletReportDim));
  Report report;
  report.command = "singlet";
  report.inputs = Json{{"d", d}, {"werner_tolerance", opts.werner_tolerance}};

  const DensityMatrix pair = singlet_pair_reduced(d);
  const WernerFit fit = werner_fit(pair, d, opts.werner_tolerance);
  const Concurrence c = werner_c(pair, d);
  bool ok = fit.is_werner();
  report.results["is_werner"] = fit.is_werner();
  report.results["c"] = c.value;
  report.residuals["werner_fit"] = fit.residual;
  if (fit.is_werner()) {
    const Ebits eof = werner_eof(pair, d, opts.werner_tolerance);
    report.results["a_w"] = fit.params->a_w;
    report.results["b_w"] = fit.params->b_w;
    report.results["eof"] = eof;
    ok = ok && std::abs(eof - 1.0) <= 1e-9 && std::abs(c.value - 1.0) <= 1e-10;
  } else {
    report.warnings.push_back("pair marginal is not a Werner state within tolerance");
  }

  if (d <= kMaxFullStateCheckDim) {
    const PureState xi = singlet_state({d});
    double worst = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        worst = std::max(worst, max_abs(partial_trace(xi, {i, j}).matrix() - pair.matrix()));
    report.residuals["full_state_pairs"] = worst;
    report.results["full_state_checked"] = true;
    ok = ok && worst <= 1e-10;
  } else {
    report.results["full_state_checked"] = false;
  }
  report.results["ok"] = ok;
  return report;
}

// ---------------------------------------------------------------------------
// zeta

inline Report cmd_zeta(double a, const CommandOptions& opts) {
  Report report;
  report.command = "zeta";
  report.inputs = detail::config_json(opts);
  report.inputs["a"] = a;

  const ZetaParams params(a);
  const ZetaEofResult eof = eof_zeta(a, opts.config);
  Json beta = Json::array();
  for (int j = 0; j < kZetaDim; ++j) beta.push_back({eof.optimum.argmin[j].real(), eof.optimum.argmin[j].imag()});

  report.results["a"] = a;
  report.results["b"] = params.b();
  report.results["min_e"] = eof.value();
  report.results["argmin_beta"] = beta;
  report.results["restart_index"] = eof.optimum.restart_index;
  report.results["iterations_used"] = eof.optimum.iterations_used;
  report.results["non_converged_restarts"] = eof.optimum.non_converged_restarts;
  report.results["nontrivial_minimizer_found"] = eof.optimum.nontrivial_minimizer_found;
  report.results["e_of_s_j"] = entanglement_of_beta(BetaVector::basis(0), params);
  report.residuals["decomposition_average_gap"] = std::abs(eof.decomposition_average - eof.value());
  report.residuals["reconstruction"] = eof.reconstruction_residual;
  detail::note_non_convergence(report, eof.optimum, "a=" + std::to_string(a));
  report.results["ok"] = eof.verified;
  return report;
}

// ---------------------------------------------------------------------------
// verify

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst deviation (or the checked value)
  double tolerance = 0.0;
};

inline void to_json(Json& j, const CheckResult& c) {
  j = Json{{"module", c.module}, {"name", c.name}, {"passed", c.passed}, {"measured", c.measured}, {"tolerance", c.tolerance}};
}

/// Injection points for exercising the suite's failure paths.
struct VerifyHooks {
  std::optional<std::set<int>> residues;  // replaces Q = {1,2,4} in every zeta construction
};

namespace detail {

class CheckList {
 public:
  void add(std::string module, std::string name, double measured, double tol) {
    checks_.push_back({std::move(module), std::move(name), measured <= tol, measured, tol});
  }
  void add_flag(std::string module, std::string name, bool passed) {
    checks_.push_back({std::move(module), std::move(name), passed, passed ? 0.0 : 1.0, 0.0});
  }
  const std::vector<CheckResult>& checks() const { return checks_; }

 private:
  std::vector<CheckResult> checks_;
};

inline std::vector<double> sorted_spectrum(const DensityMatrix& rho) { return clipped_spectrum(rho.matrix()).values(); }

inline double spectrum_gap(const std::vector<double>& l, const std::vector<double>& r) {
  const std::size_t n = std::max(l.size(), r.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = k < l.size() ? l[k] : 0.0;
    const double b = k < r.size() ? r[k] : 0.0;
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

inline void verify_linalg(CheckList& list, Rng& rng) {
  double trace_vs_schmidt = 0.0, both_sides = 0.0;
  const std::vector<Dims> shapes{{2, 2}, {2, 3}, {3, 4, 2}, {7, 7}, {2, 2, 2, 2}};
  for (const auto& dims : shapes) {
    const PureState psi = random_state(dims, rng);
    for (int k = 0; k + 1 < static_cast<int>(dims.size()); ++k) {
      std::vector<int> left(static_cast<std::size_t>(k + 1));
      std::iota(left.begin(), left.end(), 0);
      std::vector<int> right;
      for (int m = k + 1; m < static_cast<int>(dims.size()); ++m) right.push_back(m);
      const auto schmidt = schmidt_spectrum(psi, left).values();
      const auto via_left = sorted_spectrum(partial_trace(psi, left));
      const auto via_right = sorted_spectrum(partial_trace(DensityMatrix::from_pure(psi), dims, right));
      trace_vs_schmidt = std::max(trace_vs_schmidt, spectrum_gap(schmidt, via_left));
      both_sides = std::max(both_sides, spectrum_gap(via_left, via_right));
    }
  }
  list.add("qlinalg", "partial trace spectrum equals Schmidt spectrum", trace_vs_schmidt, 1e-10);
  list.add("qlinalg", "both marginals of a pure state share a spectrum", both_sides, 1e-10);

  double recon = 0.0;
  for (int n : {1, 2, 5, 9, 16, 25, 36, 49}) {
    const ComplexMatrix h = random_hermitian(n, rng);
    const auto es = hermitian_eigensystem(h);
    Eigen::VectorXd vals(n);
    for (int k = 0; k < n; ++k) vals[k] = es.values[static_cast<std::size_t>(k)];
    recon = std::max(recon, max_abs(h - es.vectors * vals.cast<Complex>().asDiagonal() * es.vectors.adjoint()));
  }
  list.add("qlinalg", "Hermitian eigensystem reconstruction up to dim 49", recon, 1e-10);

  // Small-integer entries keep every product exact, so equality is exact.
  const auto integer_matrix = [&](int rows, int cols) {
    std::uniform_int_distribution<int> digit(-9, 9);
    ComplexMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        const int re = digit(rng);
        m(i, j) = Complex(re, digit(rng));
      }
    return m;
  };
  const ComplexMatrix a = integer_matrix(2, 3), b = integer_matrix(3, 2), c = integer_matrix(2, 2);
  list.add("qlinalg", "kron associativity", max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))), 0.0);
}

inline void verify_measures(CheckList& list, Rng& rng) {
  double pure_gap = 0.0;
  for (int t = 0; t < 100; ++t) {
    const PureState psi = random_state({2, 2}, rng);
    pure_gap = std::max(pure_gap, std::abs(qubit_eof(DensityMatrix::from_pure(psi)) - pure_entanglement(psi, {0})));
  }
  list.add("measures", "two-qubit E_f of a pure state equals its entropy of entanglement", pure_gap, 1e-8);

  bool monotone = true;
  double prev = entanglement_from_concurrence(0.0);
  for (int k = 1; k <= 1000; ++k) {
    const double e = entanglement_from_concurrence(k / 1000.0);
    monotone = monotone && e >= prev;
    prev = e;
  }
  list.add_flag("measures", "E(C) monotone on a 1000-point grid", monotone);

  double werner_gap = 0.0, c_identity = 0.0;
  const ComplexMatrix f2 = swap_operator(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    // rho = p |singlet><singlet| + (1-p) I/4 has c = (3p - 1)/2.
    const double p = 0.25 + 0.75 * unit(rng);
    const ComplexMatrix rho = p * 0.5 * (ComplexMatrix::Identity(4, 4) - f2) + (1.0 - p) * ComplexMatrix::Identity(4, 4) / 4.0;
    const DensityMatrix dm(rho);
    werner_gap = std::max(werner_gap, std::abs(werner_eof(dm, 2) - qubit_eof(dm)));
    const auto fit = werner_fit(dm, 2);
    if (fit.is_werner())
      c_identity = std::max(c_identity, std::abs(werner_c(dm, 2).value + (fit.params->a_w * 2 + fit.params->b_w * 4)));
    else
      c_identity = 1.0;
  }
  list.add("measures", "d=2 Werner formula agrees with two-qubit concurrence formula", werner_gap, 1e-9);
  list.add("measures", "c equals -(a_w d + b_w d^2) for Werner fits", c_identity, 1e-10);

  // Random ensembles of random two-qubit states: mixture is reproduced and
  // the ensemble average bounds E_f from above.
  double mix_gap = 0.0;
  bool bounded = true;
  for (int t = 0; t < 20; ++t) {
    std::vector<Decomposition::Element> elements;
    const int count = 2 + t % 5;
    ComplexMatrix direct = ComplexMatrix::Zero(4, 4);
    for (int k = 0; k < count; ++k) {
      const PureState psi = random_state({2, 2}, rng);
      direct += psi.projector() / static_cast<double>(count);
      elements.push_back({1.0 / count, psi});
    }
    const Decomposition dec(std::move(elements));
    const DensityMatrix mixed = dec.mixture();
    mix_gap = std::max(mix_gap, max_abs(mixed.matrix() - direct));
    bounded = bounded && decomposition_average_entanglement(dec, {0}) >= qubit_eof(mixed) - 1e-10;
  }
  list.add("measures", "decomposition mixture reconstructs its density matrix", mix_gap, 1e-10);
  list.add_flag("measures", "decomposition average entanglement bounds E_f from above", bounded);
}

inline void verify_states(CheckList& list, Rng& rng, const std::function<ZetaParams(double)>& zeta) {
  double invariance = 0.0;
  for (int d = 2; d <= 4; ++d) {
    const PureState xi = singlet_state({d});
    for (int t = 0; t < 20; ++t) {
      const ComplexMatrix u = random_special_unitary(d, rng);
      ComplexMatrix full = u;
      for (int k = 1; k < d; ++k) full = kron(full, u);
      const ComplexVector moved = full * xi.amplitudes();
      invariance = std::max(invariance, std::abs(std::abs(xi.amplitudes().dot(moved)) - 1.0));
    }
  }
  list.add("states", "singlet invariant under U x ... x U for random SU(d), d <= 4", invariance, 1e-9);

  double pairs = 0.0;
  bool eof_one = true;
  for (int d = 2; d <= 5; ++d) {
    const PureState xi = singlet_state({d});
    const DensityMatrix closed = singlet_pair_reduced(d);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) pairs = std::max(pairs, max_abs(partial_trace(xi, {i, j}).matrix() - closed.matrix()));
    eof_one = eof_one && std::abs(werner_eof(closed, d) - 1.0) <= 1e-9;
  }
  list.add("states", "every singlet pair marginal equals (I - F)/(d(d-1)), d <= 5", pairs, 1e-10);
  list.add_flag("states", "singlet pair marginals carry one ebit", eof_one);

  const auto residues = zeta(0.5).residues();
  bool closed_under_doubling = true;
  for (int k : residues) closed_under_doubling = closed_under_doubling && residues.count(mod(2LL * k, kZetaDim)) == 1;
  list.add_flag("states", "Q closed under doubling mod 7", closed_under_doubling);
  list.add_flag("states", "Q equals the quadratic residues mod 7", residues == quadratic_residues(kZetaDim));

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double ortho = 0.0, rho_paths = 0.0, pair_spectra = 0.0, reindex = 0.0, cyclic = 0.0, period = 0.0, uv = 0.0;
  const auto ops = symmetry_operators();
  for (double a : {0.0, 0.461, 0.5, unit(rng), 1.0}) {
    const ZetaParams params = zeta(a);
    std::vector<PureState> s;
    for (int j = 0; j < kZetaDim; ++j) s.push_back(s_state(j, params));
    for (int i = 0; i < kZetaDim; ++i)
      for (int j = 0; j < kZetaDim; ++j) ortho = std::max(ortho, std::abs(inner(s[i], s[j]) - (i == j ? 1.0 : 0.0)));
    for (int j = 0; j < kZetaDim; ++j) {
      const ComplexVector us = ops.U * s[j].amplitudes();
      const ComplexVector vs = ops.V * s[j].amplitudes();
      uv = std::max(uv, (us - std::pow(ops.omega, j) * s[j].amplitudes()).cwiseAbs().maxCoeff());
      uv = std::max(uv, (vs - s[(j + 1) % kZetaDim].amplitudes()).cwiseAbs().maxCoeff());
    }
    const PureState zeta_direct = zeta_state(params);
    rho_paths = std::max(rho_paths, max_abs(rho_bc(params).matrix() - partial_trace(zeta_direct, {1, 2}).matrix()));
    const auto ab = sorted_spectrum(partial_trace(zeta_direct, {0, 1}));
    const auto bc = sorted_spectrum(partial_trace(zeta_direct, {1, 2}));
    const auto ca = sorted_spectrum(partial_trace(zeta_direct, {0, 2}));
    pair_spectra = std::max({pair_spectra, spectrum_gap(ab, bc), spectrum_gap(bc, ca)});
    for (ZetaForm form : {ZetaForm::kHalved, ZetaForm::kShifted})
      reindex = std::max(reindex, (zeta_state(params, form).amplitudes() - zeta_direct.amplitudes()).cwiseAbs().maxCoeff());
    const PureState once = cyclic_permute(zeta_direct);
    cyclic = std::max(cyclic, std::abs(fidelity(zeta_direct, once) - 1.0));
    period = std::max(period, (cyclic_permute(cyclic_permute(once)).amplitudes() - zeta_direct.amplitudes()).cwiseAbs().maxCoeff());
  }
  list.add("states", "s_j orthonormal", ortho, 1e-12);
  list.add("states", "U|s_j> = w^j|s_j> and V|s_j> = |s_{j+1}>", uv, 1e-12);
  list.add("states", "rho_BC closed form equals partial trace of |zeta><zeta|", rho_paths, 1e-12);
  list.add("states", "zeta pair marginals AB, BC, CA share a spectrum", pair_spectra, 1e-10);
  list.add("states", "zeta index forms give identical amplitudes", reindex, 0.0);
  list.add("states", "zeta invariant under cyclic particle permutation", cyclic, 1e-12);
  list.add("states", "cyclic permutation has period 3", period, 0.0);

  double recon = 0.0, equal_e = 0.0;
  for (int t = 0; t < 5; ++t) {
    const ZetaParams params = zeta(unit(rng));
    const DensityMatrix target = rho_bc(params);
    for (int r = 0; r < 50; ++r) {
      const BetaVector beta = random_beta(rng);
      const Decomposition dec = generate_decomposition(beta, params);
      recon = std::max(recon, max_abs(dec.mixture().matrix() - target.matrix()));
      const double e0 = entanglement_of_beta(beta, params);
      for (const auto& el : dec.elements()) equal_e = std::max(equal_e, std::abs(pure_entanglement(el.state, {0}) - e0));
    }
  }
  list.add("states", "generated decompositions reconstruct rho_BC (50 beta x 5 a)", recon, 1e-10);
  list.add("states", "generated decomposition elements share E(beta)", equal_e, 1e-10);
}

inline void verify_optimize(CheckList& list, Rng& rng, const OptimizationConfig& config, Report& report) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sandwich = 0.0, witness = 0.0, gauge = 0.0, local_unitary = 0.0;
  const auto ops = symmetry_operators();
  for (double a : {0.461, 0.5, unit(rng)}) {
    const ZetaParams params(a);
    const OptimizationResult opt = min_entanglement_in_span(params, config);
    note_non_convergence(report, opt, "verify");
    witness = std::max(witness, std::abs(entanglement_of_beta(opt.argmin, params) - opt.value));
    for (int t = 0; t < 20; ++t) {
      const BetaVector beta = random_beta(rng);
      const double e = entanglement_of_beta(beta, params);
      sandwich = std::max(sandwich, opt.value - e);
      const BetaVector rephased(beta.coeffs() * std::polar(1.0, 2.0 * std::numbers::pi * unit(rng)));
      gauge = std::max(gauge, std::abs(entanglement_of_beta(rephased, params) - e));
    }
    const PureState base = beta_to_state(random_beta(rng), params);
    const double e_base = pure_entanglement(base, {0});
    ComplexVector um = base.amplitudes();
    for (int m = 0; m < kZetaDim; ++m, um = ops.U * um) {
      ComplexVector vp = um;
      for (int p = 0; p < kZetaDim; ++p, vp = ops.V * vp)
        local_unitary = std::max(local_unitary, std::abs(pure_entanglement(PureState::normalized(base.dims(), vp), {0}) - e_base));
    }
  }
  list.add("optimize", "span minimum bounds random E(beta) from below", sandwich, 1e-8);
  list.add("optimize", "argmin reproduces the reported minimum", witness, config.value_tolerance);
  list.add("optimize", "E(beta) invariant under global phase", gauge, 1e-12);
  list.add("optimize", "E invariant under the 49 local unitaries V^p U^m", local_unitary, 1e-10);

  OptimizationConfig seq = config;
  seq.parallel = false;
  OptimizationConfig par = config;
  par.parallel = true;
  const auto first = min_entanglement_in_span(0.5, seq);
  const auto second = min_entanglement_in_span(0.5, seq);
  const auto threaded = min_entanglement_in_span(0.5, par);
  list.add_flag("optimize", "sequential restarts are bitwise reproducible", first.all_restart_values == second.all_restart_values);
  list.add_flag("optimize", "parallel merge selects the same best restart",
                threaded.restart_index == first.restart_index && threaded.value == first.value);

  const auto at_zero = eof_zeta(0.0, config);
  const auto at_one = eof_zeta(1.0, config);
  list.add_flag("optimize", "eof_zeta evaluates at a = 0", std::isfinite(at_zero.value()) && at_zero.verified);
  list.add("optimize", "eof_zeta(1) = 0", std::abs(at_one.value()), 1e-9);
}

}  // namespace detail

inline Report cmd_verify(const CommandOptions& opts, const VerifyHooks& hooks = {}) {
  Report report;
  report.command = "verify";
  report.inputs = detail::config_json(opts);
  if (hooks.residues) report.inputs["injected_residues"] = *hooks.residues;

  const std::function<ZetaParams(double)> zeta = [&](double a) {
    return hooks.residues ? ZetaParams::with_residues_unchecked(a, *hooks.residues) : ZetaParams(a);
  };
  Rng rng(opts.config.seed);
  detail::CheckList list;
  detail::verify_linalg(list, rng);
  detail::verify_measures(list, rng);
  detail::verify_states(list, rng, zeta);
  detail::verify_optimize(list, rng, opts.config, report);

  int failed = 0;
  for (const auto& c : list.checks()) failed += c.passed ? 0 : 1;
  report.results["checks"] = list.checks();
  report.results["passed"] = static_cast<int>(list.checks().size()) - failed;
  report.results["failed"] = failed;
  report.results["ok"] = failed == 0;
  return report;
}

// ---------------------------------------------------------------------------
// text / csv rendering

namespace detail {

inline std::string fixed4(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

}  // namespace detail

inline std::string render_table_text(const std::vector<ReportRecord>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(4) << "d" << std::setw(4) << "n" << std::setw(12) << "E_bound" << std::setw(12)
     << "E/log2(d)" << "provenance\n";
  for (const auto& r : rows)
    os << std::setw(4) << r.d << std::setw(4) << r.n << std::setw(12) << detail::fixed4(r.e_bound) << std::setw(12)
       << detail::fixed4(r.ratio) << to_string(r.provenance) << "\n";
  return os.str();
}

inline std::string render_table_csv(const std::vector<ReportRecord>& rows) {
  std::ostringstream os;
  os << "d,n,e_bound,ratio,provenance\n" << std::setprecision(12);
  for (const auto& r : rows) os << r.d << ',' << r.n << ',' << r.e_bound << ',' << r.ratio << ',' << to_string(r.provenance) << "\n";
  return os.str();
}

/// Generic key/value text rendering; numbers to 4 decimals.
inline std::string render_text(const Report& report) {
  std::ostringstream os;
  if (report.command == "table") {
    os << render_table_text(table_rows(report));
    os << "a* = " << detail::fixed4(report.results.at("a_star").get<double>()) << "\n";
  } else if (report.command == "verify") {
    for (const auto& c : report.results.at("checks")) {
      os << (c.at("passed").get<bool>() ? "PASS " : "FAIL ") << '[' << c.at("module").get<std::string>() << "] "
         << c.at("name").get<std::string>() << "  (" << std::scientific << std::setprecision(2)
         << c.at("measured").get<double>() << " <= " << c.at("tolerance").get<double>() << ")\n"
         << std::defaultfloat;
    }
    os << report.results.at("passed").get<int>() << " passed, " << report.results.at("failed").get<int>() << " failed\n";
  } else {
    for (const auto& [key, value] : report.results.items()) {
      os << std::left << std::setw(28) << key;
      if (value.is_number_float())
        os << detail::fixed4(value.get<double>());
      else
        os << value.dump();
      os << "\n";
    }
    for (const auto& [key, value] : report.residuals.items())
      os << std::left << std::setw(28) << ("residual." + key) << std::scientific << std::setprecision(2)
         << value.get<double>() << std::defaultfloat << "\n";
  }
  for (const auto& w : report.warnings) os << "warning: " << w << "\n";
  return os.str();
}

}  // namespace qshare
