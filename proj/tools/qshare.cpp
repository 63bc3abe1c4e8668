// qshare: reproduce the shared-entanglement table and run the checks.
//
//   qshare table   [--format text|json|csv] [--seed N] [--restarts N] [--grid-step S]
//   qshare singlet --d D [--format text|json]
//   qshare zeta    --a A [--format text|json] [--seed N] [--restarts N]
//   qshare verify  [--format text|json]

#include "qshare/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

enum class Format { kText, kJson, kCsv };

std::uint64_t default_seed() {
  if (const char* env = std::getenv("QSHARE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("QSHARE_SEED is not an unsigned integer: ") + env);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairwise entanglement of formation for multi-qudit states"};
  app.require_subcommand(1);

  Format format = Format::kText;
  const std::map<std::string, Format> formats{{"text", Format::kText}, {"json", Format::kJson}, {"csv", Format::kCsv}};
  std::optional<std::uint64_t> seed;
  int restarts = qshare::OptimizationConfig{}.restarts;
  double tol = qshare::kWernerTolerance;
  bool strict = false;
  std::string parallel = "on";
  int d = 3;
  double a = 0.461;
  double grid_step = qshare::ScanOptions{}.step;
  double refine_width = qshare::ScanOptions{}.refine_width;

  app.add_option("--format", format, "Output format")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  app.add_option("--seed", seed, "Optimizer seed (default: $QSHARE_SEED or 0)");
  app.add_option("--restarts", restarts, "Optimizer restarts per value of a")->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "Werner-fit acceptance tolerance")->check(CLI::PositiveNumber);
  app.add_flag("--strict", strict, "Treat warnings (e.g. non-converged restarts) as failures");
  app.add_option("--parallel", parallel, "Run optimizer restarts in parallel")->check(CLI::IsMember({"on", "off"}));

  auto* table = app.add_subcommand("table", "Summary table for d = 2, 3, 7");
  table->add_option("--grid-step", grid_step, "Coarse grid step over a")->check(CLI::PositiveNumber);
  table->add_option("--refine-width", refine_width, "Golden-section target width")->check(CLI::PositiveNumber);
  auto* singlet = app.add_subcommand("singlet", "SU(d) singlet pair report");
  singlet->add_option("--d", d, "Qudit dimension")->required();
  auto* zeta = app.add_subcommand("zeta", "E_f of the d = 7 zeta-family pair state at fixed a");
  zeta->add_option("--a", a, "Amplitude of the |j,j,j> terms")->required()->check(CLI::Range(0.0, 1.0));
  auto* verify = app.add_subcommand("verify", "Run the invariant suite");

  // Global options are also accepted after the subcommand.
  for (auto* sub : {table, singlet, zeta, verify}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    qshare::CommandOptions opts;
    opts.config.seed = seed ? *seed : default_seed();
    opts.config.restarts = restarts;
    opts.config.parallel = parallel == "on";
    opts.werner_tolerance = tol;
    opts.scan.step = grid_step;
    opts.scan.refine_width = refine_width;

    if (format == Format::kCsv && !table->parsed()) {
      std::cerr << "error: csv output is only available for the table command\n";
      return 64;
    }

    qshare::Report report;
    std::vector<qshare::ReportRecord> rows;
    if (table->parsed()) {
      auto out = qshare::cmd_table(opts);
      report = std::move(out.report);
      rows = std::move(out.rows);
    } else if (singlet->parsed()) {
      report = qshare::cmd_singlet(d, opts);
    } else if (zeta->parsed()) {
      report = qshare::cmd_zeta(a, opts);
    } else {
      report = qshare::cmd_verify(opts);
    }

    switch (format) {
      case Format::kJson: std::cout << qshare::emit_json(report) << "\n"; break;
      case Format::kCsv:
        std::cout << qshare::render_table_csv(rows);
        for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
        break;
      case Format::kText: std::cout << qshare::render_text(report); break;
    }
    return qshare::exit_code(report, strict);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
