// kshift: multi-shift deflated Krylov solver bench tool.
//
// Subcommands:
//   solve       solve one shifted family (flags only)
//   experiment  run a spec file or builtin preset, with flag overrides
//   ritz        dump per-cycle regular/harmonic Ritz values to CSV
//   table       accuracy sweep tables (table4_1 | table4_2)
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure,
// 4 budget exhausted before the requested tolerances were met.

#include "kshift/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace kshift;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitBudget = 4;

struct SpecFlags {
  std::optional<std::string> matrix;
  std::optional<std::string> shifts;
  std::optional<long> m, k, sub_m, sub_k;
  std::optional<double> rtol, sub_rtol, extra_rtol;
  std::optional<long> max_mv;
  std::optional<long> nrhs;
  std::optional<std::string> rhs_kind;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;
  std::optional<bool> related, parallel, correct, trace;
  std::optional<std::string> out;

  void attach(CLI::App* cmd) {
    cmd->add_option("--matrix", matrix,
                    "builtin:bidiag:<n> | builtin:planted:<n> | mm:<path>");
    cmd->add_option("--shifts", shifts, "comma list, base shift first");
    cmd->add_option("--m", m, "first-solver subspace size");
    cmd->add_option("--k", k, "first-solver deflation count");
    cmd->add_option("--rtol", rtol, "first-solver relative tolerance");
    cmd->add_option("--extra-rtol", extra_rtol,
                    "tolerance for the extra right-hand side");
    cmd->add_option("--sub-m", sub_m, "cycle size for later right-hand sides");
    cmd->add_option("--sub-k", sub_k, "projection count for later rhs");
    cmd->add_option("--sub-rtol", sub_rtol, "tolerance for later rhs");
    cmd->add_option("--max-mv", max_mv, "matrix-vector product budget");
    cmd->add_option("--nrhs", nrhs, "number of right-hand sides");
    cmd->add_option("--rhs-kind", rhs_kind, "random | related:<eps>");
    cmd->add_option("--seed", seed, "rng seed");
    cmd->add_option("--variant", variant, "first solver: gmres | fom");
    cmd->add_flag("--related-project,!--no-related-project", related,
                  "project over prior solutions");
    cmd->add_flag("--parallel-rhs,!--no-parallel-rhs", parallel,
                  "solve later right-hand sides concurrently");
    cmd->add_flag("--correct,!--no-correct", correct,
                  "final v_{k+1} correction");
    cmd->add_flag("--trace-explicit", trace,
                  "report explicit residual traces");
    cmd->add_option("--out", out, "output CSV path");
  }

  void apply(ExperimentSpec& spec) const {
    if (matrix) spec.matrix = *matrix;
    if (shifts) spec.shifts = parse_shift_list(*shifts);
    if (m) spec.first_m = *m;
    if (k) spec.first_k = *k;
    if (rtol) spec.first_rtol = *rtol;
    if (extra_rtol) spec.extra_rtol = *extra_rtol;
    if (sub_m) spec.sub_m = *sub_m;
    if (sub_k) spec.sub_k = *sub_k;
    if (sub_rtol) spec.sub_rtol = *sub_rtol;
    if (max_mv) spec.max_matvecs = *max_mv;
    if (nrhs) spec.nrhs = *nrhs;
    if (rhs_kind) spec.rhs_kind = *rhs_kind;
    if (seed) spec.seed = *seed;
    if (variant) {
      if (*variant != "gmres" && *variant != "fom") {
        throw InvalidInputError("--variant must be gmres or fom");
      }
      spec.first_variant = (*variant == "fom") ? Variant::Fom : Variant::Gmres;
    }
    if (related) spec.related_project = *related;
    if (parallel) spec.parallel_rhs = *parallel;
    if (correct) spec.correct = *correct;
    if (trace) spec.trace_explicit = *trace;
    if (out) spec.out = *out;
  }
};

int summarize(const ExperimentResult& result) {
  for (const auto& w : result.report.warnings) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }
  for (const auto& s : result.per_rhs) {
    std::printf("rhs %d: %ld matvecs, %s\n", s.rhs_index, s.matvecs,
                s.converged ? "converged" : "NOT converged");
  }
  std::printf("total matvecs: %ld\n", result.total_matvecs);
  for (const auto& f : result.files) {
    std::printf("wrote %s\n", f.c_str());
  }
  return result.all_converged ? 0 : kExitBudget;
}

int run_solve(const SpecFlags& flags) {
  ExperimentSpec spec;
  spec.shifts = {Scalar(0.0)};
  flags.apply(spec);
  return summarize(run_experiment(spec));
}

int run_experiment_cmd(const std::string& preset, const std::string& specfile,
                       const std::string& out_prefix, const SpecFlags& flags) {
  std::vector<ExperimentSpec> specs;
  if (!preset.empty()) {
    const std::uint64_t seed = flags.seed.value_or(1);
    specs = experiment_preset(preset, seed, out_prefix);
  } else if (!specfile.empty()) {
    specs.push_back(ExperimentSpec::parse_file(specfile));
  } else {
    throw InvalidInputError("experiment: need --preset or --spec");
  }
  int exit_code = 0;
  for (ExperimentSpec spec : specs) {
    flags.apply(spec);
    std::printf("== %s ==\n", spec.out.empty() ? "(run)" : spec.out.c_str());
    exit_code = std::max(exit_code, summarize(run_experiment(spec)));
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-shift deflated Krylov solver bench"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "solve one shifted family");
  SpecFlags solve_flags;
  solve_flags.attach(solve);

  auto* experiment =
      app.add_subcommand("experiment", "run a preset or spec file");
  std::string preset, specfile, out_prefix;
  experiment->add_option("--preset", preset,
                         "example1 | example5 | example7 | example8");
  experiment->add_option("--spec", specfile, "key=value spec file");
  experiment->add_option("--out-prefix", out_prefix,
                         "prefix for preset output files");
  SpecFlags exp_flags;
  exp_flags.attach(experiment);

  auto* ritz = app.add_subcommand("ritz", "dump ritz/harmonic values");
  std::string ritz_preset_name, ritz_matrix = "builtin:bidiag:1000";
  std::string ritz_shifts = "0";
  long ritz_m = 40, ritz_cycles = 50, ritz_count = 10;
  double ritz_target = 0.0;
  std::uint64_t ritz_seed = 1;
  std::string ritz_out = "ritz.csv";
  ritz->add_option("--preset", ritz_preset_name, "example2 | example3");
  ritz->add_option("--matrix", ritz_matrix, "matrix source");
  ritz->add_option("--shifts", ritz_shifts, "shift list, base first");
  ritz->add_option("--m", ritz_m, "subspace size");
  ritz->add_option("--cycles", ritz_cycles, "restart cycles");
  ritz->add_option("--target", ritz_target, "dump values nearest this point");
  ritz->add_option("--count", ritz_count, "values kept per cycle");
  ritz->add_option("--seed", ritz_seed, "rng seed");
  ritz->add_option("--out", ritz_out, "output CSV");

  auto* table = app.add_subcommand("table", "accuracy sweep tables");
  std::string which = "table4_1";
  std::uint64_t table_seed = 1;
  std::string table_out = "table.csv";
  table->add_option("--which", which, "table4_1 | table4_2");
  table->add_option("--seed", table_seed, "rng seed");
  table->add_option("--out", table_out, "output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      return run_solve(solve_flags);
    }
    if (experiment->parsed()) {
      return run_experiment_cmd(preset, specfile, out_prefix, exp_flags);
    }
    if (ritz->parsed()) {
      RitzSpec spec;
      if (!ritz_preset_name.empty()) {
        spec = ritz_preset(ritz_preset_name, ritz_seed, ritz_out);
      } else {
        spec.matrix = ritz_matrix;
        spec.shifts = parse_shift_list(ritz_shifts);
        spec.m = ritz_m;
        spec.cycles = ritz_cycles;
        spec.target = Scalar(ritz_target, 0.0);
        spec.count = ritz_count;
        spec.seed = ritz_seed;
        spec.out = ritz_out;
      }
      const RitzDump dump = dump_ritz(spec);
      std::printf("wrote %s (%zu rows)\n", spec.out.c_str(),
                  dump.rows.size());
      return 0;
    }
    if (table->parsed()) {
      const TableResult result = run_table(which, table_seed, table_out);
      std::printf("wrote %s (%zu rows)\n", table_out.c_str(),
                  result.rows.size());
      return 0;
    }
  } catch (const InvalidInputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const Error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return 0;
}
