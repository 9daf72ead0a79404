/// \file harness.hpp
/// Experiment runner: spec parsing, builtin matrices, the multi-phase
/// solve pipeline (first rhs -> extra rhs -> subsequent rhs), Ritz value
/// dumps, and the accuracy-sweep tables.

#ifndef KSHIFT_HARNESS_HPP
#define KSHIFT_HARNESS_HPP

#include "kshift/multi_rhs.hpp"
#include "kshift/operators.hpp"
#include "kshift/report.hpp"
#include "kshift/shifted_solvers.hpp"
#include "kshift/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kshift {

/// Flat key=value experiment description; every field has a CLI flag
/// counterpart. Matrix sources: builtin:bidiag:<n>, builtin:planted:<n>,
/// mm:<path>.
struct ExperimentSpec {
  std::string matrix = "builtin:bidiag:1000";
  std::vector<Scalar> shifts;      // base first
  Index nrhs = 1;
  std::string rhs_kind = "random";  // random | related:<eps>
  std::uint64_t seed = 1;

  Variant first_variant = Variant::Gmres;
  Index first_m = 25;
  Index first_k = 10;
  double first_rtol = 1e-10;

  double extra_rtol = 1e-3;

  Index sub_m = 15;
  Index sub_k = -1;  // projection count; -1 = first_k
  double sub_rtol = 1e-10;

  bool correct = true;
  bool related_project = false;
  bool trace_explicit = false;
  bool parallel_rhs = false;
  long max_matvecs = 100000;
  std::string out;  // CSV path; empty writes nothing

  void validate() const;
  void serialize(std::ostream& os) const;
  static ExperimentSpec parse(std::istream& is);
  static ExperimentSpec parse_file(const std::string& path);
};

struct RhsSummary {
  int rhs_index = 0;
  long matvecs = 0;
  bool converged = false;
  std::vector<double> final_relres;            // per shift, uncorrected
  std::vector<double> corrected_relres;        // per shift (non-base), or empty
};

struct ExperimentResult {
  ConvergenceReport report;
  bool all_converged = true;
  long total_matvecs = 0;
  std::vector<RhsSummary> per_rhs;  // index 0 = first rhs, then extra (rhs 0
                                    // tagged -0-), then rhs 2..nrhs
  DeflationSpace deflation;
  DeflationDiagnostics deflation_diagnostics;
  std::vector<std::string> files;

  long matvecs_for_rhs(int rhs_index) const;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Resolve a matrix source string. Seed feeds builtin random content.
LinearOperator make_matrix(const std::string& source, std::uint64_t seed = 1);
std::vector<Scalar> parse_shift_list(const std::string& text);
std::string format_shift_list(const std::vector<Scalar>& shifts);

/// Ritz diagnostics: run `cycles` restarted cycles of GMRES-Sh (harmonic
/// pairs) and FOM-Sh (regular pairs) on the base shift, dumping the
/// `count` values nearest `target` per cycle, translated to the
/// coordinates of A's spectrum.
struct RitzSpec {
  std::string matrix = "builtin:bidiag:1000";
  std::vector<Scalar> shifts;  // base drives the subspace
  Index m = 40;
  Index cycles = 50;
  Scalar target = Scalar(0.0);
  Index count = 10;
  std::uint64_t seed = 1;
  std::string out;
};

struct RitzRow {
  Index cycle = 0;
  std::string kind;  // "ritz" | "harmonic"
  double re = 0.0;
  double im = 0.0;
};

struct RitzDump {
  std::vector<RitzRow> rows;
  void write_csv(std::ostream& os) const;
  void write_csv_file(const std::string& path) const;
  static RitzDump read_csv(std::istream& is);
  /// Smallest |value - target| over rows of one kind.
  double min_distance(const std::string& kind, Scalar target) const;
};

RitzDump dump_ritz(const RitzSpec& spec);

/// Accuracy sweep tables. "table4_1" varies the projection count against
/// two first-solve accuracies; "table4_2" varies the extra-rhs tolerance
/// against three family tolerances.
struct TableResult {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  void write_csv(std::ostream& os) const;
  void write_csv_file(const std::string& path) const;
};

TableResult run_table(const std::string& which, std::uint64_t seed = 1,
                      const std::string& out = "");

/// Builtin experiment presets; names: example1, example5, example7,
/// example8. Presets mapping to a comparison return two specs whose `out`
/// fields carry distinct suffixes.
std::vector<ExperimentSpec> experiment_preset(const std::string& name,
                                              std::uint64_t seed = 1,
                                              const std::string& out_prefix =
                                                  "");

/// Ritz presets: example2 (m=40, 50 cycles, base 0.4), example3 (m=80,
/// 25 cycles, base 0, target 1.4).
RitzSpec ritz_preset(const std::string& name, std::uint64_t seed = 1,
                     const std::string& out = "");

}  // namespace kshift

#endif
