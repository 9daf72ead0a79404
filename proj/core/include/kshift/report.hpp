/// \file report.hpp
/// Per-(rhs, shift) residual traces keyed by cumulative matrix-vector
/// products, with CSV export/import.
///
/// CSV schema: rhs_index,shift_index,matvec,relative_residual,corrected
/// The extra right-hand side (when present) is reported as rhs_index 0.

#ifndef KSHIFT_REPORT_HPP
#define KSHIFT_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace kshift {

struct ReportRow {
  int rhs_index = 1;
  int shift_index = 1;  // 1-based; 1 is the base shift
  long matvec = 0;
  double relative_residual = 0.0;
  int corrected = 0;
};

struct ConvergenceReport {
  std::vector<ReportRow> rows;
  std::vector<std::string> warnings;

  void add(int rhs, int shift, long matvec, double relres, int corrected = 0) {
    rows.push_back({rhs, shift, matvec, relres, corrected});
  }
  void append(const ConvergenceReport& other);

  /// First matvec count at which (rhs, shift) reached relres <= rtol among
  /// corrected == 0 rows; -1 if never.
  long matvecs_to_reach(int rhs, int shift, double rtol) const;

  /// Last recorded relative residual for (rhs, shift) with the given
  /// corrected flag; NaN if absent.
  double final_residual(int rhs, int shift, int corrected = 0) const;

  void write_csv(std::ostream& out) const;
  void write_csv_file(const std::string& path) const;
  static ConvergenceReport read_csv(std::istream& in);
  static ConvergenceReport read_csv_file(const std::string& path);
};

}  // namespace kshift

#endif
