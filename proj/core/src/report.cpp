#include "kshift/report.hpp"

#include "kshift/types.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace kshift {

void ConvergenceReport::append(const ConvergenceReport& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  warnings.insert(warnings.end(), other.warnings.begin(),
                  other.warnings.end());
}

long ConvergenceReport::matvecs_to_reach(int rhs, int shift,
                                         double rtol) const {
  for (const auto& row : rows) {
    if (row.rhs_index == rhs && row.shift_index == shift &&
        row.corrected == 0 && row.relative_residual <= rtol) {
      return row.matvec;
    }
  }
  return -1;
}

double ConvergenceReport::final_residual(int rhs, int shift,
                                         int corrected) const {
  double last = std::numeric_limits<double>::quiet_NaN();
  for (const auto& row : rows) {
    if (row.rhs_index == rhs && row.shift_index == shift &&
        row.corrected == corrected) {
      last = row.relative_residual;
    }
  }
  return last;
}

void ConvergenceReport::write_csv(std::ostream& out) const {
  out << "rhs_index,shift_index,matvec,relative_residual,corrected\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", row.relative_residual);
    out << row.rhs_index << ',' << row.shift_index << ',' << row.matvec << ','
        << buf << ',' << row.corrected << '\n';
  }
}

void ConvergenceReport::write_csv_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw InvalidInputError("cannot write " + path);
  }
  write_csv(out);
}

ConvergenceReport ConvergenceReport::read_csv(std::istream& in) {
  ConvergenceReport report;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) {
      continue;  // header
    }
    std::istringstream ss(line);
    ReportRow row;
    char comma;
    if (!(ss >> row.rhs_index >> comma >> row.shift_index >> comma >>
          row.matvec >> comma >> row.relative_residual >> comma >>
          row.corrected)) {
      throw ParseError("csv line " + std::to_string(lineno) +
                       ": malformed row");
    }
    report.rows.push_back(row);
  }
  return report;
}

ConvergenceReport ConvergenceReport::read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError("cannot read " + path);
  }
  return read_csv(in);
}

}  // namespace kshift
