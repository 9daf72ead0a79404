#include "kshift/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

namespace kshift {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) {
    return "";
  }
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

Scalar parse_scalar(const std::string& text) {
  // Accepts "<re>" or "<re>+<im>i" / "<re>-<im>i".
  const std::string t = trim(text);
  std::size_t pos = 0;
  const double re = std::stod(t, &pos);
  if (pos >= t.size()) {
    return Scalar(re, 0.0);
  }
  std::string rest = t.substr(pos);
  if (rest.back() != 'i' && rest.back() != 'I') {
    throw ParseError("bad scalar '" + text + "'");
  }
  rest.pop_back();
  const double im = std::stod(rest);
  return Scalar(re, im);
}

std::string format_scalar(Scalar s) {
  char buf[80];
  if (s.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", s.real());
    return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", s.real(), s.imag());
  return buf;
}

double abs_residual(const LinearOperator& op, const Vector& b, Scalar sigma,
                    const Vector& x) {
  return (b - apply_shifted(op, sigma, x)).norm();
}

}  // namespace

std::vector<Scalar> parse_shift_list(const std::string& text) {
  std::vector<Scalar> shifts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) {
      shifts.push_back(parse_scalar(item));
    }
  }
  return shifts;
}

std::string format_shift_list(const std::vector<Scalar>& shifts) {
  std::string out;
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    if (i) {
      out += ",";
    }
    out += format_scalar(shifts[i]);
  }
  return out;
}

void ExperimentSpec::validate() const {
  if (shifts.empty()) {
    throw InvalidInputError("experiment: shift list is empty");
  }
  if (nrhs < 1) {
    throw InvalidInputError("experiment: nrhs must be positive");
  }
  if (first_m < 1 || first_k < 0 || first_k >= first_m) {
    throw InvalidInputError("experiment: need 0 <= first_k < first_m");
  }
  if (sub_m < 1) {
    throw InvalidInputError("experiment: sub_m must be positive");
  }
  if (!(first_rtol > 0.0) || !(sub_rtol > 0.0) || !(extra_rtol > 0.0)) {
    throw InvalidInputError("experiment: tolerances must be positive");
  }
  if (max_matvecs < 0) {
    throw InvalidInputError("experiment: max_matvecs must be nonnegative");
  }
  if (matrix.rfind("builtin:", 0) != 0 && matrix.rfind("mm:", 0) != 0) {
    throw InvalidInputError("experiment: unknown matrix source '" + matrix +
                            "'");
  }
}

void ExperimentSpec::serialize(std::ostream& os) const {
  os << "matrix=" << matrix << "\n";
  os << "shifts=" << format_shift_list(shifts) << "\n";
  os << "nrhs=" << nrhs << "\n";
  os << "rhs_kind=" << rhs_kind << "\n";
  os << "seed=" << seed << "\n";
  os << "first_variant=" << (first_variant == Variant::Gmres ? "gmres" : "fom")
     << "\n";
  os << "first_m=" << first_m << "\n";
  os << "first_k=" << first_k << "\n";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", first_rtol);
  os << "first_rtol=" << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", extra_rtol);
  os << "extra_rtol=" << buf << "\n";
  os << "sub_m=" << sub_m << "\n";
  os << "sub_k=" << sub_k << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", sub_rtol);
  os << "sub_rtol=" << buf << "\n";
  os << "correct=" << (correct ? 1 : 0) << "\n";
  os << "related_project=" << (related_project ? 1 : 0) << "\n";
  os << "trace_explicit=" << (trace_explicit ? 1 : 0) << "\n";
  os << "parallel_rhs=" << (parallel_rhs ? 1 : 0) << "\n";
  os << "max_matvecs=" << max_matvecs << "\n";
  os << "out=" << out << "\n";
}

ExperimentSpec ExperimentSpec::parse(std::istream& is) {
  ExperimentSpec spec;
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') {
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError("spec line " + std::to_string(lineno) +
                       ": expected key=value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    try {
      if (key == "matrix") {
        spec.matrix = val;
      } else if (key == "shifts") {
        spec.shifts = parse_shift_list(val);
      } else if (key == "nrhs") {
        spec.nrhs = std::stol(val);
      } else if (key == "rhs_kind") {
        spec.rhs_kind = val;
      } else if (key == "seed") {
        spec.seed = std::stoull(val);
      } else if (key == "first_variant") {
        if (val != "gmres" && val != "fom") {
          throw ParseError("variant must be gmres or fom");
        }
        spec.first_variant = (val == "fom") ? Variant::Fom : Variant::Gmres;
      } else if (key == "first_m") {
        spec.first_m = std::stol(val);
      } else if (key == "first_k") {
        spec.first_k = std::stol(val);
      } else if (key == "first_rtol") {
        spec.first_rtol = std::stod(val);
      } else if (key == "extra_rtol") {
        spec.extra_rtol = std::stod(val);
      } else if (key == "sub_m") {
        spec.sub_m = std::stol(val);
      } else if (key == "sub_k") {
        spec.sub_k = std::stol(val);
      } else if (key == "sub_rtol") {
        spec.sub_rtol = std::stod(val);
      } else if (key == "correct") {
        spec.correct = std::stoi(val) != 0;
      } else if (key == "related_project") {
        spec.related_project = std::stoi(val) != 0;
      } else if (key == "trace_explicit") {
        spec.trace_explicit = std::stoi(val) != 0;
      } else if (key == "parallel_rhs") {
        spec.parallel_rhs = std::stoi(val) != 0;
      } else if (key == "max_matvecs") {
        spec.max_matvecs = std::stol(val);
      } else if (key == "out") {
        spec.out = val;
      } else {
        throw ParseError("unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError("spec line " + std::to_string(lineno) + ": " +
                       e.what());
    }
  }
  return spec;
}

ExperimentSpec ExperimentSpec::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError("cannot open spec file: " + path);
  }
  return parse(in);
}

LinearOperator make_matrix(const std::string& source, std::uint64_t seed) {
  if (source.rfind("mm:", 0) == 0) {
    return load_matrix_market(source.substr(3));
  }
  if (source.rfind("builtin:", 0) == 0) {
    const std::string rest = source.substr(8);
    const auto colon = rest.find(':');
    const std::string name = rest.substr(0, colon);
    const Index n = (colon == std::string::npos)
                        ? 1000
                        : std::stol(rest.substr(colon + 1));
    if (name == "bidiag") {
      return bidiagonal_operator(n);
    }
    if (name == "planted") {
      return planted_spectrum_operator(n, 10, seed);
    }
  }
  throw InvalidInputError("unknown matrix source '" + source + "'");
}

long ExperimentResult::matvecs_for_rhs(int rhs_index) const {
  for (const auto& s : per_rhs) {
    if (s.rhs_index == rhs_index) {
      return s.matvecs;
    }
  }
  return -1;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const LinearOperator op = make_matrix(spec.matrix, spec.seed);
  const ShiftSet shifts{spec.shifts};
  const RhsFamily family =
      make_rhs_family(op.n, spec.nrhs, spec.rhs_kind, spec.seed, op.field);
  const Index ns = shifts.count();

  ExperimentResult result;

  SolverConfig cfg1;
  cfg1.m = spec.first_m;
  cfg1.k = spec.first_k;
  cfg1.rtol = spec.first_rtol;
  cfg1.max_matvecs = spec.max_matvecs;
  cfg1.variant = spec.first_variant;

  SolveFamilyResult first =
      solve_shifted_family(op, family.vectors[0], shifts, cfg1, {}, 1);
  result.report.append(first.report);
  result.all_converged = first.all_converged;
  result.total_matvecs = first.matvecs;
  result.deflation = first.deflation;
  result.deflation_diagnostics = first.deflation_diagnostics;
  {
    RhsSummary s;
    s.rhs_index = 1;
    s.matvecs = first.matvecs;
    s.converged = first.all_converged;
    for (Index i = 0; i < ns; ++i) {
      s.final_relres.push_back(result.report.final_residual(1, i + 1, 0));
    }
    result.per_rhs.push_back(std::move(s));
  }

  if (spec.nrhs < 2) {
    if (!spec.out.empty()) {
      result.report.write_csv_file(spec.out);
      result.files.push_back(spec.out);
    }
    return result;
  }

  const Index kp = (spec.sub_k < 0) ? spec.first_k
                                    : std::min<Index>(spec.sub_k,
                                                      result.deflation.k());
  ProjConfig pcfg;
  pcfg.m = spec.sub_m;
  pcfg.k = kp;
  pcfg.rtol = spec.sub_rtol;
  pcfg.max_matvecs = spec.max_matvecs;

  ExtraRhsSolutions extra;
  if (spec.correct && kp > 0 && !result.deflation.empty()) {
    extra = solve_extra_rhs(op, shifts, result.deflation, spec.extra_rtol,
                            pcfg, &result.report);
    result.total_matvecs += extra.matvecs;
    RhsSummary s;
    s.rhs_index = 0;
    s.matvecs = extra.matvecs;
    s.converged = true;
    for (double lvl : extra.residual_level) {
      s.final_relres.push_back(lvl);
    }
    result.per_rhs.push_back(std::move(s));
  }

  auto summarize = [&](int j, const SolveFamilyResult& rj) {
    RhsSummary s;
    s.rhs_index = j;
    s.matvecs = rj.matvecs;
    s.converged = rj.all_converged;
    for (Index i = 0; i < ns; ++i) {
      s.final_relres.push_back(result.report.final_residual(j, i + 1, 0));
      s.corrected_relres.push_back(result.report.final_residual(j, i + 1, 1));
    }
    result.per_rhs.push_back(std::move(s));
    result.total_matvecs += rj.matvecs;
    result.all_converged = result.all_converged && rj.all_converged;
  };

  ProjSolveOptions base_opts;
  base_opts.correct = spec.correct && kp > 0 && !extra.empty();
  base_opts.trace_explicit = spec.trace_explicit;

  if (spec.related_project) {
    // Sequential: each projection needs all previous solutions.
    Matrix B(op.n, spec.nrhs);
    std::vector<Matrix> X(ns, Matrix(op.n, spec.nrhs));
    B.col(0) = family.vectors[0];
    for (Index i = 0; i < ns; ++i) {
      X[i].col(0) = first.solutions[i];
    }
    Index stored = 1;
    for (Index j = 2; j <= spec.nrhs; ++j) {
      const Vector& bj = family.vectors[j - 1];
      std::vector<Matrix> xs;
      xs.reserve(ns);
      for (Index i = 0; i < ns; ++i) {
        xs.push_back(X[i].leftCols(stored));
      }
      RelatedProjection proj =
          related_rhs_project(xs, B.leftCols(stored), bj);
      for (const auto& w : proj.warnings) {
        result.report.warnings.push_back(w);
      }
      ShiftFamilyState warm = warm_state_from(proj);
      ProjSolveOptions opts = base_opts;
      opts.rhs_index = static_cast<int>(j);
      SolveFamilyResult rj = gmres_proj_sh(op, bj, shifts, result.deflation,
                                           extra, pcfg, opts, {}, &warm);
      result.report.append(rj.report);
      summarize(static_cast<int>(j), rj);
      B.col(stored) = bj;
      for (Index i = 0; i < ns; ++i) {
        X[i].col(stored) = rj.solutions[i];
      }
      ++stored;
    }
  } else {
    auto solve_one = [&](Index j) {
      ProjSolveOptions opts = base_opts;
      opts.rhs_index = static_cast<int>(j);
      return gmres_proj_sh(op, family.vectors[j - 1], shifts,
                           result.deflation, extra, pcfg, opts);
    };
    if (spec.parallel_rhs) {
      std::vector<std::future<SolveFamilyResult>> jobs;
      for (Index j = 2; j <= spec.nrhs; ++j) {
        jobs.push_back(
            std::async(std::launch::async, [&, j] { return solve_one(j); }));
      }
      for (Index j = 2; j <= spec.nrhs; ++j) {
        SolveFamilyResult rj = jobs[j - 2].get();
        result.report.append(rj.report);
        summarize(static_cast<int>(j), rj);
      }
    } else {
      for (Index j = 2; j <= spec.nrhs; ++j) {
        SolveFamilyResult rj = solve_one(j);
        result.report.append(rj.report);
        summarize(static_cast<int>(j), rj);
      }
    }
  }

  if (!spec.out.empty()) {
    result.report.write_csv_file(spec.out);
    result.files.push_back(spec.out);
  }
  return result;
}

void RitzDump::write_csv(std::ostream& os) const {
  os << "cycle,kind,re,im\n";
  char buf[96];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%ld,%s,%.17g,%.17g",
                  static_cast<long>(row.cycle), row.kind.c_str(), row.re,
                  row.im);
    os << buf << '\n';
  }
}

void RitzDump::write_csv_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw InvalidInputError("cannot write " + path);
  }
  write_csv(out);
}

RitzDump RitzDump::read_csv(std::istream& is) {
  RitzDump dump;
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (lineno == 1 || trim(line).empty()) {
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    RitzRow row;
    if (!std::getline(ss, cell, ',')) {
      throw ParseError("ritz csv line " + std::to_string(lineno));
    }
    row.cycle = std::stol(cell);
    if (!std::getline(ss, row.kind, ',')) {
      throw ParseError("ritz csv line " + std::to_string(lineno));
    }
    if (!std::getline(ss, cell, ',')) {
      throw ParseError("ritz csv line " + std::to_string(lineno));
    }
    row.re = std::stod(cell);
    if (!std::getline(ss, cell, ',')) {
      throw ParseError("ritz csv line " + std::to_string(lineno));
    }
    row.im = std::stod(cell);
    dump.rows.push_back(std::move(row));
  }
  return dump;
}

double RitzDump::min_distance(const std::string& kind, Scalar target) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    if (row.kind == kind) {
      best = std::min(best, std::abs(Scalar(row.re, row.im) - target));
    }
  }
  return best;
}

RitzDump dump_ritz(const RitzSpec& spec) {
  if (spec.shifts.empty()) {
    throw InvalidInputError("dump_ritz: shift list is empty");
  }
  if (spec.m < 2 || spec.cycles < 1 || spec.count < 1) {
    throw InvalidInputError("dump_ritz: need m >= 2, cycles >= 1, count >= 1");
  }
  const LinearOperator op = make_matrix(spec.matrix, spec.seed);
  const ShiftSet shifts{spec.shifts};
  const Scalar sigma1 = shifts.base();
  const Vector b = random_rhs(op.n, spec.seed, op.field);

  RitzDump dump;
  auto take_nearest = [&](std::vector<Scalar> values, Index cycle,
                          const std::string& kind) {
    std::stable_sort(values.begin(), values.end(), [&](Scalar a, Scalar b2) {
      return std::abs(a - spec.target) < std::abs(b2 - spec.target);
    });
    const Index n_take = std::min<Index>(spec.count,
                                         static_cast<Index>(values.size()));
    for (Index i = 0; i < n_take; ++i) {
      dump.rows.push_back({cycle, kind, values[i].real(), values[i].imag()});
    }
  };

  SolverConfig cfg;
  cfg.m = spec.m;
  cfg.k = 0;
  // Stop at the numerical floor: cycles past it restart from roundoff
  // noise and their pair values say nothing about the solve.
  cfg.rtol = 1e-12;
  cfg.max_matvecs = spec.m * spec.cycles;

  // Regular Ritz values from the FOM-Sh run; already in A's coordinates.
  cfg.variant = Variant::Fom;
  solve_shifted_family(op, b, shifts, cfg, [&](const CycleInfo& info) {
    take_nearest(ritz_values(*info.fact), info.cycle, "ritz");
  });

  // Harmonic Ritz values of the base-shifted problem from the GMRES-Sh
  // run, translated back by sigma_1.
  cfg.variant = Variant::Gmres;
  solve_shifted_family(op, b, shifts, cfg, [&](const CycleInfo& info) {
    if (info.fact->size < 2) {
      return;
    }
    HarmonicRitzSet set = harmonic_ritz(*info.fact, 1, sigma1);
    std::vector<Scalar> values;
    values.reserve(set.values.size());
    for (Scalar v : set.values) {
      values.push_back(v + sigma1);
    }
    take_nearest(std::move(values), info.cycle, "harmonic");
  });

  if (!spec.out.empty()) {
    dump.write_csv_file(spec.out);
  }
  return dump;
}

void TableResult::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    os << (i ? "," : "") << header[i];
  }
  os << '\n';
  char buf[48];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.6g", row[i]);
      os << (i ? "," : "") << buf;
    }
    os << '\n';
  }
}

void TableResult::write_csv_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw InvalidInputError("cannot write " + path);
  }
  write_csv(out);
}

namespace {

TableResult projection_accuracy_table(std::uint64_t seed,
                                      const std::vector<Index>& ks,
                                      const std::vector<double>& first_rtols) {
  const LinearOperator op = bidiagonal_operator(1000);
  const ShiftSet shifts{{Scalar(0.0), Scalar(-0.4), Scalar(-2.0)}};
  const RhsFamily family = make_rhs_family(op.n, 2, "random", seed, op.field);
  const long budget = 100000;

  TableResult table;
  table.header = {"k"};
  std::vector<std::vector<double>> cols;  // per accuracy: (eig, mvp, res) rows
  for (double rtol : first_rtols) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.0e", rtol);
    table.header.push_back(std::string("eig_res_first_") + buf);
    table.header.push_back(std::string("mvp_") + buf);
    table.header.push_back(std::string("lin_res_") + buf);
  }
  table.rows.assign(ks.size(), {});
  for (std::size_t r = 0; r < ks.size(); ++r) {
    table.rows[r].push_back(static_cast<double>(ks[r]));
  }

  for (double rtol : first_rtols) {
    SolverConfig cfg1;
    cfg1.m = 25;
    cfg1.k = 10;
    cfg1.rtol = rtol;
    cfg1.max_matvecs = budget;
    SolveFamilyResult first =
        solve_shifted_family(op, family.vectors[0], shifts, cfg1);

    for (std::size_t r = 0; r < ks.size(); ++r) {
      const Index kp = ks[r];
      ProjConfig pcfg;
      pcfg.m = 15;
      pcfg.k = kp;
      pcfg.rtol = 1e-10;
      pcfg.max_matvecs = budget;
      ProjSolveOptions opts;
      opts.correct = false;
      opts.rhs_index = 2;
      SolveFamilyResult rj =
          gmres_proj_sh(op, family.vectors[1], shifts, first.deflation,
                        ExtraRhsSolutions{}, pcfg, opts);
      double worst = 0.0;
      for (Index i = 1; i < shifts.count(); ++i) {
        worst = std::max(worst, abs_residual(op, family.vectors[1],
                                             shifts.shifts[i],
                                             rj.solutions[i]));
      }
      const auto& pr = first.deflation_diagnostics.pair_residuals;
      const double eig_res =
          (kp >= 1 && kp <= static_cast<Index>(pr.size()))
              ? pr[kp - 1]
              : std::numeric_limits<double>::quiet_NaN();
      table.rows[r].push_back(eig_res);
      table.rows[r].push_back(
          static_cast<double>(rj.report.matvecs_to_reach(2, 1, 1e-10)));
      table.rows[r].push_back(worst);
    }
  }
  return table;
}

TableResult extra_accuracy_table(std::uint64_t seed,
                                 const std::vector<double>& desired,
                                 const std::vector<double>& extra_rtols) {
  const LinearOperator op = bidiagonal_operator(1000);
  const ShiftSet shifts{{Scalar(0.0), Scalar(-2.0)}};
  const RhsFamily family = make_rhs_family(op.n, 2, "random", seed, op.field);
  const long budget = 100000;

  TableResult table;
  table.header = {"desired_rtol", "before_correction"};
  for (double e : extra_rtols) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "extra_%.0e", e);
    table.header.push_back(buf);
  }

  for (double rtol : desired) {
    SolverConfig cfg1;
    cfg1.m = 25;
    cfg1.k = 10;
    cfg1.rtol = rtol;
    cfg1.max_matvecs = budget;
    SolveFamilyResult first =
        solve_shifted_family(op, family.vectors[0], shifts, cfg1);

    ProjConfig pcfg;
    pcfg.m = 15;
    pcfg.k = 10;
    pcfg.rtol = rtol;
    pcfg.max_matvecs = budget;

    std::vector<double> row;
    row.push_back(rtol);
    {
      ProjSolveOptions opts;
      opts.correct = false;
      SolveFamilyResult rj =
          gmres_proj_sh(op, family.vectors[1], shifts, first.deflation,
                        ExtraRhsSolutions{}, pcfg, opts);
      row.push_back(abs_residual(op, family.vectors[1], shifts.shifts[1],
                                 rj.solutions[1]));
    }
    for (double e : extra_rtols) {
      ExtraRhsSolutions extra =
          solve_extra_rhs(op, shifts, first.deflation, e, pcfg);
      ProjSolveOptions opts;
      opts.correct = true;
      SolveFamilyResult rj = gmres_proj_sh(op, family.vectors[1], shifts,
                                           first.deflation, extra, pcfg, opts);
      row.push_back(abs_residual(op, family.vectors[1], shifts.shifts[1],
                                 rj.solutions[1]));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

TableResult run_table(const std::string& which, std::uint64_t seed,
                      const std::string& out) {
  TableResult table;
  if (which == "table4_1") {
    table = projection_accuracy_table(seed, {10, 8, 6, 4, 2}, {1e-10, 1e-14});
  } else if (which == "table4_2") {
    table = extra_accuracy_table(seed, {1e-6, 1e-8, 1e-10},
                                 {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1});
  } else if (which == "table4_1:single") {
    table = projection_accuracy_table(seed, {10}, {1e-10});
  } else {
    throw InvalidInputError("run_table: unknown table '" + which + "'");
  }
  if (!out.empty()) {
    table.write_csv_file(out);
  }
  return table;
}

std::vector<ExperimentSpec> experiment_preset(const std::string& name,
                                              std::uint64_t seed,
                                              const std::string& out_prefix) {
  auto with_out = [&](ExperimentSpec spec, const std::string& suffix) {
    spec.seed = seed;
    if (!out_prefix.empty()) {
      spec.out = out_prefix + suffix + ".csv";
    }
    return spec;
  };

  if (name == "example1") {
    ExperimentSpec dr;
    dr.matrix = "builtin:bidiag:1000";
    dr.shifts = {Scalar(0.0), Scalar(-0.4), Scalar(-2.0)};
    dr.nrhs = 1;
    dr.first_m = 25;
    dr.first_k = 10;
    dr.first_rtol = 1e-10;
    dr.max_matvecs = 20000;
    ExperimentSpec plain = dr;
    plain.first_k = 0;
    return {with_out(dr, "_gmres_dr_sh"), with_out(plain, "_gmres_sh")};
  }
  if (name == "example5") {
    ExperimentSpec spec;
    spec.matrix = "builtin:bidiag:1000";
    spec.shifts = {Scalar(0.0), Scalar(-2.0)};
    spec.nrhs = 2;
    spec.first_m = 25;
    spec.first_k = 10;
    spec.first_rtol = 1e-6;
    spec.extra_rtol = 1e-6;
    spec.sub_m = 15;
    spec.sub_k = 10;
    spec.sub_rtol = 1e-6;
    spec.trace_explicit = true;
    spec.max_matvecs = 20000;
    return {with_out(spec, "")};
  }
  if (name == "example7") {
    ExperimentSpec proj;
    proj.matrix = "builtin:planted:2000";
    proj.shifts = {Scalar(0.0), Scalar(-0.3), Scalar(-0.5)};
    proj.nrhs = 2;
    proj.first_m = 50;
    proj.first_k = 30;
    proj.first_rtol = 1e-8;
    proj.extra_rtol = 1e-7;
    proj.sub_m = 20;
    proj.sub_k = 30;
    proj.sub_rtol = 1e-7;
    proj.max_matvecs = 60000;
    ExperimentSpec plain = proj;
    plain.sub_k = 0;
    plain.correct = false;
    return {with_out(proj, "_proj"), with_out(plain, "_sh")};
  }
  if (name == "example8") {
    ExperimentSpec related;
    related.matrix = "builtin:bidiag:1000";
    related.shifts = {Scalar(0.0), Scalar(-2.0)};
    related.nrhs = 10;
    related.rhs_kind = "related:1e-4";
    related.first_m = 25;
    related.first_k = 10;
    related.first_rtol = 1e-6;
    related.extra_rtol = 1e-3;
    related.sub_m = 15;
    related.sub_k = 10;
    related.sub_rtol = 1e-6;
    related.related_project = true;
    related.max_matvecs = 20000;
    ExperimentSpec plain = related;
    plain.related_project = false;
    return {with_out(related, "_related"), with_out(plain, "_plain")};
  }
  throw InvalidInputError("unknown experiment preset '" + name + "'");
}

RitzSpec ritz_preset(const std::string& name, std::uint64_t seed,
                     const std::string& out) {
  RitzSpec spec;
  spec.seed = seed;
  spec.out = out;
  if (name == "example2") {
    spec.matrix = "builtin:bidiag:1000";
    spec.shifts = {Scalar(0.4), Scalar(0.0)};
    spec.m = 40;
    spec.cycles = 50;
    spec.target = Scalar(0.4);
    spec.count = 10;
    return spec;
  }
  if (name == "example3") {
    spec.matrix = "builtin:bidiag:1000";
    spec.shifts = {Scalar(0.0), Scalar(1.4)};
    spec.m = 80;
    spec.cycles = 25;
    spec.target = Scalar(1.4);
    spec.count = 10;
    return spec;
  }
  throw InvalidInputError("unknown ritz preset '" + name + "'");
}

}  // namespace kshift
