#include "kshift/harness.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace kshift;

TEST_SUITE_BEGIN("harness");

TEST_CASE("experiment spec round-trips through its text form") {
  ExperimentSpec spec;
  spec.matrix = "builtin:bidiag:500";
  spec.shifts = {Scalar(0.0), Scalar(-0.4), Scalar(1.0, -2.0)};
  spec.nrhs = 4;
  spec.rhs_kind = "related:1e-4";
  spec.seed = 99;
  spec.first_variant = Variant::Fom;
  spec.first_m = 30;
  spec.first_k = 8;
  spec.first_rtol = 1e-9;
  spec.extra_rtol = 1e-4;
  spec.sub_m = 12;
  spec.sub_k = 6;
  spec.sub_rtol = 1e-7;
  spec.correct = false;
  spec.related_project = true;
  spec.trace_explicit = true;
  spec.parallel_rhs = false;
  spec.max_matvecs = 12345;
  spec.out = "some/path.csv";

  std::stringstream ss;
  spec.serialize(ss);
  const ExperimentSpec back = ExperimentSpec::parse(ss);
  std::stringstream ss2;
  back.serialize(ss2);
  std::stringstream ss3;
  spec.serialize(ss3);
  CHECK(ss2.str() == ss3.str());
  CHECK(back.shifts.size() == 3);
  CHECK(back.shifts[2] == Scalar(1.0, -2.0));
  CHECK(back.first_variant == Variant::Fom);
}

TEST_CASE("spec parser flags bad lines") {
  std::stringstream ss("matrix=builtin:bidiag:100\nnot a key value pair\n");
  CHECK_THROWS_WITH_AS((void)ExperimentSpec::parse(ss),
                       doctest::Contains("line 2"), ParseError);
  std::stringstream ss2("unknown_key=3\n");
  CHECK_THROWS_AS((void)ExperimentSpec::parse(ss2), ParseError);
}

TEST_CASE("validation rejects an empty shift list before any solve") {
  ExperimentSpec spec;
  spec.shifts.clear();
  CHECK_THROWS_AS((void)run_experiment(spec), InvalidInputError);
}

TEST_CASE("matrix sources") {
  CHECK(make_matrix("builtin:bidiag:64").n == 64);
  CHECK(make_matrix("builtin:planted:128", 3).n == 128);
  CHECK_THROWS_AS((void)make_matrix("builtin:unknown:10"),
                  InvalidInputError);
  CHECK_THROWS_AS((void)make_matrix("garbage"), InvalidInputError);
}

TEST_CASE("shift list parsing") {
  auto shifts = parse_shift_list("0,-0.4,-2");
  REQUIRE(shifts.size() == 3);
  CHECK(shifts[1] == Scalar(-0.4));
  auto complex_shifts = parse_shift_list("1.5+0.5i,-2-1i");
  REQUIRE(complex_shifts.size() == 2);
  CHECK(complex_shifts[0] == Scalar(1.5, 0.5));
  CHECK(complex_shifts[1] == Scalar(-2.0, -1.0));
  CHECK(parse_shift_list(format_shift_list(complex_shifts)) ==
        complex_shifts);
}

TEST_CASE("single-rhs experiment runs and writes a parseable csv") {
  ExperimentSpec spec;
  spec.matrix = "builtin:bidiag:200";
  spec.shifts = {Scalar(0.0), Scalar(-1.0)};
  spec.nrhs = 1;
  spec.first_m = 15;
  spec.first_k = 5;
  spec.first_rtol = 1e-8;
  spec.max_matvecs = 4000;
  spec.out = "harness_single_test.csv";
  const ExperimentResult res = run_experiment(spec);
  CHECK(res.all_converged);
  REQUIRE(res.files.size() == 1);
  const ConvergenceReport parsed =
      ConvergenceReport::read_csv_file(res.files[0]);
  REQUIRE(parsed.rows.size() == res.report.rows.size());
  for (std::size_t t = 0; t < parsed.rows.size(); ++t) {
    CHECK(parsed.rows[t].relative_residual ==
          res.report.rows[t].relative_residual);  // bit-exact round trip
    CHECK(parsed.rows[t].matvec == res.report.rows[t].matvec);
  }
  std::remove(spec.out.c_str());
}

TEST_CASE("multi-rhs experiment covers the extra system and correction") {
  ExperimentSpec spec;
  spec.matrix = "builtin:bidiag:300";
  spec.shifts = {Scalar(0.0), Scalar(-2.0)};
  spec.nrhs = 3;
  spec.first_m = 20;
  spec.first_k = 8;
  spec.first_rtol = 1e-8;
  spec.extra_rtol = 1e-4;
  spec.sub_m = 12;
  spec.sub_k = 8;
  spec.sub_rtol = 1e-8;
  spec.max_matvecs = 10000;
  const ExperimentResult res = run_experiment(spec);
  CHECK(res.all_converged);
  CHECK(res.matvecs_for_rhs(0) > 0);  // extra rhs was solved
  CHECK(res.matvecs_for_rhs(2) > 0);
  CHECK(res.matvecs_for_rhs(3) > 0);
  // corrected rows exist for the non-base shift of rhs 2 and 3
  CHECK(res.report.final_residual(2, 2, 1) <= 1e-7);
  CHECK(res.report.final_residual(3, 2, 1) <= 1e-7);
}

TEST_CASE("parallel rhs solves match the sequential ordering") {
  ExperimentSpec spec;
  spec.matrix = "builtin:bidiag:200";
  spec.shifts = {Scalar(0.0), Scalar(-1.0)};
  spec.nrhs = 4;
  spec.first_m = 15;
  spec.first_k = 5;
  spec.first_rtol = 1e-8;
  spec.extra_rtol = 1e-4;
  spec.sub_m = 10;
  spec.sub_k = 5;
  spec.sub_rtol = 1e-8;
  spec.max_matvecs = 8000;
  const ExperimentResult seq = run_experiment(spec);
  spec.parallel_rhs = true;
  const ExperimentResult par = run_experiment(spec);
  REQUIRE(seq.report.rows.size() == par.report.rows.size());
  for (std::size_t t = 0; t < seq.report.rows.size(); ++t) {
    CHECK(seq.report.rows[t].rhs_index == par.report.rows[t].rhs_index);
    CHECK(seq.report.rows[t].relative_residual ==
          par.report.rows[t].relative_residual);
  }
}

TEST_CASE("identical spec and seed give bit-identical csv output") {
  ExperimentSpec spec;
  spec.matrix = "builtin:bidiag:300";
  spec.shifts = {Scalar(0.0), Scalar(-2.0)};
  spec.nrhs = 2;
  spec.first_m = 20;
  spec.first_k = 8;
  spec.first_rtol = 1e-8;
  spec.extra_rtol = 1e-3;
  spec.sub_m = 12;
  spec.sub_k = 8;
  spec.sub_rtol = 1e-8;
  spec.max_matvecs = 10000;
  spec.seed = 7;
  spec.out = "harness_repro_a.csv";
  run_experiment(spec);
  spec.out = "harness_repro_b.csv";
  run_experiment(spec);
  std::ifstream a("harness_repro_a.csv"), b("harness_repro_b.csv");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().size() > 100);
  std::remove("harness_repro_a.csv");
  std::remove("harness_repro_b.csv");
}

TEST_CASE("example1 preset produces both solver traces") {
  auto specs = experiment_preset("example1", 1, "harness_ex1");
  REQUIRE(specs.size() == 2);
  const ExperimentResult dr = run_experiment(specs[0]);
  const ExperimentResult plain = run_experiment(specs[1]);
  CHECK(dr.all_converged);
  // three shifts traced in each file
  for (int shift = 1; shift <= 3; ++shift) {
    CHECK(dr.report.matvecs_to_reach(1, shift, 1e-10) > 0);
  }
  CHECK(plain.report.final_residual(1, 1, 0) >
        dr.report.final_residual(1, 1, 0) * 0.0);  // rows exist
  std::remove("harness_ex1_gmres_dr_sh.csv");
  std::remove("harness_ex1_gmres_sh.csv");
  CHECK_THROWS_AS((void)experiment_preset("nonexistent"), InvalidInputError);
}

TEST_CASE("ritz dump on a fully captured matrix returns the spectrum") {
  RitzSpec spec;
  spec.matrix = "builtin:bidiag:10";
  spec.shifts = {Scalar(0.0)};
  spec.m = 10;
  spec.cycles = 1;
  spec.target = Scalar(0.0);
  spec.count = 10;
  spec.seed = 2;
  const RitzDump dump = dump_ritz(spec);
  // both kinds present, each matching an eigenvalue of the matrix
  int n_h = 0;
  int n_r = 0;
  for (const auto& row : dump.rows) {
    double best = 1e9;
    for (Index i = 0; i < 10; ++i) {
      const double ev = (i == 0) ? 0.1 : static_cast<double>(i);
      best = std::min(best, std::abs(Scalar(row.re, row.im) - Scalar(ev)));
    }
    CHECK(best <= 1e-8);
    (row.kind == "harmonic" ? n_h : n_r) += 1;
  }
  CHECK(n_h == 10);
  CHECK(n_r == 10);
}

TEST_CASE("ritz csv round trip") {
  RitzSpec spec;
  spec.matrix = "builtin:bidiag:50";
  spec.shifts = {Scalar(0.4)};
  spec.m = 8;
  spec.cycles = 3;
  spec.target = Scalar(0.4);
  spec.count = 4;
  spec.seed = 3;
  spec.out = "harness_ritz_test.csv";
  const RitzDump dump = dump_ritz(spec);
  std::ifstream in(spec.out);
  REQUIRE(in.good());
  const RitzDump parsed = RitzDump::read_csv(in);
  REQUIRE(parsed.rows.size() == dump.rows.size());
  for (std::size_t t = 0; t < parsed.rows.size(); ++t) {
    CHECK(parsed.rows[t].cycle == dump.rows[t].cycle);
    CHECK(parsed.rows[t].kind == dump.rows[t].kind);
    CHECK(parsed.rows[t].re == dump.rows[t].re);  // bit-exact
    CHECK(parsed.rows[t].im == dump.rows[t].im);
  }
  std::remove(spec.out.c_str());
}

TEST_CASE("degenerate table sweep emits a single row") {
  const TableResult table = run_table("table4_1:single", 1);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0][0] == 10.0);  // k column
  REQUIRE(table.header.size() == table.rows[0].size());
  CHECK_THROWS_AS((void)run_table("tableX"), InvalidInputError);
}

TEST_CASE("ritz presets carry the documented geometries") {
  const RitzSpec ex2 = ritz_preset("example2");
  CHECK(ex2.m == 40);
  CHECK(ex2.cycles == 50);
  CHECK(ex2.shifts[0] == Scalar(0.4));
  const RitzSpec ex3 = ritz_preset("example3");
  CHECK(ex3.m == 80);
  CHECK(ex3.target == Scalar(1.4));
  CHECK_THROWS_AS((void)ritz_preset("exampleX"), InvalidInputError);
}

TEST_SUITE_END();
