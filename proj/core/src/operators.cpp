#include "kshift/operators.hpp"

#include "kshift/rng.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace kshift {

Vector apply_shifted(const LinearOperator& op, Scalar sigma, const Vector& v) {
  Vector out = op.apply(v);
  if (sigma != Scalar(0.0)) {
    out.noalias() -= sigma * v;
  }
  return out;
}

LinearOperator bidiagonal_operator(Index n) {
  if (n < 2) {
    throw InvalidInputError("bidiagonal_operator: n must be at least 2");
  }
  LinearOperator op;
  op.n = n;
  op.field = Field::Real;
  op.apply_fn = [n](const Vector& v, Vector& out) {
    out(0) = 0.1 * v(0) + v(1);
    for (Index i = 1; i + 1 < n; ++i) {
      out(i) = static_cast<double>(i) * v(i) + v(i + 1);
    }
    out(n - 1) = static_cast<double>(n - 1) * v(n - 1);
  };
  return op;
}

Vector random_rhs(Index n, std::uint64_t seed, Field field) {
  if (n < 1) {
    throw InvalidInputError("random_rhs: n must be positive");
  }
  NormalSampler sampler(seed);
  Vector b(n);
  for (Index i = 0; i < n; ++i) {
    b(i) = sampler.next_in(field);
  }
  return b;
}

Vector related_rhs(const Vector& b1, double eps, std::uint64_t seed,
                   Field field) {
  if (eps == 0.0) {
    return b1;
  }
  NormalSampler sampler(seed);
  Vector b = b1;
  for (Index i = 0; i < b.size(); ++i) {
    b(i) += eps * sampler.next_in(field);
  }
  return b;
}

LinearOperator shifted_operator(LinearOperator op, Scalar sigma) {
  LinearOperator out;
  out.n = op.n;
  out.field =
      (sigma.imag() != 0.0) ? Field::Complex : op.field;
  auto inner = std::make_shared<LinearOperator>(std::move(op));
  out.apply_fn = [inner, sigma](const Vector& v, Vector& w) {
    inner->apply_fn(v, w);
    w.noalias() -= sigma * v;
  };
  return out;
}

LinearOperator dense_operator(Matrix A, Field field) {
  if (A.rows() != A.cols() || A.rows() < 1) {
    throw InvalidInputError("dense_operator: matrix must be square");
  }
  auto mat = std::make_shared<Matrix>(std::move(A));
  LinearOperator op;
  op.n = mat->rows();
  op.field = field;
  op.apply_fn = [mat](const Vector& v, Vector& out) {
    out.noalias() = (*mat) * v;
  };
  return op;
}

LinearOperator planted_spectrum_operator(Index n, Index n_small,
                                         std::uint64_t seed) {
  if (n < 2 || n_small < 0 || n_small > n) {
    throw InvalidInputError("planted_spectrum_operator: bad dimensions");
  }
  NormalSampler sampler(seed);
  Vector diag(n);
  for (Index i = 0; i < n; ++i) {
    if (i < n_small) {
      // Small eigenvalues fanned over [-pi/3, pi/3] with moduli
      // 0.06, 0.12, ... so the origin is partially surrounded.
      const double rho = 0.06 * static_cast<double>(i + 1);
      const double angle =
          (2.0 * sampler.uniform() - 1.0) * M_PI / 3.0;
      diag(i) = rho * Scalar(std::cos(angle), std::sin(angle));
    } else {
      const double re = 1.0 + 8.0 * sampler.uniform();
      const double im = 6.0 * (sampler.uniform() - 0.5);
      diag(i) = Scalar(re, im);
    }
  }
  Vector super(n - 1);
  for (Index i = 0; i + 1 < n; ++i) {
    super(i) = 0.2 * sampler.next_complex();
  }
  auto d = std::make_shared<Vector>(std::move(diag));
  auto s = std::make_shared<Vector>(std::move(super));
  LinearOperator op;
  op.n = n;
  op.field = Field::Complex;
  op.apply_fn = [d, s, n](const Vector& v, Vector& out) {
    for (Index i = 0; i + 1 < n; ++i) {
      out(i) = (*d)(i)*v(i) + (*s)(i)*v(i + 1);
    }
    out(n - 1) = (*d)(n - 1) * v(n - 1);
  };
  return op;
}

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail_line(long line, const std::string& what) {
  throw ParseError("matrix market line " + std::to_string(line) + ": " + what);
}

}  // namespace

LinearOperator load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError("cannot open matrix file: " + path);
  }
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) {
    fail_line(1, "empty file");
  }
  ++lineno;
  std::istringstream banner(line);
  std::string tag, object, format, fieldword, symmetry;
  banner >> tag >> object >> format >> fieldword >> symmetry;
  if (tag != "%%MatrixMarket" || lowercase(object) != "matrix") {
    fail_line(lineno, "expected %%MatrixMarket matrix header");
  }
  if (lowercase(format) != "coordinate") {
    fail_line(lineno, "unsupported format '" + format + "'");
  }
  fieldword = lowercase(fieldword);
  const bool complex_field = fieldword == "complex";
  if (!complex_field && fieldword != "real" && fieldword != "integer") {
    fail_line(lineno, "unsupported field '" + fieldword + "'");
  }
  if (lowercase(symmetry) != "general") {
    fail_line(lineno, "unsupported symmetry '" + symmetry + "'");
  }

  long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') {
      continue;
    }
    std::istringstream sz(line);
    if (!(sz >> rows >> cols >> nnz)) {
      fail_line(lineno, "malformed size line");
    }
    break;
  }
  if (rows < 0) {
    fail_line(lineno, "missing size line");
  }
  if (rows != cols) {
    fail_line(lineno, "operator requires a square matrix, got " +
                          std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (rows < 1 || rows > (1L << 31)) {
    fail_line(lineno, "dimension out of range");
  }

  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(static_cast<std::size_t>(nnz));
  long seen = 0;
  while (seen < nnz) {
    if (!std::getline(in, line)) {
      fail_line(lineno + 1, "unexpected end of file, expected " +
                                std::to_string(nnz) + " entries");
    }
    ++lineno;
    if (line.empty() || line[0] == '%') {
      continue;
    }
    std::istringstream entry(line);
    long i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(entry >> i >> j >> re)) {
      fail_line(lineno, "malformed entry");
    }
    if (complex_field && !(entry >> im)) {
      fail_line(lineno, "complex entry needs real and imaginary parts");
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      fail_line(lineno, "index (" + std::to_string(i) + "," +
                            std::to_string(j) + ") outside " +
                            std::to_string(rows) + "x" + std::to_string(cols));
    }
    triplets.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1),
                          Scalar(re, im));
    ++seen;
  }

  auto mat = std::make_shared<Eigen::SparseMatrix<Scalar>>(rows, cols);
  mat->setFromTriplets(triplets.begin(), triplets.end());
  mat->makeCompressed();

  LinearOperator op;
  op.n = rows;
  op.field = complex_field ? Field::Complex : Field::Real;
  op.apply_fn = [mat](const Vector& v, Vector& out) {
    out.noalias() = (*mat) * v;
  };
  return op;
}

RhsFamily make_rhs_family(Index n, Index nrhs, const std::string& kind,
                          std::uint64_t seed, Field field) {
  if (nrhs < 1) {
    throw InvalidInputError("make_rhs_family: nrhs must be positive");
  }
  RhsFamily family;
  family.kind = kind;
  family.seed = seed;
  if (kind == "random") {
    for (Index j = 0; j < nrhs; ++j) {
      family.vectors.push_back(random_rhs(n, seed + j, field));
    }
  } else if (kind.rfind("related:", 0) == 0) {
    const double eps = std::stod(kind.substr(8));
    Vector b1 = random_rhs(n, seed, field);
    family.vectors.push_back(b1);
    for (Index j = 1; j < nrhs; ++j) {
      family.vectors.push_back(related_rhs(b1, eps, seed + j, field));
    }
  } else {
    throw InvalidInputError("make_rhs_family: unknown kind '" + kind + "'");
  }
  return family;
}

double linearity_defect(const LinearOperator& op, std::uint64_t seed) {
  NormalSampler sampler(seed);
  double worst = 0.0;
  double norm_est = 0.0;
  for (int probe = 0; probe < 3; ++probe) {
    Vector u(op.n), v(op.n);
    for (Index i = 0; i < op.n; ++i) {
      u(i) = sampler.next_in(op.field);
      v(i) = sampler.next_in(op.field);
    }
    const Scalar a = sampler.next_complex();
    const Scalar b = sampler.next_complex();
    const Vector au = op.apply(u);
    const Vector av = op.apply(v);
    const Vector combined = op.apply(a * u + b * v);
    norm_est = std::max({norm_est, au.norm() / u.norm(), av.norm() / v.norm()});
    const double defect = (combined - a * au - b * av).norm();
    worst = std::max(worst, defect / (u.norm() + v.norm()));
  }
  return norm_est > 0 ? worst / norm_est : worst;
}

}  // namespace kshift
