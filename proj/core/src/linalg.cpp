#include "dbclab/linalg.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dbclab/error.hpp"

namespace dbclab {

double SparseMatrix::diagonal(std::size_t row) const noexcept { return at(row, row); }

double SparseMatrix::at(std::size_t row, std::size_t col) const noexcept {
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(offsets_[row]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(offsets_[row + 1]);
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

SparseMatrix assemble(std::span<const Triplet> triplets, std::size_t n) {
  SparseMatrix m;
  m.n_ = n;
  std::vector<std::size_t> counts(n + 1, 0);
  for (const Triplet& t : triplets) {
    if (t.row >= n || t.col >= n) {
      std::ostringstream msg;
      msg << "assemble: entry (" << t.row << ", " << t.col << ") outside a " << n << "x" << n
          << " matrix";
      throw std::out_of_range(msg.str());
    }
    ++counts[t.row + 1];
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());

  // Bucket by row, then sort and merge each row.
  std::vector<std::pair<std::size_t, double>> bucket(triplets.size());
  std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
  for (const Triplet& t : triplets) bucket[fill[t.row]++] = {t.col, t.value};

  m.offsets_.assign(n + 1, 0);
  m.cols_.clear();
  m.values_.clear();
  m.cols_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (std::size_t r = 0; r < n; ++r) {
    auto first = bucket.begin() + static_cast<std::ptrdiff_t>(counts[r]);
    auto last = bucket.begin() + static_cast<std::ptrdiff_t>(counts[r + 1]);
    std::sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (!m.cols_.empty() && m.cols_.size() > m.offsets_[r] && m.cols_.back() == it->first)
        m.values_.back() += it->second;
      else {
        m.cols_.push_back(it->first);
        m.values_.push_back(it->second);
      }
    }
    m.offsets_[r + 1] = m.cols_.size();
  }
  return m;
}

Vector matvec(const SparseMatrix& a, std::span<const double> x) {
  if (x.size() != a.dim())
    throw std::invalid_argument("matvec: vector of length " + std::to_string(x.size()) +
                                " against dimension " + std::to_string(a.dim()));
  const auto off = a.row_offsets();
  const auto cols = a.columns();
  const auto vals = a.values();
  Vector y(a.dim(), 0.0);
  for (std::size_t r = 0; r < a.dim(); ++r) {
    double s = 0.0;
    for (std::size_t k = off[r]; k < off[r + 1]; ++k) s += vals[k] * x[cols[k]];
    y[r] = s;
  }
  return y;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double true_residual(const SparseMatrix& a, std::span<const double> b, const Vector& x,
                     double bnorm) {
  Vector ax = matvec(a, x);
  for (std::size_t k = 0; k < ax.size(); ++k) ax[k] = b[k] - ax[k];
  return norm2(ax) / bnorm;
}

}  // namespace

KrylovResult solve_bicgstab(const SparseMatrix& a, std::span<const double> b, double tol,
                            std::size_t maxit, bool jacobi) {
  const std::size_t n = a.dim();
  if (b.size() != n) throw std::invalid_argument("solve_bicgstab: right-hand side size mismatch");
  KrylovResult out;
  out.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return out;

  Vector inv_diag(n, 1.0);
  if (jacobi) {
    for (std::size_t r = 0; r < n; ++r) {
      const double d = a.diagonal(r);
      inv_diag[r] = d != 0.0 ? 1.0 / d : 1.0;
    }
  }
  auto precondition = [&](const Vector& v) {
    Vector z(n);
    for (std::size_t k = 0; k < n; ++k) z[k] = inv_diag[k] * v[k];
    return z;
  };

  Vector& x = out.x;
  Vector r(b.begin(), b.end());
  const Vector r_hat = r;
  Vector p(n, 0.0), v(n, 0.0);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  Vector best = x;
  double best_res = 1.0;

  for (std::size_t it = 1; it <= maxit; ++it) {
    const double rho_next = dot(r_hat, r);
    if (rho_next == 0.0 || omega == 0.0) break;
    const double beta = (rho_next / rho) * (alpha / omega);
    rho = rho_next;
    for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * (p[k] - omega * v[k]);
    const Vector p_hat = precondition(p);
    v = matvec(a, p_hat);
    const double rv = dot(r_hat, v);
    if (rv == 0.0) break;
    alpha = rho / rv;
    Vector s(n);
    for (std::size_t k = 0; k < n; ++k) s[k] = r[k] - alpha * v[k];
    out.iterations = it;
    if (norm2(s) <= tol * bnorm) {
      for (std::size_t k = 0; k < n; ++k) x[k] += alpha * p_hat[k];
      const double res = true_residual(a, b, x, bnorm);
      if (res <= tol) {
        out.residual = res;
        return out;
      }
      r = Vector(b.begin(), b.end());
      const Vector ax = matvec(a, x);
      for (std::size_t k = 0; k < n; ++k) r[k] -= ax[k];
      continue;
    }
    const Vector s_hat = precondition(s);
    const Vector t = matvec(a, s_hat);
    const double tt = dot(t, t);
    omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p_hat[k] + omega * s_hat[k];
      r[k] = s[k] - omega * t[k];
    }
    const double rel = norm2(r) / bnorm;
    if (rel < best_res) {
      best_res = rel;
      best = x;
    }
    if (rel <= tol) {
      const double res = true_residual(a, b, x, bnorm);
      if (res <= tol) {
        out.residual = res;
        return out;
      }
      // Recurrence drifted from the true residual: restart from the current iterate.
      const Vector ax = matvec(a, x);
      for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - ax[k];
    }
  }
  std::ostringstream msg;
  msg << "BiCGStab did not converge in " << out.iterations << " iterations; best relative residual "
      << true_residual(a, b, best, bnorm);
  throw SolverError(msg.str());
}

struct DirectSolver::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double, Eigen::ColMajor>, Eigen::COLAMDOrdering<int>> lu;
  std::vector<std::size_t> pattern_offsets;
  std::vector<std::size_t> pattern_cols;
  bool analyzed = false;
};

DirectSolver::DirectSolver() : impl_(std::make_unique<Impl>()) {}
DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

Vector DirectSolver::solve(const SparseMatrix& a, std::span<const double> b) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  if (b.size() != a.dim()) throw std::invalid_argument("DirectSolver: right-hand side size mismatch");
  const auto off = a.row_offsets();
  const auto cols = a.columns();
  const auto vals = a.values();

  // CSR of A is CSC of A^T; map it as a row-major matrix and convert.
  Eigen::SparseMatrix<double, Eigen::RowMajor> row_major(n, n);
  row_major.reserve(static_cast<Eigen::Index>(vals.size()));
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(vals.size());
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t k = off[r]; k < off[r + 1]; ++k)
      trips.emplace_back(static_cast<int>(r), static_cast<int>(cols[k]), vals[k]);
  row_major.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseMatrix<double, Eigen::ColMajor> m = row_major;
  m.makeCompressed();

  const bool same_pattern = impl_->analyzed &&
                            std::equal(off.begin(), off.end(), impl_->pattern_offsets.begin(),
                                       impl_->pattern_offsets.end()) &&
                            std::equal(cols.begin(), cols.end(), impl_->pattern_cols.begin(),
                                       impl_->pattern_cols.end());
  if (!same_pattern) {
    impl_->lu.analyzePattern(m);
    impl_->pattern_offsets.assign(off.begin(), off.end());
    impl_->pattern_cols.assign(cols.begin(), cols.end());
    impl_->analyzed = true;
  }
  impl_->lu.factorize(m);
  if (impl_->lu.info() != Eigen::Success)
    throw SolverError("sparse LU factorization failed: " + impl_->lu.lastErrorMessage());
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
  Eigen::VectorXd sol = impl_->lu.solve(rhs);
  if (impl_->lu.info() != Eigen::Success || !sol.allFinite())
    throw SolverError("sparse LU solve failed");
  return Vector(sol.data(), sol.data() + sol.size());
}

LinearSolve direct_linear_solve(DirectSolver& solver) {
  return [&solver](const SparseMatrix& a, std::span<const double> b) {
    return LinearSolution{solver.solve(a, b), 1};
  };
}

LinearSolve bicgstab_linear_solve(double tol, std::size_t maxit) {
  return [tol, maxit](const SparseMatrix& a, std::span<const double> b) {
    KrylovResult r = solve_bicgstab(a, b, tol, maxit, true);
    return LinearSolution{std::move(r.x), r.iterations};
  };
}

NewtonReport newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, Vector& x,
                          const NewtonOptions& options, const LinearSolve& linear_solve) {
  NewtonReport report;
  Vector f = residual(x);
  if (f.size() != x.size()) throw std::invalid_argument("newton_solve: residual size mismatch");
  double fnorm = norm_inf(f);
  report.residual = fnorm;
  if (!std::isfinite(fnorm)) throw SolverError("newton_solve: non-finite initial residual");

  while (fnorm > options.tol) {
    if (report.iterations >= options.maxit) {
      std::ostringstream msg;
      msg << "Newton did not converge in " << options.maxit << " iterations (residual " << fnorm
          << ")";
      throw SolverError(msg.str());
    }
    const SparseMatrix jac = jacobian(x);
    if (jac.dim() != x.size()) throw std::invalid_argument("newton_solve: Jacobian size mismatch");
    Vector dx;
    try {
      LinearSolution sol = linear_solve(jac, f);
      report.linear_iterations += sol.iterations;
      dx = std::move(sol.x);
    } catch (const SolverError& e) {
      throw SolverError(std::string("Newton linear solve failed: ") + e.what());
    }
    double step = 1.0;
    bool accepted = false;
    for (std::size_t h = 0; h <= options.max_halvings; ++h) {
      Vector trial(x);
      for (std::size_t k = 0; k < x.size(); ++k) trial[k] -= step * dx[k];
      Vector ft;
      bool finite = true;
      try {
        ft = residual(trial);
      } catch (const std::domain_error&) {
        finite = false;
      }
      const double tnorm = finite ? norm_inf(ft) : std::numeric_limits<double>::infinity();
      if (std::isfinite(tnorm) && tnorm < fnorm) {
        x = std::move(trial);
        f = std::move(ft);
        fnorm = tnorm;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++report.iterations;
    report.residual = fnorm;
    if (!accepted) {
      std::ostringstream msg;
      msg << "Newton line search exhausted after " << options.max_halvings
          << " halvings (residual " << fnorm << ")";
      throw SolverError(msg.str());
    }
  }
  report.converged = true;
  return report;
}

}  // namespace dbclab
