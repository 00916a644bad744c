#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace dbclab {

using Vector = std::vector<double>;

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Square matrix in compressed sparse rows with sorted, duplicate-free columns.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  std::size_t dim() const noexcept { return n_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }
  std::span<const std::size_t> row_offsets() const noexcept { return offsets_; }
  std::span<const std::size_t> columns() const noexcept { return cols_; }
  std::span<const double> values() const noexcept { return values_; }
  double diagonal(std::size_t row) const noexcept;
  /// Entry (row, col), zero when not stored.
  double at(std::size_t row, std::size_t col) const noexcept;

 private:
  friend SparseMatrix assemble(std::span<const Triplet> triplets, std::size_t n);
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> cols_;
  std::vector<double> values_;
};

/// Canonical CSR from triplets; duplicates are summed and explicit zeros kept so
/// the sparsity pattern depends only on the triplet positions.
SparseMatrix assemble(std::span<const Triplet> triplets, std::size_t n);

Vector matvec(const SparseMatrix& a, std::span<const double> x);

double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);

struct KrylovResult {
  Vector x;
  std::size_t iterations = 0;
  double residual = 0.0;  // recomputed ||b - A x|| / ||b||
};

/// Jacobi-preconditioned BiCGStab.  Stops when ||b - A x|| <= tol ||b||
/// (true residual, recomputed at exit).  Throws SolverError on breakdown or
/// when maxit is reached, quoting the best relative residual seen.
KrylovResult solve_bicgstab(const SparseMatrix& a, std::span<const double> b, double tol,
                            std::size_t maxit, bool jacobi = true);

/// Sparse LU with the symbolic analysis kept between calls that share a pattern.
class DirectSolver {
 public:
  DirectSolver();
  ~DirectSolver();
  DirectSolver(DirectSolver&&) noexcept;
  DirectSolver& operator=(DirectSolver&&) noexcept;

  /// Throws SolverError when the matrix is numerically singular.
  Vector solve(const SparseMatrix& a, std::span<const double> b);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct LinearSolution {
  Vector x;
  std::size_t iterations = 1;
};

using LinearSolve = std::function<LinearSolution(const SparseMatrix&, std::span<const double>)>;

/// Linear-solve adaptors for newton_solve.
LinearSolve direct_linear_solve(DirectSolver& solver);
LinearSolve bicgstab_linear_solve(double tol, std::size_t maxit);

struct NewtonOptions {
  double tol = 1e-11;              // on ||F||_inf
  std::size_t maxit = 30;
  std::size_t max_halvings = 8;
};

struct NewtonReport {
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::size_t linear_iterations = 0;
};

using ResidualFn = std::function<Vector(std::span<const double>)>;
using JacobianFn = std::function<SparseMatrix(std::span<const double>)>;

/// Damped Newton.  A step is halved (up to max_halvings times) until
/// ||F||_inf decreases.  Throws SolverError on line-search exhaustion, maxit, or
/// a failed linear solve; `x` holds the last accepted iterate on return.
NewtonReport newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, Vector& x,
                          const NewtonOptions& options, const LinearSolve& linear_solve);

}  // namespace dbclab
