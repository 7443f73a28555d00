#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "mixedwave/geometry.hpp"

namespace mixedwave {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed row storage with sorted, duplicate-free columns per row.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<Index> row_ptr, std::vector<Index> col,
            std::vector<double> val);

  /// Sums duplicate entries.
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return val_.size(); }
  const std::vector<Index>& row_ptr() const { return row_ptr_; }
  const std::vector<Index>& col_index() const { return col_; }
  const std::vector<double>& values() const { return val_; }

  double at(Index r, Index c) const;
  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;
  CsrMatrix transpose() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_;
  std::vector<double> val_;
};

/// Dense symmetric blocks along the diagonal; block b covers the index
/// range [offsets[b], offsets[b+1]).
class BlockDiagMatrix {
 public:
  explicit BlockDiagMatrix(std::vector<Index> offsets);

  std::size_t size() const { return static_cast<std::size_t>(offsets_.back()); }
  std::size_t num_blocks() const { return offsets_.size() - 1; }
  Index block_begin(std::size_t b) const { return offsets_[b]; }
  Index block_size(std::size_t b) const { return offsets_[b + 1] - offsets_[b]; }

  /// Row-major storage of block b.
  std::span<double> block(std::size_t b);
  std::span<const double> block(std::size_t b) const;

  /// Dense Cholesky per block. Throws SolverError on a non-SPD block.
  void factorize();
  bool factorized() const { return factorized_; }
  void solve(std::span<const double> rhs, std::span<double> x) const;
  /// Solves with block b alone; rhs and x are block-local. x may alias rhs.
  void solve_block(std::size_t b, std::span<const double> rhs, std::span<double> x) const;
  void multiply(std::span<const double> x, std::span<double> y) const;
  double quadratic_form(std::span<const double> x) const;
  CsrMatrix to_csr() const;

 private:
  std::vector<Index> offsets_;
  std::vector<std::size_t> storage_offsets_;
  std::vector<double> data_;
  std::vector<double> factor_;
  bool factorized_ = false;
};

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

LinearOperator as_operator(const CsrMatrix& a);

struct CgOptions {
  double tolerance = 1e-10;
  int max_iterations = 20000;
  LinearOperator preconditioner;  // approximates A^-1; empty means none
};

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Conjugate gradients on an SPD operator. `x` holds the initial guess and
/// receives the solution. Stops once ||r|| <= tolerance * ||rhs||; throws
/// SolverError when the iteration limit is reached first.
CgResult cg_solve(const LinearOperator& a, std::span<const double> rhs, std::span<double> x,
                  const CgOptions& options = {});

struct SaddleOptions {
  double inner_tolerance = 1e-10;
  double outer_tolerance = 1e-9;
  /// Tolerance of the final velocity reconstruction x = A^-1 (f + B^T y).
  double final_tolerance = 1e-13;
  int max_inner_iterations = 20000;
  int max_outer_iterations = 20000;
  LinearOperator inner_preconditioner;  // approximates A^-1
  LinearOperator schur_preconditioner;  // approximates (B A^-1 B^T)^-1
  LinearOperator a_inverse;             // exact A^-1, replaces inner CG
};

struct SaddleResult {
  std::vector<double> x;
  std::vector<double> y;
  int outer_iterations = 0;
  int inner_iterations = 0;
};

/// Solves A x - B^T y = f, B x = g by conjugate gradients on the Schur
/// complement B A^-1 B^T y = g - B A^-1 f, then x = A^-1 (f + B^T y).
SaddleResult saddle_solve(const CsrMatrix& a, const CsrMatrix& b, std::span<const double> f,
                          std::span<const double> g, const SaddleOptions& options = {});

/// B M^-1 B^T for block-diagonal M (factorized).
CsrMatrix schur_complement(const CsrMatrix& b, const BlockDiagMatrix& m);

/// Sparse Cholesky factorization of an SPD matrix (fill-reducing ordering).
class SparseCholesky {
 public:
  explicit SparseCholesky(const CsrMatrix& a);
  ~SparseCholesky();
  SparseCholesky(SparseCholesky&&) noexcept;
  SparseCholesky& operator=(SparseCholesky&&) noexcept;

  void solve(std::span<const double> rhs, std::span<double> x) const;
  std::size_t size() const { return n_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t n_ = 0;
};

}  // namespace mixedwave
