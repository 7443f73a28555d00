#include "mixedwave/linalg.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mixedwave/kernels.hpp"

namespace mixedwave {

// --- CsrMatrix -------------------------------------------------------------

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<Index> row_ptr, std::vector<Index> col,
                     std::vector<double> val)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_(std::move(col)), val_(std::move(val)) {
  if (row_ptr_.size() != rows_ + 1 || col_.size() != val_.size() ||
      static_cast<std::size_t>(row_ptr_.back()) != val_.size())
    throw std::invalid_argument("CsrMatrix: inconsistent arrays");
  for (Index c : col_)
    if (c < 0 || static_cast<std::size_t>(c) >= cols_) throw std::invalid_argument("CsrMatrix: column out of range");
}

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> t) {
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Index> row_ptr(rows + 1, 0), col;
  std::vector<double> val;
  col.reserve(t.size());
  val.reserve(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k].row < 0 || static_cast<std::size_t>(t[k].row) >= rows || t[k].col < 0 ||
        static_cast<std::size_t>(t[k].col) >= cols)
      throw std::out_of_range("CsrMatrix: triplet out of range");
    if (k > 0 && t[k].row == t[k - 1].row && t[k].col == t[k - 1].col) {
      val.back() += t[k].value;
      continue;
    }
    col.push_back(t[k].col);
    val.push_back(t[k].value);
    ++row_ptr[t[k].row + 1];
  }
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  return CsrMatrix(rows, cols, std::move(row_ptr), std::move(col), std::move(val));
}

double CsrMatrix::at(Index r, Index c) const {
  const auto begin = col_.begin() + row_ptr_[r], end = col_.begin() + row_ptr_[r + 1];
  const auto it = std::lower_bound(begin, end, c);
  return it != end && *it == c ? val_[it - col_.begin()] : 0.0;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const { kernels::spmv(*this, x, y); }

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<Index> row_ptr(cols_ + 1, 0);
  for (Index c : col_) ++row_ptr[c + 1];
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  std::vector<Index> fill(row_ptr.begin(), row_ptr.end() - 1), col(val_.size());
  std::vector<double> val(val_.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const Index dst = fill[col_[k]]++;
      col[dst] = static_cast<Index>(r);
      val[dst] = val_[k];
    }
  return CsrMatrix(cols_, rows_, std::move(row_ptr), std::move(col), std::move(val));
}

// --- BlockDiagMatrix -------------------------------------------------------

BlockDiagMatrix::BlockDiagMatrix(std::vector<Index> offsets) : offsets_(std::move(offsets)) {
  if (offsets_.empty()) offsets_.push_back(0);
  storage_offsets_.assign(offsets_.size(), 0);
  for (std::size_t b = 0; b + 1 < offsets_.size(); ++b) {
    const auto m = static_cast<std::size_t>(offsets_[b + 1] - offsets_[b]);
    storage_offsets_[b + 1] = storage_offsets_[b] + m * m;
  }
  data_.assign(storage_offsets_.back(), 0.0);
}

std::span<double> BlockDiagMatrix::block(std::size_t b) {
  factorized_ = false;
  return {data_.data() + storage_offsets_[b], storage_offsets_[b + 1] - storage_offsets_[b]};
}

std::span<const double> BlockDiagMatrix::block(std::size_t b) const {
  return {data_.data() + storage_offsets_[b], storage_offsets_[b + 1] - storage_offsets_[b]};
}

void BlockDiagMatrix::factorize() {
  factor_ = data_;
  const auto nb = static_cast<std::ptrdiff_t>(num_blocks());
  std::ptrdiff_t failed = -1;
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const int m = block_size(b);
    double* l = factor_.data() + storage_offsets_[b];
    // in-place lower Cholesky, row-major
    for (int j = 0; j < m; ++j) {
      double d = l[j * m + j];
      for (int k = 0; k < j; ++k) d -= l[j * m + k] * l[j * m + k];
      if (!(d > 0.0)) {
#pragma omp critical
        failed = b;
        d = 1.0;
      }
      d = std::sqrt(d);
      l[j * m + j] = d;
      for (int i = j + 1; i < m; ++i) {
        double s = l[i * m + j];
        for (int k = 0; k < j; ++k) s -= l[i * m + k] * l[j * m + k];
        l[i * m + j] = s / d;
      }
    }
  }
  if (failed >= 0) throw SolverError("block " + std::to_string(failed) + " is not positive definite");
  factorized_ = true;
}

void BlockDiagMatrix::solve_block(std::size_t b, std::span<const double> rhs, std::span<double> x) const {
  if (!factorized_) throw SolverError("BlockDiagMatrix::solve before factorize");
  const int m = block_size(b);
  const double* l = factor_.data() + storage_offsets_[b];
  for (int i = 0; i < m; ++i) {
    double s = rhs[i];
    for (int k = 0; k < i; ++k) s -= l[i * m + k] * x[k];
    x[i] = s / l[i * m + i];
  }
  for (int i = m - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k < m; ++k) s -= l[k * m + i] * x[k];
    x[i] = s / l[i * m + i];
  }
}

void BlockDiagMatrix::solve(std::span<const double> rhs, std::span<double> x) const {
  if (!factorized_) throw SolverError("BlockDiagMatrix::solve before factorize");
  const auto nb = static_cast<std::ptrdiff_t>(num_blocks());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const auto o = static_cast<std::size_t>(offsets_[b]);
    const auto m = static_cast<std::size_t>(block_size(b));
    solve_block(b, rhs.subspan(o, m), x.subspan(o, m));
  }
}

void BlockDiagMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const auto nb = static_cast<std::ptrdiff_t>(num_blocks());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const int m = block_size(b);
    const Index o = offsets_[b];
    const double* a = data_.data() + storage_offsets_[b];
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += a[i * m + k] * x[o + k];
      y[o + i] = s;
    }
  }
}

double BlockDiagMatrix::quadratic_form(std::span<const double> x) const {
  std::vector<double> y(size());
  multiply(x, y);
  return kernels::dot(x, y);
}

CsrMatrix BlockDiagMatrix::to_csr() const {
  std::vector<Triplet> t;
  t.reserve(data_.size());
  for (std::size_t b = 0; b < num_blocks(); ++b) {
    const int m = block_size(b);
    const Index o = offsets_[b];
    const auto a = block(b);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k)
        if (a[i * m + k] != 0.0) t.push_back({o + i, o + k, a[i * m + k]});
  }
  return CsrMatrix::from_triplets(size(), size(), std::move(t));
}

// --- solvers ---------------------------------------------------------------

LinearOperator as_operator(const CsrMatrix& a) {
  return [&a](std::span<const double> x, std::span<double> y) { a.multiply(x, y); };
}

CgResult cg_solve(const LinearOperator& a, std::span<const double> rhs, std::span<double> x, const CgOptions& opt) {
  const std::size_t n = rhs.size();
  const double rhs_norm = std::sqrt(kernels::dot(rhs, rhs));
  CgResult result;
  if (rhs_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return result;
  }
  std::vector<double> r(n), z(n), p(n), ap(n);
  a(x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ap[i];
  double res = std::sqrt(kernels::dot(r, r));
  result.relative_residual = res / rhs_norm;
  if (res <= opt.tolerance * rhs_norm) return result;

  auto precondition = [&](std::span<const double> in, std::span<double> out) {
    if (opt.preconditioner)
      opt.preconditioner(in, out);
    else
      std::copy(in.begin(), in.end(), out.begin());
  };
  precondition(r, z);
  p = z;
  double rz = kernels::dot(r, z);
  for (int it = 1; it <= opt.max_iterations; ++it) {
    a(p, ap);
    const double pap = kernels::dot(p, ap);
    if (!(pap > 0.0)) throw SolverError("cg: operator is not positive definite");
    const double alpha = rz / pap;
    kernels::axpy(alpha, p, x);
    kernels::axpy(-alpha, ap, r);
    res = std::sqrt(kernels::dot(r, r));
    result.iterations = it;
    result.relative_residual = res / rhs_norm;
    if (res <= opt.tolerance * rhs_norm) return result;
    precondition(r, z);
    const double rz_new = kernels::dot(r, z);
    kernels::xpby(z, rz_new / rz, p);
    rz = rz_new;
  }
  throw SolverError("cg: no convergence after " + std::to_string(opt.max_iterations) +
                    " iterations (relative residual " + std::to_string(result.relative_residual) + ")");
}

SaddleResult saddle_solve(const CsrMatrix& a, const CsrMatrix& b, std::span<const double> f,
                          std::span<const double> g, const SaddleOptions& opt) {
  if (a.rows() != a.cols() || b.cols() != a.rows() || f.size() != a.rows() || g.size() != b.rows())
    throw std::invalid_argument("saddle_solve: dimension mismatch");
  const CsrMatrix bt = b.transpose();
  SaddleResult result;
  const std::size_t n = a.rows(), m = b.rows();

  auto a_solve = [&](std::span<const double> rhs, std::span<double> x, double tol) {
    if (opt.a_inverse) {
      opt.a_inverse(rhs, x);
      return;
    }
    std::fill(x.begin(), x.end(), 0.0);
    CgOptions inner{tol, opt.max_inner_iterations, opt.inner_preconditioner};
    result.inner_iterations += cg_solve(as_operator(a), rhs, x, inner).iterations;
  };

  std::vector<double> tmp_n(n), tmp_n2(n);
  // rhs of the Schur system: g - B A^-1 f
  std::vector<double> schur_rhs(m);
  a_solve(f, tmp_n, opt.inner_tolerance);
  b.multiply(tmp_n, schur_rhs);
  for (std::size_t i = 0; i < m; ++i) schur_rhs[i] = g[i] - schur_rhs[i];

  const LinearOperator schur = [&](std::span<const double> y, std::span<double> out) {
    bt.multiply(y, tmp_n2);
    a_solve(tmp_n2, tmp_n, opt.inner_tolerance);
    b.multiply(tmp_n, out);
  };
  result.y.assign(m, 0.0);
  CgOptions outer{opt.outer_tolerance, opt.max_outer_iterations, opt.schur_preconditioner};
  result.outer_iterations = cg_solve(schur, schur_rhs, result.y, outer).iterations;

  bt.multiply(result.y, tmp_n2);
  for (std::size_t i = 0; i < n; ++i) tmp_n2[i] += f[i];
  result.x.assign(n, 0.0);
  a_solve(tmp_n2, result.x, opt.final_tolerance);
  return result;
}

CsrMatrix schur_complement(const CsrMatrix& b, const BlockDiagMatrix& m) {
  if (b.cols() != m.size()) throw std::invalid_argument("schur_complement: dimension mismatch");
  const CsrMatrix bt = b.transpose();
  std::vector<Triplet> t;
  std::vector<Index> rows;
  std::vector<double> coupling, minv_bt;
  for (std::size_t blk = 0; blk < m.num_blocks(); ++blk) {
    const int size = m.block_size(blk);
    const Index o = m.block_begin(blk);
    rows.clear();
    for (int i = 0; i < size; ++i)
      for (Index k = bt.row_ptr()[o + i]; k < bt.row_ptr()[o + i + 1]; ++k) rows.push_back(bt.col_index()[k]);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    const auto nr = rows.size();
    // coupling(r, :) = B(rows[r], block), minv_bt(r, :) = M_blk^-1 coupling(r, :)
    coupling.assign(nr * size, 0.0);
    minv_bt.assign(nr * size, 0.0);
    for (int i = 0; i < size; ++i)
      for (Index k = bt.row_ptr()[o + i]; k < bt.row_ptr()[o + i + 1]; ++k) {
        const auto r = std::lower_bound(rows.begin(), rows.end(), bt.col_index()[k]) - rows.begin();
        coupling[r * size + i] = bt.values()[k];
      }
    for (std::size_t r = 0; r < nr; ++r)
      m.solve_block(blk, {coupling.data() + r * size, static_cast<std::size_t>(size)},
                    {minv_bt.data() + r * size, static_cast<std::size_t>(size)});
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t s = 0; s < nr; ++s) {
        double v = 0.0;
        for (int i = 0; i < size; ++i) v += coupling[r * size + i] * minv_bt[s * size + i];
        t.push_back({rows[r], rows[s], v});
      }
  }
  return CsrMatrix::from_triplets(b.rows(), b.rows(), std::move(t));
}

// --- SparseCholesky --------------------------------------------------------

struct SparseCholesky::Impl {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

SparseCholesky::SparseCholesky(const CsrMatrix& a) : impl_(std::make_unique<Impl>()), n_(a.rows()) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SparseCholesky: matrix is not square");
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a.nnz());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (Index k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k)
      t.emplace_back(static_cast<int>(r), a.col_index()[k], a.values()[k]);
  Eigen::SparseMatrix<double> m(static_cast<int>(n_), static_cast<int>(n_));
  m.setFromTriplets(t.begin(), t.end());
  impl_->llt.compute(m);
  if (impl_->llt.info() != Eigen::Success) throw SolverError("sparse Cholesky failed: matrix not SPD");
}

SparseCholesky::~SparseCholesky() = default;
SparseCholesky::SparseCholesky(SparseCholesky&&) noexcept = default;
SparseCholesky& SparseCholesky::operator=(SparseCholesky&&) noexcept = default;

void SparseCholesky::solve(std::span<const double> rhs, std::span<double> x) const {
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  Eigen::Map<Eigen::VectorXd> out(x.data(), static_cast<Eigen::Index>(x.size()));
  out = impl_->llt.solve(b);
}

}  // namespace mixedwave
