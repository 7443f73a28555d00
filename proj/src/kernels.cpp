#include "mixedwave/kernels.hpp"

#include <cstddef>

#include "mixedwave/linalg.hpp"

namespace mixedwave {

namespace kernels {

double dot(std::span<const double> a, std::span<const double> b) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  double sum = 0.0;
#pragma omp parallel for reduction(+ : sum) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_index();
  const auto& v = a.values();
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (Index k = rp[r]; k < rp[r + 1]; ++k) sum += v[k] * x[ci[k]];
    y[r] = sum;
  }
}

}  // namespace kernels

namespace serial {

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + beta * y[i];
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  const auto& rp = a.row_ptr();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double sum = 0.0;
    for (Index k = rp[r]; k < rp[r + 1]; ++k) sum += a.values()[k] * x[a.col_index()[k]];
    y[r] = sum;
  }
}

}  // namespace serial

}  // namespace mixedwave
