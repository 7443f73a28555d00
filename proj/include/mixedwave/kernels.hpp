#pragma once

#include <span>

namespace mixedwave {

class CsrMatrix;

/// OpenMP kernels used on the hot paths.
namespace kernels {

double dot(std::span<const double> a, std::span<const double> b);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// y = x + beta * y
void xpby(std::span<const double> x, double beta, std::span<double> y);
/// y = A x
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

}  // namespace kernels

/// Single-threaded reference implementations of the kernels above. Kept
/// for testing and benchmarking; results must agree to rounding.
namespace serial {

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double beta, std::span<double> y);
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

}  // namespace serial

}  // namespace mixedwave
