#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mixedwave/assembly.hpp"
#include "mixedwave/kernels.hpp"
#include "mixedwave/linalg.hpp"

using namespace mixedwave;

namespace {

CsrMatrix laplacian_1d(std::size_t n) {
  std::vector<Triplet> t;
  for (Index i = 0; i < static_cast<Index>(n); ++i) {
    t.push_back({i, i, 2.0});
    if (i > 0) t.push_back({i, i - 1, -1.0});
    if (i + 1 < static_cast<Index>(n)) t.push_back({i, i + 1, -1.0});
  }
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

}  // namespace

TEST_CASE("triplets are summed and sorted") {
  const auto a = CsrMatrix::from_triplets(2, 3, {{1, 2, 1.0}, {0, 1, 2.0}, {1, 0, 3.0}, {1, 2, 4.0}});
  CHECK(a.nnz() == 3);
  CHECK(a.at(1, 2) == 5.0);
  CHECK(a.at(0, 0) == 0.0);
  const auto t = a.transpose();
  CHECK(t.rows() == 3);
  CHECK(t.at(2, 1) == 5.0);
  CHECK(t.at(0, 1) == 3.0);
  const auto y = a.multiply(std::vector<double>{1.0, 1.0, 1.0});
  CHECK(y[0] == 2.0);
  CHECK(y[1] == 8.0);
}

TEST_CASE("csr constructor rejects inconsistent data") {
  CHECK_THROWS(CsrMatrix(2, 2, {0, 1}, {0}, {1.0}));
  CHECK_THROWS(CsrMatrix(1, 2, {0, 1}, {5}, {1.0}));
}

TEST_CASE("conjugate gradients") {
  const auto a = laplacian_1d(50);
  std::vector<double> x_true = test::random_vector(50, 3);
  const auto b = a.multiply(x_true);
  std::vector<double> x(50, 0.0);
  const auto res = cg_solve(as_operator(a), b, x, {.tolerance = 1e-12});
  CHECK(res.iterations <= 50);
  CHECK(res.relative_residual <= 1e-12);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(x_true[i]).epsilon(1e-9));
  std::vector<double> y(50, 0.0);
  CHECK_THROWS_AS(cg_solve(as_operator(a), b, y, {.tolerance = 1e-14, .max_iterations = 3}), SolverError);
  std::vector<double> z(50, 0.0), zero(50, 0.0);
  CHECK(cg_solve(as_operator(a), zero, z).iterations == 0);
}

TEST_CASE("saddle point hand example") {
  const auto a = CsrMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, 1.0}});
  const auto b = CsrMatrix::from_triplets(1, 2, {{0, 0, 1.0}});
  const std::vector<double> f{1.0, 1.0}, g{0.0};
  const auto r = saddle_solve(a, b, f, g);
  CHECK(r.x[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.y[0] == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("saddle point on a mixed problem") {
  const auto mesh = test::skewed_square(4);
  const Bdm1Space space(mesh);
  const auto a = assemble_exact_mass(space);
  const auto b = assemble_div(space);
  const auto f = test::random_vector(a.rows(), 4);
  const auto g = test::random_vector(b.rows(), 5);
  const auto lumped = assemble_lumped_mass(space, false);
  const auto s = schur_complement(b, lumped);
  const SparseCholesky schur(s);
  SaddleOptions opt;
  opt.inner_preconditioner = [&](std::span<const double> r, std::span<double> z) { lumped.solve(r, z); };
  opt.schur_preconditioner = [&](std::span<const double> r, std::span<double> z) { schur.solve(r, z); };
  const auto res = saddle_solve(a, b, f, g, opt);
  const auto ax = a.multiply(res.x);
  const auto bty = b.transpose().multiply(res.y);
  for (std::size_t i = 0; i < ax.size(); ++i) CHECK(std::abs(ax[i] - bty[i] - f[i]) < 1e-7);
  const auto bx = b.multiply(res.x);
  for (std::size_t i = 0; i < bx.size(); ++i) CHECK(std::abs(bx[i] - g[i]) < 1e-7);
  const auto plain = saddle_solve(a, b, f, g);
  CHECK(res.outer_iterations < plain.outer_iterations);
}

TEST_CASE("block diagonal matrix") {
  BlockDiagMatrix m({0, 2, 3});
  auto b0 = m.block(0);
  b0[0] = 4.0;
  b0[1] = 1.0;
  b0[2] = 1.0;
  b0[3] = 3.0;
  m.block(1)[0] = 2.0;
  const std::vector<double> x{1.0, 2.0, 3.0};
  std::vector<double> y(3);
  m.multiply(x, y);
  CHECK(y[0] == 6.0);
  CHECK(y[1] == 7.0);
  CHECK(y[2] == 6.0);
  CHECK(m.quadratic_form(x) == 6.0 + 14.0 + 18.0);
  m.factorize();
  std::vector<double> z(3);
  m.solve(y, z);
  for (int i = 0; i < 3; ++i) CHECK(z[i] == doctest::Approx(x[i]).epsilon(1e-14));

  BlockDiagMatrix bad({0, 2});
  auto bb = bad.block(0);
  bb[0] = 1.0;
  bb[1] = 2.0;
  bb[2] = 2.0;
  bb[3] = 1.0;
  CHECK_THROWS_AS(bad.factorize(), SolverError);
}

TEST_CASE("sparse cholesky") {
  const auto a = laplacian_1d(30);
  const SparseCholesky c(a);
  const auto x_true = test::random_vector(30, 9);
  const auto b = a.multiply(x_true);
  std::vector<double> x(30);
  c.solve(b, x);
  for (int i = 0; i < 30; ++i) CHECK(x[i] == doctest::Approx(x_true[i]).epsilon(1e-11));
  const auto indefinite = CsrMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 1.0}});
  CHECK_THROWS_AS(SparseCholesky{indefinite}, SolverError);
}
