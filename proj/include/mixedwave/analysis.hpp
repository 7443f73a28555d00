#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mixedwave/assembly.hpp"
#include "mixedwave/scenarios.hpp"

namespace mixedwave {

// --- L2 errors (degree-6 quadrature per cell) ---------------------------

double error_l2(const Bdm1Space& space, std::span<const double> coeffs, const VectorFunction& exact);
double error_l2_p0(const TriMesh& mesh, std::span<const double> coeffs, const ScalarFunction& exact);
double error_l2_p1(const TriMesh& mesh, const P1Field& field, const ScalarFunction& exact);

/// sqrt(v^T M v)
double mass_norm(const CsrMatrix& m, std::span<const double> v);
/// L2 norm of a P0 field given the cell areas.
double p0_norm(std::span<const double> areas, std::span<const double> v);

// --- eoc tables ------------------------------------------------------------

/// log(e[i-1]/e[i]) / log(h[i-1]/h[i]) for i >= 1; result has size-1 entries.
std::vector<double> eoc(std::span<const double> h, std::span<const double> errors);

struct ErrorReport {
  struct Row {
    double h;
    double tau;
    std::vector<double> values;
  };

  std::vector<std::string> norms;
  std::vector<Row> rows;

  std::size_t norm_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
  /// eoc of a norm between consecutive rows.
  std::vector<double> eoc_of(const std::string& name) const;
  /// Columns h, tau, <norm>, eoc_<norm>, ...; 12 significant digits; eoc
  /// is left empty on the first row.
  void write_csv(std::ostream& out) const;
};

// --- inexact elliptic projection -------------------------------------------

struct ProjectionResult {
  std::vector<double> w;  // BDM1 coefficients
  std::vector<double> r;  // P0 coefficients
  int iterations = 0;
};

/// Solves (w_h, v)_h - (r_h, div v) = (w, v) - (r, div v) and
/// (div w_h, q) = (div w, q) on the BDM1 space with NeumannU DOFs
/// eliminated. Factorizations are computed once.
class InexactEllipticProjector {
 public:
  explicit InexactEllipticProjector(const Bdm1Space& space);
  ~InexactEllipticProjector();

  const Bdm1Space& space() const { return *space_; }
  ProjectionResult project(const VectorFunction& w, const ScalarFunction& r) const;

  /// Right-hand sides f (velocity) and g (cellwise integral of div w).
  std::vector<double> velocity_rhs(const VectorFunction& w, const ScalarFunction& r) const;
  std::vector<double> divergence_rhs(const VectorFunction& w) const;

 private:
  const Bdm1Space* space_;
  BlockDiagMatrix lumped_;
  CsrMatrix div_;
  CsrMatrix lumped_csr_;
  std::unique_ptr<SparseCholesky> schur_;
};

/// u_h^*(t): projection of (u(t), int_0^t p ds) for a scenario with an
/// exact solution.
std::vector<double> auxiliary_velocity(const InexactEllipticProjector& projector, const PlaneWave& wave, double t);

// --- self-convergence --------------------------------------------------------

struct SelfConvergenceNorms {
  double velocity = 0.0;
  double pressure = 0.0;
};

/// Evaluates a coarse-mesh field on the fine mesh by composition with the
/// child-to-parent reference map.
class ProlongationAdapter {
 public:
  ProlongationAdapter(const Bdm1Space& coarse, const RefinementMap& map);

  Vec2 velocity(std::span<const double> coarse_coeffs, Index fine_cell, const Barycentric& lambda) const;
  double p1(const P1Field& coarse_field, Index fine_cell, const Barycentric& lambda) const;
  double p0(std::span<const double> coarse_coeffs, Index fine_cell) const;

 private:
  const Bdm1Space* coarse_;
  const RefinementMap* map_;
};

/// Fine-mesh L2 norms of u_fine - prolonged u_coarse and p_fine - prolonged p_coarse.
SelfConvergenceNorms self_convergence(const Bdm1Space& fine, std::span<const double> u_fine, const P1Field& p_fine,
                                      const Bdm1Space& coarse, std::span<const double> u_coarse,
                                      const P1Field& p_coarse, const RefinementMap& map);

}  // namespace mixedwave
