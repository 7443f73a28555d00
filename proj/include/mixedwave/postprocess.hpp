#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mixedwave/assembly.hpp"

namespace mixedwave {

/// Local P1 pressure reconstruction: on each cell the gradient is
/// -(mean of dtu over K) and the cell mean equals p.
P1Field pp_pressure(const Bdm1Space& space, std::span<const double> dtu, std::span<const double> p);

namespace serial {
P1Field pp_pressure(const Bdm1Space& space, std::span<const double> dtu, std::span<const double> p);
}

struct VelocityPostprocessOptions {
  double inner_tolerance = 1e-10;
  /// Relative residual of the Schur iteration, which is also the relative
  /// defect of div u~ = div u_hat.
  double outer_tolerance = 1e-12;
  /// Lumped-mass preconditioner for the inner solves and a sparse Cholesky
  /// of B M_lumped^-1 B^T for the Schur iteration.
  bool preconditioned = true;
  /// Inner solves with a sparse Cholesky factorization of the exact mass
  /// instead of conjugate gradients.
  bool direct_inner = true;
  /// Solve on the subspace with zero normal trace on NeumannU edges;
  /// false uses the full BDM1 space.
  bool constrained = false;
};

struct VelocityPostprocessResult {
  std::vector<double> u;  // velocity coefficients
  std::vector<double> r;  // P0 multiplier
  int outer_iterations = 0;
  int inner_iterations = 0;
};

/// Global velocity reconstruction:
/// (u~, v) - (r~, div v) = (u_hat, v)_h and div u~ = div u_hat for all v
/// in the space described by the given matrices.
/// Matrices are referenced, not copied; they must outlive the object.
class VelocityPostprocessor {
 public:
  VelocityPostprocessor(const CsrMatrix& exact_mass, const BlockDiagMatrix& lumped_mass, const CsrMatrix& div,
                        VelocityPostprocessOptions options = {});
  ~VelocityPostprocessor();

  VelocityPostprocessResult apply(std::span<const double> u_hat) const;

 private:
  const CsrMatrix& exact_mass_;
  const BlockDiagMatrix& lumped_mass_;
  const CsrMatrix& div_;
  VelocityPostprocessOptions options_;
  std::unique_ptr<SparseCholesky> schur_factor_;
  std::unique_ptr<SparseCholesky> mass_factor_;
};

/// Owns the matrices for pp_velocity on one space.
struct VelocityPostprocessSetup {
  explicit VelocityPostprocessSetup(const Bdm1Space& space, VelocityPostprocessOptions options = {});

  CsrMatrix exact_mass;
  BlockDiagMatrix lumped_mass;  // factorized
  CsrMatrix div;
  VelocityPostprocessor solver;
};

/// One-shot form. M_lumped must be factorized.
VelocityPostprocessResult pp_velocity(std::span<const double> u_hat, const CsrMatrix& exact_mass,
                                      const BlockDiagMatrix& lumped_mass, const CsrMatrix& div,
                                      VelocityPostprocessOptions options = {});

}  // namespace mixedwave
