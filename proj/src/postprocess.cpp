#include "mixedwave/postprocess.hpp"

namespace mixedwave {

namespace {

std::array<double, 3> reconstruct_cell(const Bdm1Space& space, Index c, std::span<const double> dtu, double p) {
  const auto& el = space.element(c);
  Vec2 grad{};
  // mean of lambda_a over K is 1/3
  for (int j = 0; j < 6; ++j) grad -= (dtu[el.dof[j]] / 3.0) * el.w[j];
  const auto x = space.mesh().corners(c);
  const Vec2 centroid = (x[0] + x[1] + x[2]) / 3.0;
  return {p + dot(grad, x[0] - centroid), p + dot(grad, x[1] - centroid), p + dot(grad, x[2] - centroid)};
}

void check_sizes(const Bdm1Space& space, std::span<const double> dtu, std::span<const double> p) {
  if (dtu.size() != space.num_velocity() || p.size() != space.num_pressure())
    throw std::invalid_argument("pp_pressure: field sizes do not match the space");
}

}  // namespace

P1Field pp_pressure(const Bdm1Space& space, std::span<const double> dtu, std::span<const double> p) {
  check_sizes(space, dtu, p);
  P1Field out;
  out.values.resize(space.num_pressure());
  const auto nc = static_cast<std::ptrdiff_t>(space.num_pressure());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < nc; ++c) out.values[c] = reconstruct_cell(space, static_cast<Index>(c), dtu, p[c]);
  return out;
}

namespace serial {

P1Field pp_pressure(const Bdm1Space& space, std::span<const double> dtu, std::span<const double> p) {
  check_sizes(space, dtu, p);
  P1Field out;
  for (std::size_t c = 0; c < space.num_pressure(); ++c)
    out.values.push_back(reconstruct_cell(space, static_cast<Index>(c), dtu, p[c]));
  return out;
}

}  // namespace serial

VelocityPostprocessor::VelocityPostprocessor(const CsrMatrix& exact_mass, const BlockDiagMatrix& lumped_mass,
                                             const CsrMatrix& div, VelocityPostprocessOptions options)
    : exact_mass_(exact_mass), lumped_mass_(lumped_mass), div_(div), options_(options) {
  if (!lumped_mass.factorized()) throw std::invalid_argument("pp_velocity: lumped mass must be factorized");
  if (options_.preconditioned)
    schur_factor_ = std::make_unique<SparseCholesky>(schur_complement(div_, lumped_mass_));
  if (options_.direct_inner) mass_factor_ = std::make_unique<SparseCholesky>(exact_mass_);
}

VelocityPostprocessor::~VelocityPostprocessor() = default;

VelocityPostprocessResult VelocityPostprocessor::apply(std::span<const double> u_hat) const {
  if (u_hat.size() != exact_mass_.rows()) throw std::invalid_argument("pp_velocity: size mismatch");
  std::vector<double> f(u_hat.size()), g(div_.rows());
  lumped_mass_.multiply(u_hat, f);
  div_.multiply(u_hat, g);
  SaddleOptions opt;
  opt.inner_tolerance = options_.inner_tolerance;
  opt.outer_tolerance = options_.outer_tolerance;
  if (options_.preconditioned) {
    opt.inner_preconditioner = [this](std::span<const double> in, std::span<double> out) {
      lumped_mass_.solve(in, out);
    };
    opt.schur_preconditioner = [this](std::span<const double> in, std::span<double> out) {
      schur_factor_->solve(in, out);
    };
  }
  if (mass_factor_)
    opt.a_inverse = [this](std::span<const double> in, std::span<double> out) { mass_factor_->solve(in, out); };
  auto s = saddle_solve(exact_mass_, div_, f, g, opt);
  return {std::move(s.x), std::move(s.y), s.outer_iterations, s.inner_iterations};
}

VelocityPostprocessSetup::VelocityPostprocessSetup(const Bdm1Space& space, VelocityPostprocessOptions options)
    : exact_mass(options.constrained ? constrain_velocity_matrix(assemble_exact_mass(space), space.dofs())
                                     : assemble_exact_mass(space)),
      lumped_mass(assemble_lumped_mass(space, options.constrained)),
      div(options.constrained ? drop_constrained_columns(assemble_div(space), space.dofs()) : assemble_div(space)),
      solver(exact_mass, lumped_mass, div, options) {}

VelocityPostprocessResult pp_velocity(std::span<const double> u_hat, const CsrMatrix& exact_mass,
                                      const BlockDiagMatrix& lumped_mass, const CsrMatrix& div,
                                      VelocityPostprocessOptions options) {
  return VelocityPostprocessor(exact_mass, lumped_mass, div, options).apply(u_hat);
}

}  // namespace mixedwave
