#include "mixedwave/analysis.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "mixedwave/kernels.hpp"

namespace mixedwave {

namespace {

// sum over cells and degree-6 points of 2|K| w_q f(cell, lambda_q)
template <typename F>
double cell_quadrature_sum(const TriMesh& mesh, F&& f) {
  const auto& rule = quad_rule(QuadKind::high_order);
  const auto nc = static_cast<std::ptrdiff_t>(mesh.num_cells());
  double sum = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : sum)
  for (std::ptrdiff_t c = 0; c < nc; ++c) {
    const Index cell = static_cast<Index>(c);
    double local = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) local += rule.weights[q] * f(cell, rule.points[q]);
    sum += 2.0 * mesh.area(cell) * local;
  }
  return sum;
}

}  // namespace

double error_l2(const Bdm1Space& space, std::span<const double> coeffs, const VectorFunction& exact) {
  const auto& mesh = space.mesh();
  return std::sqrt(cell_quadrature_sum(mesh, [&](Index c, const Barycentric& l) {
    const Vec2 d = space.element(c).eval(l, coeffs) - exact(from_barycentric(mesh.corners(c), l));
    return dot(d, d);
  }));
}

double error_l2_p0(const TriMesh& mesh, std::span<const double> coeffs, const ScalarFunction& exact) {
  return std::sqrt(cell_quadrature_sum(mesh, [&](Index c, const Barycentric& l) {
    const double d = coeffs[c] - exact(from_barycentric(mesh.corners(c), l));
    return d * d;
  }));
}

double error_l2_p1(const TriMesh& mesh, const P1Field& field, const ScalarFunction& exact) {
  return std::sqrt(cell_quadrature_sum(mesh, [&](Index c, const Barycentric& l) {
    const auto& v = field.values[c];
    const double d = l[0] * v[0] + l[1] * v[1] + l[2] * v[2] - exact(from_barycentric(mesh.corners(c), l));
    return d * d;
  }));
}

double mass_norm(const CsrMatrix& m, std::span<const double> v) {
  std::vector<double> mv(v.size());
  m.multiply(v, mv);
  return std::sqrt(std::max(0.0, kernels::dot(v, mv)));
}

double p0_norm(std::span<const double> areas, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t c = 0; c < v.size(); ++c) s += areas[c] * v[c] * v[c];
  return std::sqrt(s);
}

std::vector<double> eoc(std::span<const double> h, std::span<const double> errors) {
  if (h.size() != errors.size()) throw std::invalid_argument("eoc: size mismatch");
  std::vector<double> out;
  for (std::size_t i = 1; i < h.size(); ++i) out.push_back(std::log(errors[i - 1] / errors[i]) / std::log(h[i - 1] / h[i]));
  return out;
}

std::size_t ErrorReport::norm_index(const std::string& name) const {
  for (std::size_t i = 0; i < norms.size(); ++i)
    if (norms[i] == name) return i;
  throw std::out_of_range("no norm named '" + name + "' in report");
}

std::vector<double> ErrorReport::column(const std::string& name) const {
  const auto k = norm_index(name);
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.values.at(k));
  return out;
}

std::vector<double> ErrorReport::eoc_of(const std::string& name) const {
  std::vector<double> h;
  for (const auto& r : rows) h.push_back(r.h);
  return eoc(h, column(name));
}

void ErrorReport::write_csv(std::ostream& out) const {
  out << "h,tau";
  for (const auto& n : norms) out << "," << n << ",eoc_" << n;
  out << "\n";
  std::vector<std::vector<double>> rates;
  for (const auto& n : norms) rates.push_back(eoc_of(n));
  const auto old_precision = out.precision(12);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << rows[i].h << "," << rows[i].tau;
    for (std::size_t k = 0; k < norms.size(); ++k) {
      out << "," << rows[i].values.at(k) << ",";
      if (i > 0) out << rates[k][i - 1];
    }
    out << "\n";
  }
  out.precision(old_precision);
}

// --- projection ----------------------------------------------------------


InexactEllipticProjector::InexactEllipticProjector(const Bdm1Space& space)
    : space_(&space),
      lumped_(assemble_lumped_mass(space, true)),
      div_(drop_constrained_columns(assemble_div(space), space.dofs())),
      lumped_csr_(lumped_.to_csr()),
      schur_(std::make_unique<SparseCholesky>(schur_complement(div_, lumped_))) {}

InexactEllipticProjector::~InexactEllipticProjector() = default;

std::vector<double> InexactEllipticProjector::velocity_rhs(const VectorFunction& w, const ScalarFunction& r) const {
  const auto& mesh = space_->mesh();
  const auto& rule = quad_rule(QuadKind::high_order);
  std::vector<double> f(space_->num_velocity(), 0.0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& el = space_->element(static_cast<Index>(c));
    const auto x = mesh.corners(static_cast<Index>(c));
    std::array<Vec2, 3> wl{};  // integral of w lambda_a
    double r_int = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const Vec2 xq = from_barycentric(x, l);
      const double weight = 2.0 * el.area * rule.weights[q];
      const Vec2 wq = w(xq);
      for (int a = 0; a < 3; ++a) wl[a] += (weight * l[a]) * wq;
      r_int += weight * r(xq);
    }
    for (int j = 0; j < 6; ++j) f[el.dof[j]] += dot(wl[el.vertex[j]], el.w[j]) - r_int * el.divergence(j);
  }
  apply_normal_bc(space_->dofs(), f);
  return f;
}

std::vector<double> InexactEllipticProjector::divergence_rhs(const VectorFunction& w) const {
  const auto& mesh = space_->mesh();
  const auto& g = gauss4();
  std::vector<double> flux(mesh.num_edges(), 0.0);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const auto& edge = mesh.edges()[e];
    const Vec2 a = mesh.vertex(edge.v[0]), b = mesh.vertex(edge.v[1]);
    double s = 0.0;
    for (int q = 0; q < 4; ++q) s += g.weights[q] * dot(w(a + g.nodes[q] * (b - a)), edge.normal);
    flux[e] = s * edge.length;
    if (mesh.boundary_tag(static_cast<Index>(e)) == BoundaryTag::NeumannU) flux[e] = 0.0;
  }
  std::vector<double> out(mesh.num_cells(), 0.0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& ce = mesh.cell_edges()[c];
    for (int i = 0; i < 3; ++i) out[c] += ce.sign[i] * flux[ce.edge[i]];
  }
  return out;
}

ProjectionResult InexactEllipticProjector::project(const VectorFunction& w, const ScalarFunction& r) const {
  const auto f = velocity_rhs(w, r);
  const auto g = divergence_rhs(w);
  SaddleOptions opt;
  opt.a_inverse = [this](std::span<const double> in, std::span<double> out) { lumped_.solve(in, out); };
  opt.schur_preconditioner = [this](std::span<const double> in, std::span<double> out) { schur_->solve(in, out); };
  auto s = saddle_solve(lumped_csr_, div_, f, g, opt);
  return {std::move(s.x), std::move(s.y), s.outer_iterations};
}

std::vector<double> auxiliary_velocity(const InexactEllipticProjector& projector, const PlaneWave& wave, double t) {
  return projector
      .project([&](Vec2 x) { return wave.velocity(x, t); }, [&](Vec2 x) { return wave.pressure_integral(x, t); })
      .w;
}

// --- self-convergence --------------------------------------------------------

ProlongationAdapter::ProlongationAdapter(const Bdm1Space& coarse, const RefinementMap& map)
    : coarse_(&coarse), map_(&map) {
  if (map.coarse_cells != coarse.num_pressure()) throw std::invalid_argument("refinement map does not match coarse mesh");
}

Vec2 ProlongationAdapter::velocity(std::span<const double> coeffs, Index fine_cell, const Barycentric& lambda) const {
  const auto parent = map_->parent_cell[fine_cell];
  return coarse_->element(parent).eval(child_to_parent(map_->child_index[fine_cell], lambda), coeffs);
}

double ProlongationAdapter::p1(const P1Field& field, Index fine_cell, const Barycentric& lambda) const {
  const auto l = child_to_parent(map_->child_index[fine_cell], lambda);
  const auto& v = field.values[map_->parent_cell[fine_cell]];
  return l[0] * v[0] + l[1] * v[1] + l[2] * v[2];
}

double ProlongationAdapter::p0(std::span<const double> coeffs, Index fine_cell) const {
  return coeffs[map_->parent_cell[fine_cell]];
}

SelfConvergenceNorms self_convergence(const Bdm1Space& fine, std::span<const double> u_fine, const P1Field& p_fine,
                                      const Bdm1Space& coarse, std::span<const double> u_coarse,
                                      const P1Field& p_coarse, const RefinementMap& map) {
  if (map.parent_cell.size() != fine.num_pressure()) throw std::invalid_argument("refinement map does not match fine mesh");
  const ProlongationAdapter adapt(coarse, map);
  SelfConvergenceNorms out;
  out.velocity = std::sqrt(cell_quadrature_sum(fine.mesh(), [&](Index c, const Barycentric& l) {
    const Vec2 d = fine.element(c).eval(l, u_fine) - adapt.velocity(u_coarse, c, l);
    return dot(d, d);
  }));
  out.pressure = std::sqrt(cell_quadrature_sum(fine.mesh(), [&](Index c, const Barycentric& l) {
    const auto& v = p_fine.values[c];
    const double d = l[0] * v[0] + l[1] * v[1] + l[2] * v[2] - adapt.p1(p_coarse, c, l);
    return d * d;
  }));
  return out;
}

}  // namespace mixedwave
