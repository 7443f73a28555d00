#include "mixedwave/assembly.hpp"

#include <algorithm>

namespace mixedwave {

namespace {

// integral over K of lambda_a lambda_b, by the edge-midpoint rule
double lambda_product(const Bdm1Element& el, int a, int b) {
  const auto& rule = quad_rule(QuadKind::edge_midpoint);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) s += rule.weights[q] * rule.points[q][a] * rule.points[q][b];
  return 2.0 * el.area * s;
}

void constrain_blocks(const DofMap& dofs, BlockDiagMatrix& m) {
  for (std::size_t b = 0; b < m.num_blocks(); ++b) {
    const int size = m.block_size(b);
    const Index o = m.block_begin(b);
    auto blk = m.block(b);
    for (int i = 0; i < size; ++i) {
      if (!dofs.constrained[o + i]) continue;
      for (int k = 0; k < size; ++k) blk[i * size + k] = blk[k * size + i] = 0.0;
      blk[i * size + i] = 1.0;
    }
  }
}

CsrMatrix rows_to_csr(std::size_t cols, std::vector<std::vector<std::pair<Index, double>>>& rows) {
  std::vector<Index> row_ptr(rows.size() + 1, 0), col;
  std::vector<double> val;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto& row = rows[r];
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0 && row[k].first == row[k - 1].first) {
        val.back() += row[k].second;
        continue;
      }
      col.push_back(row[k].first);
      val.push_back(row[k].second);
    }
    row_ptr[r + 1] = static_cast<Index>(col.size());
  }
  return CsrMatrix(rows.size(), cols, std::move(row_ptr), std::move(col), std::move(val));
}

}  // namespace

BlockDiagMatrix assemble_lumped_mass(const Bdm1Space& space, bool apply_constraints) {
  const auto& mesh = space.mesh();
  const auto& dofs = space.dofs();
  BlockDiagMatrix m(dofs.block_offsets);
  const auto nv = static_cast<std::ptrdiff_t>(mesh.num_vertices());
  std::vector<std::span<double>> blocks(mesh.num_vertices());
  for (std::ptrdiff_t v = 0; v < nv; ++v) blocks[v] = m.block(v);
#pragma omp parallel for schedule(dynamic, 512)
  for (std::ptrdiff_t v = 0; v < nv; ++v) {
    const int size = dofs.block_size(static_cast<Index>(v));
    const Index o = dofs.block_begin(static_cast<Index>(v));
    auto blk = blocks[v];
    for (Index c : mesh.vertex_cells(static_cast<Index>(v))) {
      const auto& el = space.element(c);
      const auto& cell = mesh.cells()[c];
      const int a = cell[0] == v ? 0 : (cell[1] == v ? 1 : 2);
      const double weight = el.area / 3.0;
      for (int j = 0; j < 6; ++j) {
        if (el.vertex[j] != a) continue;
        for (int k = 0; k < 6; ++k) {
          if (el.vertex[k] != a) continue;
          blk[(el.dof[j] - o) * size + (el.dof[k] - o)] += weight * dot(el.w[j], el.w[k]);
        }
      }
    }
  }
  if (apply_constraints) constrain_blocks(dofs, m);
  m.factorize();
  return m;
}

CsrMatrix assemble_exact_mass(const Bdm1Space& space) {
  const auto& mesh = space.mesh();
  const auto& dofs = space.dofs();
  const auto n = static_cast<std::ptrdiff_t>(dofs.num_velocity());
  std::vector<std::vector<std::pair<Index, double>>> rows(n);
#pragma omp parallel for schedule(dynamic, 512)
  for (std::ptrdiff_t d = 0; d < n; ++d) {
    for (Index c : mesh.edge_cells(dofs.dof_edge[d])) {
      if (c < 0) continue;
      const auto& el = space.element(c);
      const int j = static_cast<int>(std::find(el.dof.begin(), el.dof.end(), d) - el.dof.begin());
      for (int k = 0; k < 6; ++k)
        rows[d].emplace_back(el.dof[k], lambda_product(el, el.vertex[j], el.vertex[k]) * dot(el.w[j], el.w[k]));
    }
  }
  return rows_to_csr(dofs.num_velocity(), rows);
}

CsrMatrix assemble_div(const Bdm1Space& space) {
  const auto nc = static_cast<std::ptrdiff_t>(space.num_pressure());
  std::vector<std::vector<std::pair<Index, double>>> rows(nc);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < nc; ++c) {
    const auto& el = space.element(static_cast<Index>(c));
    for (int j = 0; j < 6; ++j) rows[c].emplace_back(el.dof[j], el.area * el.divergence(j));
  }
  return rows_to_csr(space.num_velocity(), rows);
}

std::vector<double> pressure_mass(const TriMesh& mesh) { return mesh.areas(); }

std::vector<double> assemble_boundary_load(const Bdm1Space& space, const BoundaryData& p, double t) {
  const auto& mesh = space.mesh();
  const auto& g = gauss4();
  std::vector<double> load(space.num_velocity(), 0.0);
  for (Index e : mesh.boundary_edges()) {
    if (mesh.boundary_tag(e) != BoundaryTag::DirichletP) continue;
    const auto& edge = mesh.edges()[e];
    const Index c = mesh.edge_cells(e)[0];
    const auto& ce = mesh.cell_edges()[c];
    const int sign = ce.sign[std::find(ce.edge.begin(), ce.edge.end(), e) - ce.edge.begin()];
    const Vec2 a = mesh.vertex(edge.v[0]), b = mesh.vertex(edge.v[1]);
    double i0 = 0.0, i1 = 0.0;
    for (int q = 0; q < 4; ++q) {
      const double s = g.nodes[q];
      const double value = p(a + s * (b - a), t);
      i0 += g.weights[q] * value * (1.0 - s);
      i1 += g.weights[q] * value * s;
    }
    // n . phi = sign * lambda_endpoint along the edge
    load[space.dofs().edge_dofs[e][0]] -= sign * edge.length * i0;
    load[space.dofs().edge_dofs[e][1]] -= sign * edge.length * i1;
  }
  apply_normal_bc(space.dofs(), load);
  return load;
}

CsrMatrix constrain_velocity_matrix(const CsrMatrix& m, const DofMap& dofs) {
  std::vector<Triplet> t;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (dofs.constrained[r]) {
      t.push_back({static_cast<Index>(r), static_cast<Index>(r), 1.0});
      continue;
    }
    for (Index k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k)
      if (!dofs.constrained[m.col_index()[k]]) t.push_back({static_cast<Index>(r), m.col_index()[k], m.values()[k]});
  }
  return CsrMatrix::from_triplets(m.rows(), m.cols(), std::move(t));
}

CsrMatrix drop_constrained_columns(const CsrMatrix& b, const DofMap& dofs) {
  std::vector<Triplet> t;
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (Index k = b.row_ptr()[r]; k < b.row_ptr()[r + 1]; ++k)
      if (!dofs.constrained[b.col_index()[k]]) t.push_back({static_cast<Index>(r), b.col_index()[k], b.values()[k]});
  return CsrMatrix::from_triplets(b.rows(), b.cols(), std::move(t));
}

void apply_normal_bc(const DofMap& dofs, std::span<double> field) {
  for (std::size_t d = 0; d < dofs.num_velocity(); ++d)
    if (dofs.constrained[d]) field[d] = 0.0;
}

namespace serial {

BlockDiagMatrix assemble_lumped_mass(const Bdm1Space& space, bool apply_constraints) {
  const auto& dofs = space.dofs();
  BlockDiagMatrix m(dofs.block_offsets);
  for (std::size_t c = 0; c < space.num_pressure(); ++c) {
    const auto& el = space.element(static_cast<Index>(c));
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) {
        if (el.vertex[j] != el.vertex[k]) continue;
        const Index v = dofs.dof_vertex[el.dof[j]];
        const Index o = dofs.block_begin(v);
        const int size = dofs.block_size(v);
        m.block(v)[(el.dof[j] - o) * size + (el.dof[k] - o)] += el.area / 3.0 * dot(el.w[j], el.w[k]);
      }
  }
  if (apply_constraints) constrain_blocks(dofs, m);
  m.factorize();
  return m;
}

CsrMatrix assemble_exact_mass(const Bdm1Space& space) {
  std::vector<Triplet> t;
  for (std::size_t c = 0; c < space.num_pressure(); ++c) {
    const auto& el = space.element(static_cast<Index>(c));
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k)
        t.push_back({el.dof[j], el.dof[k], lambda_product(el, el.vertex[j], el.vertex[k]) * dot(el.w[j], el.w[k])});
  }
  return CsrMatrix::from_triplets(space.num_velocity(), space.num_velocity(), std::move(t));
}

CsrMatrix assemble_div(const Bdm1Space& space) {
  std::vector<Triplet> t;
  for (std::size_t c = 0; c < space.num_pressure(); ++c) {
    const auto& el = space.element(static_cast<Index>(c));
    for (int j = 0; j < 6; ++j) t.push_back({static_cast<Index>(c), el.dof[j], el.area * el.divergence(j)});
  }
  return CsrMatrix::from_triplets(space.num_pressure(), space.num_velocity(), std::move(t));
}

}  // namespace serial

}  // namespace mixedwave
