#pragma once

#include <random>
#include <vector>

#include "mixedwave/mesh.hpp"

namespace mixedwave::test {

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

inline TriMesh unit_square(int n, BoundaryTag tag = BoundaryTag::DirichletP) {
  return generate_rect_mesh({0.0, 0.0, 1.0, 1.0}, n, tag);
}

/// Jittered square mesh, so that no cell is a right isoceles triangle.
inline TriMesh skewed_square(int n, std::uint64_t seed = 7, BoundaryTag tag = BoundaryTag::DirichletP) {
  return perturb_interior_vertices(unit_square(n, tag), 0.2 / n, seed);
}

}  // namespace mixedwave::test
