#pragma once

#include <array>
#include <vector>

#include "mixedwave/geometry.hpp"

namespace mixedwave {

enum class QuadKind { vertex, edge_midpoint, high_order };

/// Triangle rule in barycentric coordinates. Weights sum to 1/2, the area
/// of the reference triangle; scale by 2|K| on a physical cell.
struct QuadRule {
  std::vector<Barycentric> points;
  std::vector<double> weights;
  int degree = 0;
};

/// vertex: 3 points, degree 1 (the mass-lumping rule).
/// edge_midpoint: 3 points, degree 2.
/// high_order: symmetric 12-point rule, degree 6.
const QuadRule& quad_rule(QuadKind kind);

/// Gauss-Legendre rule on [0, 1]; weights sum to 1.
struct LineRule {
  std::array<double, 4> nodes;
  std::array<double, 4> weights;
  static constexpr int degree = 7;
};

const LineRule& gauss4();

}  // namespace mixedwave
