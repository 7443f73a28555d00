#include "mixedwave/quadrature.hpp"

#include <stdexcept>

namespace mixedwave {

namespace {

QuadRule make_vertex_rule() {
  return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {1.0 / 6, 1.0 / 6, 1.0 / 6}, 1};
}

QuadRule make_midpoint_rule() {
  return {{{0.5, 0.5, 0}, {0, 0.5, 0.5}, {0.5, 0, 0.5}}, {1.0 / 6, 1.0 / 6, 1.0 / 6}, 2};
}

// Dunavant's degree-6 rule, digits refined by Newton on the moment equations.
QuadRule make_high_order_rule() {
  QuadRule q;
  q.degree = 6;
  auto orbit3 = [&](double a, double w) {
    const double b = 0.5 * (1.0 - a);
    for (Barycentric p : {Barycentric{a, b, b}, Barycentric{b, a, b}, Barycentric{b, b, a}}) {
      q.points.push_back(p);
      q.weights.push_back(0.5 * w);
    }
  };
  orbit3(0.50142650965817915742, 0.11678627572637936603);
  orbit3(0.87382197101699554332, 0.050844906370206816921);
  const double a = 0.053145049844816947353, b = 0.31035245103378440542, c = 1.0 - a - b;
  const double w = 0.082851075618373575194;
  for (Barycentric p : {Barycentric{a, b, c}, Barycentric{a, c, b}, Barycentric{b, a, c}, Barycentric{b, c, a},
                        Barycentric{c, a, b}, Barycentric{c, b, a}}) {
    q.points.push_back(p);
    q.weights.push_back(0.5 * w);
  }
  return q;
}

}  // namespace

const QuadRule& quad_rule(QuadKind kind) {
  static const QuadRule vertex = make_vertex_rule();
  static const QuadRule midpoint = make_midpoint_rule();
  static const QuadRule high = make_high_order_rule();
  switch (kind) {
    case QuadKind::vertex:
      return vertex;
    case QuadKind::edge_midpoint:
      return midpoint;
    case QuadKind::high_order:
      return high;
  }
  throw std::invalid_argument("unknown quadrature kind");
}

const LineRule& gauss4() {
  static const LineRule rule = [] {
    const double x1 = 0.33998104358485626480, x2 = 0.86113631159405257522;
    const double w1 = 0.65214515486254614263, w2 = 0.34785484513745385737;
    LineRule r{};
    r.nodes = {0.5 * (1 - x2), 0.5 * (1 - x1), 0.5 * (1 + x1), 0.5 * (1 + x2)};
    r.weights = {0.5 * w2, 0.5 * w1, 0.5 * w1, 0.5 * w2};
    return r;
  }();
  return rule;
}

}  // namespace mixedwave
