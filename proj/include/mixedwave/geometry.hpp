#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace mixedwave {

using Index = std::int32_t;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Rotation by +90 degrees.
constexpr Vec2 rot90(Vec2 a) { return {-a.y, a.x}; }

using Barycentric = std::array<double, 3>;

/// Twice the signed area of (a, b, c); positive for counterclockwise order.
constexpr double signed_area2(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

inline Vec2 from_barycentric(const std::array<Vec2, 3>& corners, const Barycentric& lambda) {
  return lambda[0] * corners[0] + lambda[1] * corners[1] + lambda[2] * corners[2];
}

inline Barycentric to_barycentric(const std::array<Vec2, 3>& corners, Vec2 x) {
  const double det = signed_area2(corners[0], corners[1], corners[2]);
  const double l1 = signed_area2(corners[0], x, corners[2]) / det;
  const double l2 = signed_area2(corners[0], corners[1], x) / det;
  return {1.0 - l1 - l2, l1, l2};
}

}  // namespace mixedwave
