#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace dpkit {

using Index = std::int64_t;

/// A point (or vector) in the plane. One-dimensional meshes keep the second component at zero.
using Point = std::array<double, 2>;
using Vec2 = Point;

/// Barycentric coordinates on a reference simplex. Intervals use the first two entries.
using Barycentric = std::array<double, 3>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }
inline double distance(const Point& a, const Point& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }

/// Closed range [minus, plus] of a sampled scalar field.
struct Bounds {
  double minus = 0.0;
  double plus = 0.0;
};

}  // namespace dpkit
