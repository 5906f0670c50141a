#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace cellforce {

/// Position or displacement in the plane (µm).
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2& operator+=(const Point2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Point2& operator-=(const Point2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend bool operator==(const Point2&, const Point2&) = default;
};

using Vec2 = Point2;

inline Point2 operator+(Point2 a, const Point2& b) { return a += b; }
inline Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
inline Point2 operator-(const Point2& a) { return {-a.x, -a.y}; }
inline Point2 operator*(double s, const Point2& a) { return {s * a.x, s * a.y}; }
inline Point2 operator*(const Point2& a, double s) { return {s * a.x, s * a.y}; }
inline Point2 operator/(const Point2& a, double s) { return {a.x / s, a.y / s}; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }
inline Point2 midpoint(const Point2& a, const Point2& b) {
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

/// Twice the signed area of triangle (a, b, c); positive when counterclockwise.
inline double orient2d(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

inline double signed_triangle_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * orient2d(a, b, c);
}

/// Signed polygon area (positive for counterclockwise order).
double signed_polygon_area(std::span<const Point2> poly);

/// Area-weighted centroid of a simple polygon.
Point2 polygon_centroid(std::span<const Point2> poly);

/// Even-odd point-in-polygon test; points on the boundary are unspecified.
bool point_in_polygon(std::span<const Point2> poly, const Point2& p);

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b);

/// Smallest interior angle of a triangle, in radians.
double min_angle(const Point2& a, const Point2& b, const Point2& c);

}  // namespace cellforce
