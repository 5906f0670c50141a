#include "cellforce/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace cellforce {

double signed_polygon_area(std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

Point2 polygon_centroid(std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  double twice_area = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % n];
    const double c = a.x * b.y - b.x * a.y;
    twice_area += c;
    cx += (a.x + b.x) * c;
    cy += (a.y + b.y) * c;
  }
  return {cx / (3.0 * twice_area), cy / (3.0 * twice_area)};
}

bool point_in_polygon(std::span<const Point2> poly, const Point2& p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

double min_angle(const Point2& a, const Point2& b, const Point2& c) {
  const auto angle_at = [](const Point2& apex, const Point2& p, const Point2& q) {
    const Vec2 u = p - apex;
    const Vec2 v = q - apex;
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
  };
  return std::min({angle_at(a, b, c), angle_at(b, c, a), angle_at(c, a, b)});
}

}  // namespace cellforce
