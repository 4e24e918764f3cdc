#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "loitercov/errors.hpp"

namespace loitercov {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Wraps an angle into [0, 2*pi).
double wrap_angle(double a);

// Wraps an angle into (-pi, pi].
double wrap_signed(double a);

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Point2& o) const = default;
  double dot(const Point2& o) const { return x * o.x + y * o.y; }
  double cross(const Point2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }
};

inline double distance(const Point2& a, const Point2& b) { return (a - b).norm(); }

// Position, altitude and heading of an airborne agent. Heading is kept in
// [0, 2*pi).
struct Pose3 {
  double x = 0.0;
  double y = 0.0;
  double h = 0.0;
  double heading = 0.0;

  Point2 position() const { return {x, y}; }
};

struct Circle {
  Point2 center;
  double radius = 0.0;

  Circle() = default;
  Circle(Point2 center, double radius) : center(center), radius(radius) {
    if (!(radius > 0.0)) throw InvalidConfigError("circle radius must be positive");
  }
};

// Simple polygon over a closed vertex loop. An explicit closing vertex
// (last == first) is dropped on construction; the loop is closed implicitly.
class Polygon {
 public:
  explicit Polygon(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  double area() const { return area_; }
  Point2 min_corner() const { return min_corner_; }
  Point2 max_corner() const { return max_corner_; }

 private:
  std::vector<Point2> vertices_;
  double area_ = 0.0;
  Point2 min_corner_;
  Point2 max_corner_;
};

// True iff p lies on the closed segment [a, b].
bool on_segment(const Point2& p, const Point2& a, const Point2& b);

// Boundary-inclusive containment test (points on an edge count as inside).
bool point_in_polygon(const Point2& p, const Polygon& poly);

bool point_on_boundary(const Point2& p, const Polygon& poly);

// Exact lens area of two intersecting discs. Zero when separated, area of the
// smaller disc when one contains the other.
double circle_overlap_area(const Circle& a, const Circle& b);

// Fraction of the disc's area lying outside the polygon, estimated on a
// deterministic stratified grid of the given cell size. The result is exact
// complement of the inside fraction by construction.
double circle_fraction_outside(const Circle& c, const Polygon& poly, double resolution);

// Axis-aligned square corners in counter-clockwise order starting at the
// (min x, min y) corner.
std::array<Point2, 4> square_vertices(const Point2& center, double side);

// Area of the polygon clipped to the axis-aligned square (Sutherland-Hodgman).
double polygon_area_in_square(const Polygon& poly, const Point2& center, double side);

}  // namespace loitercov
