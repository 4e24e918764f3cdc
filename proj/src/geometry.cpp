#include "loitercov/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace loitercov {

double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double wrap_signed(double a) {
  double w = std::fmod(a + kPi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w - kPi;
}

namespace {

double signed_area(const std::vector<Point2>& v) {
  double s = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % n];
    s += a.cross(b);
  }
  return 0.5 * s;
}

// Proper crossing of two open segments (shared endpoints do not count).
bool segments_cross(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2) {
  auto orient = [](const Point2& o, const Point2& a, const Point2& b) {
    double c = (a - o).cross(b - o);
    return (c > 0.0) - (c < 0.0);
  };
  int d1 = orient(q1, q2, p1);
  int d2 = orient(q1, q2, p2);
  int d3 = orient(p1, p2, q1);
  int d4 = orient(p1, p2, q2);
  return d1 != d2 && d3 != d4 && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

Polygon::Polygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  for (const Point2& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw InvalidPolygonError("polygon vertex is not finite");
  }
  if (vertices_.size() >= 2 && vertices_.front() == vertices_.back()) {
    vertices_.pop_back();
  }
  if (vertices_.size() < 3) throw InvalidPolygonError("polygon needs at least 3 vertices");
  for (std::size_t i = 0, n = vertices_.size(); i < n; ++i) {
    if (vertices_[i] == vertices_[(i + 1) % n])
      throw InvalidPolygonError("polygon has a repeated consecutive vertex");
  }
  area_ = std::abs(signed_area(vertices_));
  if (!(area_ > 0.0)) throw InvalidPolygonError("polygon has zero area");

  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_cross(vertices_[i], vertices_[(i + 1) % n], vertices_[j],
                         vertices_[(j + 1) % n]))
        throw InvalidPolygonError("polygon is self-intersecting");
    }
  }

  min_corner_ = max_corner_ = vertices_.front();
  for (const Point2& p : vertices_) {
    min_corner_.x = std::min(min_corner_.x, p.x);
    min_corner_.y = std::min(min_corner_.y, p.y);
    max_corner_.x = std::max(max_corner_.x, p.x);
    max_corner_.y = std::max(max_corner_.y, p.y);
  }
}

bool on_segment(const Point2& p, const Point2& a, const Point2& b) {
  double cross = (b - a).cross(p - a);
  if (cross != 0.0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool point_on_boundary(const Point2& p, const Polygon& poly) {
  const auto& v = poly.vertices();
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    if (on_segment(p, v[i], v[(i + 1) % n])) return true;
  }
  return false;
}

bool point_in_polygon(const Point2& p, const Polygon& poly) {
  if (point_on_boundary(p, poly)) return true;
  // Crossing-number test with half-open edge ranges; robust for points that
  // are not on the boundary (handled above).
  const auto& v = poly.vertices();
  bool inside = false;
  for (std::size_t i = 0, n = v.size(), j = n - 1; i < n; j = i++) {
    const Point2& a = v[i];
    const Point2& b = v[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      double x_int = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_int) inside = !inside;
    }
  }
  return inside;
}

double circle_overlap_area(const Circle& a, const Circle& b) {
  const double d = distance(a.center, b.center);
  const double r1 = a.radius, r2 = b.radius;
  if (d >= r1 + r2) return 0.0;
  const double rmin = std::min(r1, r2);
  if (d <= std::abs(r1 - r2)) return kPi * rmin * rmin;
  const double cos1 = std::clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0);
  const double cos2 = std::clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0);
  const double k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  return r1 * r1 * std::acos(cos1) + r2 * r2 * std::acos(cos2) -
         0.5 * std::sqrt(std::max(0.0, k));
}

double circle_fraction_outside(const Circle& c, const Polygon& poly, double resolution) {
  if (!(resolution > 0.0)) throw InvalidResolutionError("resolution must be positive");
  if (resolution > c.radius)
    throw InvalidResolutionError("resolution exceeds the circle radius");
  const double r = c.radius;
  const int cells = static_cast<int>(std::ceil(2.0 * r / resolution));
  long in_circle = 0;
  long outside = 0;
  for (int j = 0; j < cells; ++j) {
    const double y = c.center.y - r + (j + 0.5) * resolution;
    for (int i = 0; i < cells; ++i) {
      const double x = c.center.x - r + (i + 0.5) * resolution;
      const Point2 p{x, y};
      if ((p - c.center).norm_sq() > r * r) continue;
      ++in_circle;
      if (!point_in_polygon(p, poly)) ++outside;
    }
  }
  if (in_circle == 0) return 0.0;
  return static_cast<double>(outside) / static_cast<double>(in_circle);
}

std::array<Point2, 4> square_vertices(const Point2& center, double side) {
  if (!(side > 0.0)) throw InvalidConfigError("square side must be positive");
  const double h = 0.5 * side;
  return {Point2{center.x - h, center.y - h}, Point2{center.x + h, center.y - h},
          Point2{center.x + h, center.y + h}, Point2{center.x - h, center.y + h}};
}

double polygon_area_in_square(const Polygon& poly, const Point2& center, double side) {
  const double h = 0.5 * side;
  const double xmin = center.x - h, xmax = center.x + h;
  const double ymin = center.y - h, ymax = center.y + h;

  std::vector<Point2> subject = poly.vertices();
  // Clip successively against the four half-planes of the square.
  enum Edge { kLeft, kRight, kBottom, kTop };
  auto inside = [&](const Point2& p, Edge e) {
    switch (e) {
      case kLeft: return p.x >= xmin;
      case kRight: return p.x <= xmax;
      case kBottom: return p.y >= ymin;
      default: return p.y <= ymax;
    }
  };
  auto intersect = [&](const Point2& a, const Point2& b, Edge e) {
    double t;
    switch (e) {
      case kLeft: t = (xmin - a.x) / (b.x - a.x); break;
      case kRight: t = (xmax - a.x) / (b.x - a.x); break;
      case kBottom: t = (ymin - a.y) / (b.y - a.y); break;
      default: t = (ymax - a.y) / (b.y - a.y); break;
    }
    return Point2{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
  };

  for (Edge e : {kLeft, kRight, kBottom, kTop}) {
    std::vector<Point2> out;
    out.reserve(subject.size() + 4);
    for (std::size_t i = 0, n = subject.size(); i < n; ++i) {
      const Point2& cur = subject[i];
      const Point2& prev = subject[(i + n - 1) % n];
      const bool cur_in = inside(cur, e);
      const bool prev_in = inside(prev, e);
      if (cur_in) {
        if (!prev_in) out.push_back(intersect(prev, cur, e));
        out.push_back(cur);
      } else if (prev_in) {
        out.push_back(intersect(prev, cur, e));
      }
    }
    subject = std::move(out);
    if (subject.size() < 3) return 0.0;
  }
  return std::abs(signed_area(subject));
}

}  // namespace loitercov
