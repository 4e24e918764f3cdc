#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace loitercov::oracles {

double mc_circle_overlap(const Circle& a, const Circle& b, long samples,
                         std::uint64_t seed) {
  const double xmin = std::max(a.center.x - a.radius, b.center.x - b.radius);
  const double xmax = std::min(a.center.x + a.radius, b.center.x + b.radius);
  const double ymin = std::max(a.center.y - a.radius, b.center.y - b.radius);
  const double ymax = std::min(a.center.y + a.radius, b.center.y + b.radius);
  if (xmin >= xmax || ymin >= ymax) return 0.0;
  std::mt19937_64 rng(seed);
  long hits = 0;
  const double ra2 = a.radius * a.radius, rb2 = b.radius * b.radius;
  for (long i = 0; i < samples; ++i) {
    const Point2 p{uniform(rng, xmin, xmax), uniform(rng, ymin, ymax)};
    if ((p - a.center).norm_sq() <= ra2 && (p - b.center).norm_sq() <= rb2) ++hits;
  }
  return (xmax - xmin) * (ymax - ymin) * static_cast<double>(hits) / samples;
}

double mc_fraction_outside(const Circle& c, const Polygon& poly, long samples,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  long in_circle = 0, outside = 0;
  const double r2 = c.radius * c.radius;
  for (long i = 0; i < samples; ++i) {
    const Point2 p{uniform(rng, c.center.x - c.radius, c.center.x + c.radius),
                   uniform(rng, c.center.y - c.radius, c.center.y + c.radius)};
    if ((p - c.center).norm_sq() > r2) continue;
    ++in_circle;
    if (!point_in_polygon(p, poly)) ++outside;
  }
  return in_circle == 0 ? 0.0 : static_cast<double>(outside) / in_circle;
}

RasterFill::RasterFill(const Polygon& poly, double cell) : cell_(cell) {
  const Point2 lo = poly.min_corner();
  const Point2 hi = poly.max_corner();
  origin_ = {lo.x - cell, lo.y - cell};
  nx_ = static_cast<int>(std::ceil((hi.x - origin_.x) / cell)) + 1;
  ny_ = static_cast<int>(std::ceil((hi.y - origin_.y) / cell)) + 1;
  filled_.assign(static_cast<std::size_t>(nx_) * ny_, 0);

  const auto& v = poly.vertices();
  std::vector<double> xs;
  for (int j = 0; j < ny_; ++j) {
    const double y = origin_.y + (j + 0.5) * cell;
    xs.clear();
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
      const Point2& a = v[i];
      const Point2& b = v[(i + 1) % n];
      if ((a.y > y) == (b.y > y)) continue;
      xs.push_back(a.x + (b.x - a.x) * (y - a.y) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      int i0 = static_cast<int>(std::ceil((xs[k] - origin_.x) / cell - 0.5));
      int i1 = static_cast<int>(std::floor((xs[k + 1] - origin_.x) / cell - 0.5));
      i0 = std::max(i0, 0);
      i1 = std::min(i1, nx_ - 1);
      for (int i = i0; i <= i1; ++i)
        filled_[static_cast<std::size_t>(j) * nx_ + i] = 1;
    }
  }
}

bool RasterFill::inside(const Point2& p) const {
  const int i = static_cast<int>(std::floor((p.x - origin_.x) / cell_));
  const int j = static_cast<int>(std::floor((p.y - origin_.y) / cell_));
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return false;
  return filled_[static_cast<std::size_t>(j) * nx_ + i] != 0;
}

double distance_to_boundary(const Point2& p, const Polygon& poly) {
  const auto& v = poly.vertices();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % n];
    const Point2 ab = b - a;
    const double t = std::clamp(ab.dot(p - a) / ab.norm_sq(), 0.0, 1.0);
    best = std::min(best, distance(p, a + ab * t));
  }
  return best;
}

namespace {

Point2 unit(double a) { return {std::cos(a), std::sin(a)}; }

// Forward pose advance, written independently of the library's sampler.
Pose3 fwd_arc(const Pose3& p, double angle, bool left, double r) {
  const double side = left ? 1.0 : -1.0;
  const Point2 c = p.position() + unit(p.heading + side * kPi / 2.0) * r;
  const double a0 = std::atan2(p.y - c.y, p.x - c.x);
  const double a1 = a0 + side * angle;
  Pose3 out = p;
  out.x = c.x + r * std::cos(a1);
  out.y = c.y + r * std::sin(a1);
  out.heading = wrap_angle(p.heading + side * angle);
  return out;
}

Pose3 fwd_straight(const Pose3& p, double len) {
  Pose3 out = p;
  out.x += len * std::cos(p.heading);
  out.y += len * std::sin(p.heading);
  return out;
}

// Pose q such that a forward arc of the given angle from q reaches `end`.
Pose3 back_arc(const Pose3& end, double angle, bool left, double r) {
  const double side = left ? 1.0 : -1.0;
  const Point2 c = end.position() + unit(end.heading + side * kPi / 2.0) * r;
  const double a1 = std::atan2(end.y - c.y, end.x - c.x);
  const double a0 = a1 - side * angle;
  Pose3 out = end;
  out.x = c.x + r * std::cos(a0);
  out.y = c.y + r * std::sin(a0);
  out.heading = wrap_angle(end.heading - side * angle);
  return out;
}

struct WordCandidate {
  double length;
  std::string word;
};

bool check_reconstruction(const Pose3& start, const Pose3& goal, double r,
                          const std::string& word, double t, double s, double q) {
  Pose3 p = start;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const char k = word[i];
    const double val = i == 0 ? t : (i == 1 ? s : q);
    if (k == 'S')
      p = fwd_straight(p, val);
    else
      p = fwd_arc(p, val, k == 'L', r);
  }
  const double scale = 1.0 + r + distance(start.position(), goal.position());
  return distance(p.position(), goal.position()) <= 1e-8 * scale &&
         std::abs(wrap_signed(p.heading - goal.heading)) <= 1e-8;
}

void csc_candidates(std::vector<WordCandidate>& out, const Pose3& start,
                    const Pose3& goal, double r, bool first_left, bool last_left) {
  const std::string word = std::string(1, first_left ? 'L' : 'R') + "S" +
                           (last_left ? 'L' : 'R');
  auto q_of = [&](double t) {
    const double h1 = wrap_angle(start.heading + (first_left ? t : -t));
    // Heading is preserved along S; the final arc must start from h1.
    return last_left ? wrap_angle(goal.heading - h1) : wrap_angle(h1 - goal.heading);
  };
  auto residual = [&](double t) {
    const double q = q_of(t);
    const Pose3 p1 = fwd_arc(start, t, first_left, r);
    const Pose3 p2 = back_arc(goal, q, last_left, r);
    const Point2 d = p2.position() - p1.position();
    return unit(p1.heading).cross(d);
  };
  auto emit = [&](double t) {
    const double q = q_of(t);
    const Pose3 p1 = fwd_arc(start, t, first_left, r);
    const Pose3 p2 = back_arc(goal, q, last_left, r);
    const double s = unit(p1.heading).dot(p2.position() - p1.position());
    if (s < -1e-9) return;
    if (!check_reconstruction(start, goal, r, word, t, std::max(0.0, s), q)) return;
    out.push_back({r * (t + q) + std::max(0.0, s), word});
  };
  constexpr int kGrid = 4096;
  double prev = residual(0.0);
  emit(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double t = kTwoPi * i / kGrid;
    const double cur = residual(t);
    if ((prev <= 0.0) != (cur <= 0.0)) {
      double lo = kTwoPi * (i - 1) / kGrid, hi = t, flo = prev;
      for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = residual(mid);
        if ((fm <= 0.0) == (flo <= 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      emit(0.5 * (lo + hi));
    }
    prev = cur;
  }
}

void ccc_candidates(std::vector<WordCandidate>& out, const Pose3& start,
                    const Pose3& goal, double r, bool outer_left) {
  const std::string word = outer_left ? "LRL" : "RLR";
  const Point2 cb =
      goal.position() + unit(goal.heading + (outer_left ? 1.0 : -1.0) * kPi / 2.0) * r;
  auto middle_center = [&](double t) {
    const Pose3 p1 = fwd_arc(start, t, outer_left, r);
    return p1.position() + unit(p1.heading + (outer_left ? -1.0 : 1.0) * kPi / 2.0) * r;
  };
  auto residual = [&](double t) { return distance(middle_center(t), cb) - 2.0 * r; };
  auto emit = [&](double t) {
    const Pose3 p1 = fwd_arc(start, t, outer_left, r);
    const Point2 cm = middle_center(t);
    const Point2 t2 = (cm + cb) * 0.5;
    const double a1m = std::atan2(p1.y - cm.y, p1.x - cm.x);
    const double a2m = std::atan2(t2.y - cm.y, t2.x - cm.x);
    const double p = outer_left ? wrap_angle(a1m - a2m) : wrap_angle(a2m - a1m);
    const double a2 = std::atan2(t2.y - cb.y, t2.x - cb.x);
    const double ag = std::atan2(goal.y - cb.y, goal.x - cb.x);
    const double q = outer_left ? wrap_angle(ag - a2) : wrap_angle(a2 - ag);
    if (!check_reconstruction(start, goal, r, word, t, p, q)) return;
    out.push_back({r * (t + p + q), word});
  };
  constexpr int kGrid = 4096;
  double prev = residual(0.0);
  if (std::abs(prev) < 1e-12) emit(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double t = kTwoPi * i / kGrid;
    const double cur = residual(t);
    if ((prev <= 0.0) != (cur <= 0.0)) {
      double lo = kTwoPi * (i - 1) / kGrid, hi = t, flo = prev;
      for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = residual(mid);
        if ((fm <= 0.0) == (flo <= 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      emit(0.5 * (lo + hi));
    }
    prev = cur;
  }
}

}  // namespace

std::optional<OracleDubins> dubins_word_oracle(const Pose3& start, const Pose3& goal,
                                               double r_turn) {
  std::vector<WordCandidate> candidates;
  csc_candidates(candidates, start, goal, r_turn, true, true);    // LSL
  csc_candidates(candidates, start, goal, r_turn, false, false);  // RSR
  csc_candidates(candidates, start, goal, r_turn, true, false);   // LSR
  csc_candidates(candidates, start, goal, r_turn, false, true);   // RSL
  ccc_candidates(candidates, start, goal, r_turn, false);         // RLR
  ccc_candidates(candidates, start, goal, r_turn, true);          // LRL
  if (candidates.empty()) return std::nullopt;
  const auto best = std::min_element(
      candidates.begin(), candidates.end(),
      [](const WordCandidate& a, const WordCandidate& b) { return a.length < b.length; });
  return OracleDubins{best->length, best->word};
}

bool swept_footprint_covers(const Point2& p, const Circle& loiter, double r_c,
                            int steps_per_cycle) {
  for (int i = 0; i < steps_per_cycle; ++i) {
    const double phi = kTwoPi * i / steps_per_cycle;
    const Point2 fp = loiter.center + unit(phi) * loiter.radius;
    if (distance(p, fp) <= r_c) return true;
  }
  return false;
}

Polygon random_star_polygon(std::mt19937_64& rng, Point2 center, double r_min,
                            double r_max, int min_vertices, int max_vertices) {
  const int n =
      min_vertices + static_cast<int>(rng() % static_cast<std::uint64_t>(
                                          max_vertices - min_vertices + 1));
  std::vector<double> angles;
  angles.reserve(n);
  for (int i = 0; i < n; ++i) angles.push_back(uniform(rng, 0.0, kTwoPi));
  std::sort(angles.begin(), angles.end());
  for (int i = 1; i < n; ++i) {
    if (angles[i] - angles[i - 1] < 1e-3) angles[i] = angles[i - 1] + 1e-3;
  }
  std::vector<Point2> vertices;
  vertices.reserve(n);
  for (double a : angles) {
    const double rad = uniform(rng, r_min, r_max);
    vertices.push_back(center + unit(a) * rad);
  }
  return Polygon(std::move(vertices));
}

}  // namespace loitercov::oracles
