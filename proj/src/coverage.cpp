#include "loitercov/coverage.hpp"

#include <algorithm>
#include <cmath>

namespace loitercov {

CoverageGrid make_coverage_grid(const Polygon& poly, double resolution) {
  if (!(resolution > 0.0)) throw InvalidResolutionError("resolution must be positive");
  CoverageGrid grid;
  grid.resolution = resolution;
  const Point2 lo = poly.min_corner();
  const Point2 hi = poly.max_corner();
  const int nx = static_cast<int>(std::ceil((hi.x - lo.x) / resolution));
  const int ny = static_cast<int>(std::ceil((hi.y - lo.y) / resolution));
  for (int j = 0; j < ny; ++j) {
    const double y = lo.y + (j + 0.5) * resolution;
    for (int i = 0; i < nx; ++i) {
      const double x = lo.x + (i + 0.5) * resolution;
      if (point_in_polygon({x, y}, poly)) grid.samples.push_back({x, y});
    }
  }
  return grid;
}

bool cycle_covered_region_test(const Point2& p, const UavState& agent,
                               const FleetConfig& config) {
  if (agent.mode != UavMode::loitering) return false;
  const double r_l = agent.loiter_circle.radius;
  const double r_c = coverage_radius(agent.altitude, config.fov_half_angle);
  const double d = distance(p, agent.loiter_circle.center);
  return d >= std::max(0.0, r_l - r_c) && d <= r_l + r_c;
}

double effective_coverage(const UavState& agent, std::span<const UavState> neighbors,
                          const Polygon& poly) {
  if (agent.mode != UavMode::loitering) return 0.0;
  const Circle& circle = agent.loiter_circle;
  const double f = circle_fraction_outside(circle, poly, circle.radius / 64.0);
  double e = (1.0 - f) * kPi * circle.radius * circle.radius;
  for (const UavState& nb : neighbors) {
    if (nb.id == agent.id || nb.mode != UavMode::loitering || nb.level != agent.level)
      continue;
    e -= circle_overlap_area(circle, nb.loiter_circle);
  }
  return std::max(0.0, e);
}

CoverageReport verify_full_coverage(std::span<const UavState> fleet, const Polygon& poly,
                                    double resolution, const FleetConfig& config,
                                    bool per_agent_details) {
  if (!(resolution > 0.0) || resolution > config.r_l_min / 10.0)
    throw InvalidResolutionError("coverage resolution must be at most r_l_min / 10");

  const CoverageGrid grid = make_coverage_grid(poly, resolution);
  CoverageReport report;
  report.total_samples = static_cast<int>(grid.samples.size());

  // Cache per-agent annulus bounds and qualities.
  struct AgentReach {
    const UavState* agent;
    double d_min_sq, d_max_sq, q;
  };
  std::vector<AgentReach> reach;
  for (const UavState& a : fleet) {
    if (a.mode != UavMode::loitering) continue;
    const double r_l = a.loiter_circle.radius;
    const double r_c = coverage_radius(a.altitude, config.fov_half_angle);
    const double d_min = std::max(0.0, r_l - r_c);
    const double d_max = r_l + r_c;
    reach.push_back({&a, d_min * d_min, d_max * d_max, quality(a.level, config)});
  }

  double quality_sum = 0.0;
  for (const Point2& p : grid.samples) {
    double best_q = 0.0;
    bool covered = false;
    for (const AgentReach& ar : reach) {
      const double d_sq = (p - ar.agent->loiter_circle.center).norm_sq();
      if (d_sq >= ar.d_min_sq && d_sq <= ar.d_max_sq) {
        covered = true;
        best_q = std::max(best_q, ar.q);
      }
    }
    if (covered) {
      ++report.covered_samples;
      quality_sum += best_q;
    } else {
      report.uncovered_samples.push_back(p);
    }
  }
  report.fraction_covered =
      report.total_samples == 0
          ? 0.0
          : static_cast<double>(report.covered_samples) / report.total_samples;
  report.mean_quality =
      report.covered_samples == 0 ? 0.0 : quality_sum / report.covered_samples;

  if (!per_agent_details) return report;

  for (const UavState& a : fleet) {
    if (a.mode != UavMode::loitering) continue;
    std::vector<UavState> neighbors;
    for (const UavState& b : fleet) {
      if (b.id == a.id || b.mode != UavMode::loitering || b.level != a.level) continue;
      if (distance(a.loiter_circle.center, b.loiter_circle.center) <
          a.loiter_circle.radius + b.loiter_circle.radius)
        neighbors.push_back(b);
    }
    report.per_agent_effective[a.id] = effective_coverage(a, neighbors, poly);
  }

  for (std::size_t i = 0; i < fleet.size(); ++i) {
    if (fleet[i].mode != UavMode::loitering) continue;
    for (std::size_t j = i + 1; j < fleet.size(); ++j) {
      if (fleet[j].mode != UavMode::loitering || fleet[j].level != fleet[i].level)
        continue;
      report.total_overlap +=
          circle_overlap_area(fleet[i].loiter_circle, fleet[j].loiter_circle);
    }
  }
  return report;
}

}  // namespace loitercov
