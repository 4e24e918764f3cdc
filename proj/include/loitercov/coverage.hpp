#pragma once

#include <map>
#include <span>
#include <vector>

#include "loitercov/fleet.hpp"

namespace loitercov {

struct CoverageGrid {
  double resolution = 0.0;
  std::vector<Point2> samples;  // lattice points inside the polygon
};

CoverageGrid make_coverage_grid(const Polygon& poly, double resolution);

// True iff p is swept by the agent's footprint at least once per loiter
// cycle: the footprint disc of radius r_c sweeps the annulus
// max(0, r_l - r_c) <= d <= r_l + r_c around the loiter center. Dropped and
// transitioning agents cover nothing.
bool cycle_covered_region_test(const Point2& p, const UavState& agent,
                               const FleetConfig& config);

// E_k = (1 - f) * pi * r_l^2 - sum of pairwise overlaps with same-level
// loitering neighbors, clamped at zero.
double effective_coverage(const UavState& agent, std::span<const UavState> neighbors,
                          const Polygon& poly);

struct CoverageReport {
  double fraction_covered = 0.0;
  int total_samples = 0;
  int covered_samples = 0;
  std::vector<Point2> uncovered_samples;
  std::map<UavId, double> per_agent_effective;
  double total_overlap = 0.0;  // sum of same-level pairwise lens areas
  double mean_quality = 0.0;   // mean over covered samples of the best quality
};

// Evaluates the per-cycle coverage predicate over an interior sample grid.
// Resolution must be at most r_l_min / 10. Per-agent effective coverage and
// overlap totals are skipped when per_agent_details is false (they dominate
// the cost and are not needed for per-step metrics).
CoverageReport verify_full_coverage(std::span<const UavState> fleet, const Polygon& poly,
                                    double resolution, const FleetConfig& config,
                                    bool per_agent_details = true);

}  // namespace loitercov
