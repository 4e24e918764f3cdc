#pragma once

#include <array>
#include <string>
#include <vector>

#include "loitercov/geometry.hpp"

namespace loitercov {

// Turning-radius formula selector. The default follows the published form
// v^2 * psi / g; "coordinated" is the conventional coordinated-turn radius
// v^2 / (g * tan(psi)).
enum class TurnRadiusModel { paper, coordinated };

// Square classification rule. "paper" keeps a square iff at least one of its
// vertices lies inside the area (boundary inclusive); "robust" keeps a square
// iff its overlap with the area has positive measure.
enum class Classification { paper, robust };

// Bounding-square anchoring. "per_axis" anchors at (min x, min y) of the area;
// "scalar" applies min(min x, min y) to both axes.
enum class AnchorMode { per_axis, scalar };

double min_turn_radius(double velocity, double psi_max, double g);
double min_turn_radius_coordinated(double velocity, double psi_max, double g);

// Loiter radius doubles per level: 2^(level-1) * r_l_min, level in 1..4.
double loiter_radius_for_level(int level, double r_l_min);

inline constexpr int kMaxHierarchyLevels = 4;

struct FleetConfig {
  double r_l_min = 0.0;                 // minimum loiter radius, meters
  double fov_half_angle = kPi / 4.0;    // sensor half-angle, radians
  double velocity = 0.0;                // cruise speed, m/s
  double psi_max = 0.0;                 // max bank angle, radians
  double g = 9.81;
  double r_com = 0.0;                   // communication radius, meters
  int max_level = kMaxHierarchyLevels;  // highest altitude level recovery may use
  double max_climb_rate = 5.0;          // m/s, vertical
  TurnRadiusModel turn_radius_model = TurnRadiusModel::paper;
  std::vector<std::string> denied_words;  // Dubins motion words to exclude

  double min_turn() const;
  double r_l_max() const { return loiter_radius_for_level(max_level, r_l_min); }
  double min_r_com() const { return std::sqrt(2.0) * r_l_max(); }

  // Throws InvalidConfigError on any violated bound.
  void validate() const;
};

using SquareId = int;
inline constexpr SquareId kNoSquare = -1;

struct PackSquare {
  SquareId id = kNoSquare;
  int level = 0;  // 1 = base (smallest), kMaxHierarchyLevels = largest
  Point2 center;
  double side = 0.0;
  SquareId parent = kNoSquare;
  std::array<SquareId, 4> children{kNoSquare, kNoSquare, kNoSquare, kNoSquare};
  bool inside = false;
  int vertex_inside_count = 0;

  Circle loiter_circle() const { return Circle(center, side); }
};

struct BoundingSquare {
  Point2 min_corner;
  double side = 0.0;
};

struct PackingOptions {
  Classification classification = Classification::paper;
  AnchorMode anchor = AnchorMode::per_axis;
};

// The full 4-level square hierarchy over the bounding square, every square
// classified against the area polygon. Ids are assigned top-down, row-major
// within a level, so identical inputs always produce identical trees.
class Packing {
 public:
  Packing(FleetConfig config, PackingOptions options, BoundingSquare bounding,
          std::vector<PackSquare> squares);

  const FleetConfig& config() const { return config_; }
  const PackingOptions& options() const { return options_; }
  const BoundingSquare& bounding() const { return bounding_; }
  const std::vector<PackSquare>& squares() const { return squares_; }
  const PackSquare& square(SquareId id) const;
  const std::vector<SquareId>& base_squares() const { return base_squares_; }

  std::vector<SquareId> inside_squares(int level) const;

  // Parent of the square; throws InvalidConfigError at the top level.
  SquareId super_square_of(SquareId id) const;

  // Inside-classified children of the square's parent (the square included
  // when it is itself inside). Throws at the top level.
  std::vector<SquareId> sibling_group(SquareId id) const;

 private:
  FleetConfig config_;
  PackingOptions options_;
  BoundingSquare bounding_;
  std::vector<PackSquare> squares_;
  std::vector<SquareId> base_squares_;
};

Packing build_packing(const Polygon& poly, const FleetConfig& config,
                      const PackingOptions& options = {});

}  // namespace loitercov
