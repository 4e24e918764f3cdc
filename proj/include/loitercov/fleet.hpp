#pragma once

#include <memory>

#include "loitercov/packing.hpp"

namespace loitercov {

using UavId = int;
inline constexpr UavId kNoUav = -1;

enum class UavMode { loitering, transitioning, dropped };

struct TransitionPlan;  // defined in dubins.hpp

// Altitude of a level, chosen so the coverage footprint radius at each level
// equals that level's loiter radius: h_i = r_l_i / tan(theta).
double altitude_for_level(int level, const FleetConfig& config);

// Instantaneous footprint radius h * tan(theta).
double coverage_radius(double altitude, double fov_half_angle);

// Sensing quality normalized to level 1: q_i = h_1 / h_i = 2^-(i-1).
double quality(int level, const FleetConfig& config);

// Shared phase reference for one altitude level: every loitering agent of the
// level carries phase phase_at(t) at time t.
struct LevelClock {
  int level = 1;
  double omega = 0.0;   // rad/s, = velocity / loiter radius
  double phase0 = 0.0;  // phase at t = 0

  double phase_at(double t) const { return wrap_angle(phase0 + omega * t); }
  double period() const { return kTwoPi / omega; }
};

LevelClock make_level_clock(int level, const FleetConfig& config);

// Pose on a counter-clockwise loiter circle at the given phase angle.
Pose3 loiter_pose(const Circle& circle, double phase, double altitude);

struct UavState {
  UavId id = kNoUav;
  UavMode mode = UavMode::loitering;
  int level = 1;
  double altitude = 0.0;
  SquareId assigned_square = kNoSquare;
  Circle loiter_circle;
  double phase = 0.0;  // [0, 2*pi)
  Pose3 position;
  double velocity = 0.0;
  // Immutable once planned; shared between fleet snapshots.
  std::shared_ptr<const TransitionPlan> transition;
};

// Advances a loitering agent by dt along its circle. Throws InvalidModeError
// for non-loitering agents.
UavState step_loiter(const UavState& state, const LevelClock& clock, double dt);

}  // namespace loitercov
