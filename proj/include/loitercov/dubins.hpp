#pragma once

#include <span>
#include <string>
#include <vector>

#include "loitercov/fleet.hpp"

namespace loitercov {

enum class MotionKind { S, L, R, Hl, Hr, N };

char motion_kind_letter(MotionKind kind);  // 'S','L','R','l','r','N'
std::string motion_kind_name(MotionKind kind);

struct MotionPrimitive {
  MotionKind kind = MotionKind::N;
  double duration = 0.0;     // seconds
  double turn_radius = 0.0;  // meters, turning kinds only
  double climb_rate = 0.0;   // m/s vertical, helical kinds only
};

// A curvature-bounded path in the horizontal plane with optional helical
// climb segments. Horizontal speed is constant; climb adds a vertical
// component on top, so length integrates the full 3D speed.
struct DubinsPath3D {
  std::vector<MotionPrimitive> word;
  Pose3 start;
  Pose3 goal;
  double speed = 0.0;   // horizontal speed, m/s
  double length = 0.0;  // meters

  double duration() const;
  std::string word_string() const;  // e.g. "RSRN"
};

// Shortest planar path between two poses among the six candidate motion words
// {LSL, RSR, LSR, RSL, RLR, LRL}, each padded with a trailing N. Words listed
// in `denied` (with or without the trailing N) are excluded.
DubinsPath3D plan_dubins_2d(const Pose3& start, const Pose3& goal, double r_turn,
                            double speed, std::span<const std::string> denied = {});

Pose3 path_pose_at(const DubinsPath3D& path, double t);

// Poses at t = 0, dt, 2*dt, ..., plus the exact endpoint.
std::vector<Pose3> sample_path(const DubinsPath3D& path, double dt);

struct TransitionPlan {
  UavId uav = kNoUav;
  Pose3 break_off;
  double break_time = 0.0;
  Pose3 join_in;
  double join_time = 0.0;
  DubinsPath3D path;
  int target_level = 1;
  Circle target_circle;
  SquareId target_square = kNoSquare;
};

inline constexpr double kPhaseTolerance = 1e-6;  // rad, join-in synchronization

// Plans a synchronized transition from the agent's current loiter circle to
// the target circle: the agent keeps loitering until break_time, flies the
// path, and arrives exactly at the target level's clock phase. The break-off
// point is chosen to minimize path length subject to that constraint.
// Climb is distributed over the turning segments as helices; full loops are
// appended when the turning time cannot absorb the climb at max_climb_rate.
TransitionPlan plan_level_transition(const UavState& current, const Circle& target_circle,
                                     int target_level, const LevelClock& target_clock,
                                     double t_now, const FleetConfig& config,
                                     SquareId target_square = kNoSquare);

}  // namespace loitercov
