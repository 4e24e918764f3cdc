#include "loitercov/fleet.hpp"

#include <cmath>

namespace loitercov {

double altitude_for_level(int level, const FleetConfig& config) {
  return loiter_radius_for_level(level, config.r_l_min) / std::tan(config.fov_half_angle);
}

double coverage_radius(double altitude, double fov_half_angle) {
  if (altitude < 0.0) throw InvalidConfigError("altitude must be non-negative");
  if (!(fov_half_angle > 0.0) || !(fov_half_angle < kPi / 2.0))
    throw InvalidConfigError("fov_half_angle must be in (0, pi/2)");
  return altitude * std::tan(fov_half_angle);
}

double quality(int level, const FleetConfig& config) {
  return altitude_for_level(1, config) / altitude_for_level(level, config);
}

LevelClock make_level_clock(int level, const FleetConfig& config) {
  LevelClock clock;
  clock.level = level;
  clock.omega = config.velocity / loiter_radius_for_level(level, config.r_l_min);
  clock.phase0 = 0.0;
  return clock;
}

Pose3 loiter_pose(const Circle& circle, double phase, double altitude) {
  Pose3 p;
  p.x = circle.center.x + circle.radius * std::cos(phase);
  p.y = circle.center.y + circle.radius * std::sin(phase);
  p.h = altitude;
  p.heading = wrap_angle(phase + kPi / 2.0);  // counter-clockwise tangent
  return p;
}

UavState step_loiter(const UavState& state, const LevelClock& clock, double dt) {
  if (state.mode != UavMode::loitering)
    throw InvalidModeError("step_loiter requires a loitering agent");
  UavState next = state;
  next.phase = wrap_angle(state.phase + clock.omega * dt);
  next.position = loiter_pose(state.loiter_circle, next.phase, state.altitude);
  return next;
}

}  // namespace loitercov
