#include "loitercov/dubins.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace loitercov {

char motion_kind_letter(MotionKind kind) {
  switch (kind) {
    case MotionKind::S: return 'S';
    case MotionKind::L: return 'L';
    case MotionKind::R: return 'R';
    case MotionKind::Hl: return 'l';
    case MotionKind::Hr: return 'r';
    default: return 'N';
  }
}

std::string motion_kind_name(MotionKind kind) {
  switch (kind) {
    case MotionKind::S: return "S";
    case MotionKind::L: return "L";
    case MotionKind::R: return "R";
    case MotionKind::Hl: return "Hl";
    case MotionKind::Hr: return "Hr";
    default: return "N";
  }
}

double DubinsPath3D::duration() const {
  double t = 0.0;
  for (const MotionPrimitive& m : word) t += m.duration;
  return t;
}

std::string DubinsPath3D::word_string() const {
  std::string s;
  for (const MotionPrimitive& m : word) {
    switch (m.kind) {
      case MotionKind::S: s += 'S'; break;
      case MotionKind::L: s += 'L'; break;
      case MotionKind::R: s += 'R'; break;
      case MotionKind::Hl: s += "Hl"; break;
      case MotionKind::Hr: s += "Hr"; break;
      default: s += 'N'; break;
    }
  }
  return s;
}

namespace {

constexpr double kGeomTol = 1e-9;

struct Segment {
  MotionKind kind;
  double value;  // arc angle (rad) for L/R, length (m) for S
};

struct Candidate {
  const char* name;
  std::vector<Segment> segs;
  double length = std::numeric_limits<double>::infinity();
};

Point2 unit(double a) { return {std::cos(a), std::sin(a)}; }

Point2 left_center(const Pose3& p, double r) {
  return p.position() + unit(p.heading + kPi / 2.0) * r;
}

Point2 right_center(const Pose3& p, double r) {
  return p.position() + unit(p.heading - kPi / 2.0) * r;
}

// Advances a planar pose through one segment of the given turn radius.
Pose3 advance(const Pose3& p, const Segment& s, double r) {
  Pose3 out = p;
  switch (s.kind) {
    case MotionKind::S:
      out.x += s.value * std::cos(p.heading);
      out.y += s.value * std::sin(p.heading);
      break;
    case MotionKind::L: {
      const Point2 c = left_center(p, r);
      const double a0 = p.heading - kPi / 2.0;
      const double a1 = a0 + s.value;
      out.x = c.x + r * std::cos(a1);
      out.y = c.y + r * std::sin(a1);
      out.heading = wrap_angle(p.heading + s.value);
      break;
    }
    case MotionKind::R: {
      const Point2 c = right_center(p, r);
      const double a0 = p.heading + kPi / 2.0;
      const double a1 = a0 - s.value;
      out.x = c.x + r * std::cos(a1);
      out.y = c.y + r * std::sin(a1);
      out.heading = wrap_angle(p.heading - s.value);
      break;
    }
    default:
      break;
  }
  return out;
}

double candidate_length(const std::vector<Segment>& segs, double r) {
  double len = 0.0;
  for (const Segment& s : segs) len += s.kind == MotionKind::S ? s.value : s.value * r;
  return len;
}

bool reconstructs_goal(const Pose3& start, const std::vector<Segment>& segs, double r,
                       const Pose3& goal, double scale) {
  Pose3 p = start;
  for (const Segment& s : segs) p = advance(p, s, r);
  const double pos_err = distance(p.position(), goal.position());
  const double hdg_err = std::abs(wrap_signed(p.heading - goal.heading));
  return pos_err <= kGeomTol * scale && hdg_err <= 1e-9;
}

void try_csc_outer(std::vector<Candidate>& out, const char* name, bool left,
                   const Pose3& start, const Pose3& goal, double r) {
  const Point2 ca = left ? left_center(start, r) : right_center(start, r);
  const Point2 cb = left ? left_center(goal, r) : right_center(goal, r);
  const Point2 d = cb - ca;
  const double dist = d.norm();
  Candidate cand;
  cand.name = name;
  const MotionKind turn = left ? MotionKind::L : MotionKind::R;
  if (dist < kGeomTol) {
    // Same turning circle: single arc.
    const double a = left ? wrap_angle(goal.heading - start.heading)
                          : wrap_angle(start.heading - goal.heading);
    cand.segs = {{turn, a}};
  } else {
    const double psi = std::atan2(d.y, d.x);
    const double t = left ? wrap_angle(psi - start.heading) : wrap_angle(start.heading - psi);
    const double q = left ? wrap_angle(goal.heading - psi) : wrap_angle(psi - goal.heading);
    cand.segs = {{turn, t}, {MotionKind::S, dist}, {turn, q}};
  }
  cand.length = candidate_length(cand.segs, r);
  out.push_back(std::move(cand));
}

void try_csc_inner(std::vector<Candidate>& out, const char* name, bool left_first,
                   const Pose3& start, const Pose3& goal, double r) {
  const Point2 ca = left_first ? left_center(start, r) : right_center(start, r);
  const Point2 cb = left_first ? right_center(goal, r) : left_center(goal, r);
  const Point2 d = cb - ca;
  const double dist = d.norm();
  if (dist < 2.0 * r) return;  // inner tangent does not exist
  const double psi = std::atan2(d.y, d.x);
  const double off = std::acos(std::clamp(2.0 * r / dist, -1.0, 1.0));
  for (double gamma : {psi + off, psi - off}) {
    const Point2 ta = ca + unit(gamma) * r;
    const Point2 tb = cb - unit(gamma) * r;
    const Point2 dir = tb - ta;
    const double len = dir.norm();
    // Travel heading at the first tangent point.
    const double phi = left_first ? gamma + kPi / 2.0 : gamma - kPi / 2.0;
    if (len > kGeomTol && dir.dot(unit(phi)) < len * (1.0 - 1e-9)) continue;
    Candidate cand;
    cand.name = name;
    const double t = left_first ? wrap_angle(phi - start.heading)
                                : wrap_angle(start.heading - phi);
    const double q = left_first ? wrap_angle(phi - goal.heading)
                                : wrap_angle(goal.heading - phi);
    cand.segs = {{left_first ? MotionKind::L : MotionKind::R, t},
                 {MotionKind::S, len},
                 {left_first ? MotionKind::R : MotionKind::L, q}};
    cand.length = candidate_length(cand.segs, r);
    out.push_back(std::move(cand));
  }
}

void try_ccc(std::vector<Candidate>& out, const char* name, bool right_outer,
             const Pose3& start, const Pose3& goal, double r) {
  const Point2 ca = right_outer ? right_center(start, r) : left_center(start, r);
  const Point2 cb = right_outer ? right_center(goal, r) : left_center(goal, r);
  const Point2 d = cb - ca;
  const double dist = d.norm();
  if (dist > 4.0 * r || dist < kGeomTol) return;
  const Point2 mid = (ca + cb) * 0.5;
  const double half = 0.5 * dist;
  const double perp_len = std::sqrt(std::max(0.0, 4.0 * r * r - half * half));
  const Point2 perp = Point2{-d.y, d.x} * (1.0 / dist);
  for (double sign : {1.0, -1.0}) {
    const Point2 cm = mid + perp * (sign * perp_len);
    const Point2 t1 = (ca + cm) * 0.5;
    const Point2 t2 = (cb + cm) * 0.5;
    const double a_start = std::atan2(start.y - ca.y, start.x - ca.x);
    const double a_t1 = std::atan2(t1.y - ca.y, t1.x - ca.x);
    const double a_t1m = std::atan2(t1.y - cm.y, t1.x - cm.x);
    const double a_t2m = std::atan2(t2.y - cm.y, t2.x - cm.x);
    const double a_t2 = std::atan2(t2.y - cb.y, t2.x - cb.x);
    const double a_goal = std::atan2(goal.y - cb.y, goal.x - cb.x);
    Candidate cand;
    cand.name = name;
    if (right_outer) {
      cand.segs = {{MotionKind::R, wrap_angle(a_start - a_t1)},
                   {MotionKind::L, wrap_angle(a_t2m - a_t1m)},
                   {MotionKind::R, wrap_angle(a_t2 - a_goal)}};
    } else {
      cand.segs = {{MotionKind::L, wrap_angle(a_t1 - a_start)},
                   {MotionKind::R, wrap_angle(a_t1m - a_t2m)},
                   {MotionKind::L, wrap_angle(a_goal - a_t2)}};
    }
    cand.length = candidate_length(cand.segs, r);
    out.push_back(std::move(cand));
  }
}

bool word_denied(const std::string& name, std::span<const std::string> denied) {
  for (const std::string& d : denied) {
    if (d == name || d == name + "N") return true;
  }
  return false;
}

}  // namespace

DubinsPath3D plan_dubins_2d(const Pose3& start, const Pose3& goal, double r_turn,
                            double speed, std::span<const std::string> denied) {
  if (!(r_turn > 0.0)) throw InvalidConfigError("turn radius must be positive");
  if (!(speed > 0.0)) throw InvalidConfigError("speed must be positive");

  DubinsPath3D path;
  path.start = start;
  path.goal = goal;
  path.speed = speed;

  const double scale = 1.0 + distance(start.position(), goal.position()) + r_turn;
  if (distance(start.position(), goal.position()) <= kGeomTol &&
      std::abs(wrap_signed(start.heading - goal.heading)) <= kGeomTol) {
    path.word = {{MotionKind::N, 0.0, 0.0, 0.0}};
    path.length = 0.0;
    return path;
  }

  std::vector<Candidate> candidates;
  try_csc_outer(candidates, "LSL", true, start, goal, r_turn);
  try_csc_outer(candidates, "RSR", false, start, goal, r_turn);
  try_csc_inner(candidates, "LSR", true, start, goal, r_turn);
  try_csc_inner(candidates, "RSL", false, start, goal, r_turn);
  try_ccc(candidates, "RLR", true, start, goal, r_turn);
  try_ccc(candidates, "LRL", false, start, goal, r_turn);

  const Candidate* best = nullptr;
  for (const Candidate& c : candidates) {
    if (word_denied(c.name, denied)) continue;
    if (!reconstructs_goal(start, c.segs, r_turn, goal, scale)) continue;
    if (best == nullptr || c.length < best->length - 1e-12) best = &c;
  }
  if (best == nullptr) throw PlanningError("no feasible Dubins motion word");

  for (const Segment& s : best->segs) {
    if (s.value <= 1e-12) continue;  // canonicalize away degenerate segments
    MotionPrimitive m;
    m.kind = s.kind;
    m.turn_radius = s.kind == MotionKind::S ? 0.0 : r_turn;
    m.duration = (s.kind == MotionKind::S ? s.value : s.value * r_turn) / speed;
    path.word.push_back(m);
  }
  path.word.push_back({MotionKind::N, 0.0, 0.0, 0.0});
  path.length = best->length;
  return path;
}

Pose3 path_pose_at(const DubinsPath3D& path, double t) {
  Pose3 p = path.start;
  double remaining = std::clamp(t, 0.0, path.duration());
  for (const MotionPrimitive& m : path.word) {
    const double tau = std::min(remaining, m.duration);
    if (tau <= 0.0 && m.duration > 0.0) break;
    switch (m.kind) {
      case MotionKind::S:
        p.x += path.speed * tau * std::cos(p.heading);
        p.y += path.speed * tau * std::sin(p.heading);
        break;
      case MotionKind::L:
      case MotionKind::Hl: {
        const double omega = path.speed / m.turn_radius;
        const Point2 c = left_center(p, m.turn_radius);
        const double a0 = p.heading - kPi / 2.0;
        const double a1 = a0 + omega * tau;
        p.x = c.x + m.turn_radius * std::cos(a1);
        p.y = c.y + m.turn_radius * std::sin(a1);
        p.heading = wrap_angle(p.heading + omega * tau);
        p.h += m.climb_rate * tau;
        break;
      }
      case MotionKind::R:
      case MotionKind::Hr: {
        const double omega = path.speed / m.turn_radius;
        const Point2 c = right_center(p, m.turn_radius);
        const double a0 = p.heading + kPi / 2.0;
        const double a1 = a0 - omega * tau;
        p.x = c.x + m.turn_radius * std::cos(a1);
        p.y = c.y + m.turn_radius * std::sin(a1);
        p.heading = wrap_angle(p.heading - omega * tau);
        p.h += m.climb_rate * tau;
        break;
      }
      default:
        break;
    }
    remaining -= tau;
    if (remaining <= 0.0) break;
  }
  return p;
}

std::vector<Pose3> sample_path(const DubinsPath3D& path, double dt) {
  if (!(dt > 0.0)) throw InvalidConfigError("sample step must be positive");
  std::vector<Pose3> poses;
  const double total = path.duration();
  for (double t = 0.0; t < total; t += dt) poses.push_back(path_pose_at(path, t));
  poses.push_back(path_pose_at(path, total));
  return poses;
}

namespace {

// Climb bookkeeping for a planned 2D word: total turning time after padding
// with k full loops, so |dh| / turning_time stays within the climb limit.
struct ClimbProfile {
  double turning_time = 0.0;
  int full_loops = 0;
  double total_duration = 0.0;
  bool needs_loop_segment = false;  // word had no turning segment at all
};

ClimbProfile climb_profile(const DubinsPath3D& path2d, double dh, double max_climb,
                           double r_turn) {
  ClimbProfile prof;
  for (const MotionPrimitive& m : path2d.word) {
    if (m.kind == MotionKind::L || m.kind == MotionKind::R) prof.turning_time += m.duration;
  }
  prof.total_duration = path2d.duration();
  if (std::abs(dh) > 0.0) {
    const double loop_time = kTwoPi * r_turn / path2d.speed;
    const double needed = std::abs(dh) / max_climb;
    if (prof.turning_time < needed) {
      prof.full_loops =
          static_cast<int>(std::ceil((needed - prof.turning_time) / loop_time - 1e-12));
      prof.needs_loop_segment = prof.turning_time <= 0.0;
      prof.turning_time += prof.full_loops * loop_time;
      prof.total_duration += prof.full_loops * loop_time;
    }
  }
  return prof;
}

DubinsPath3D make_transition_path(const DubinsPath3D& path2d, double start_h, double dh,
                                  double max_climb, double r_turn) {
  DubinsPath3D path = path2d;
  path.start.h = start_h;
  path.goal.h = start_h + dh;
  if (std::abs(dh) <= 0.0) return path;

  const ClimbProfile prof = climb_profile(path2d, dh, max_climb, r_turn);
  const double loop_time = kTwoPi * r_turn / path.speed;

  if (prof.full_loops > 0) {
    if (prof.needs_loop_segment) {
      // No turning segment to extend: append full loops at the endpoint.
      MotionPrimitive loops{MotionKind::L, prof.full_loops * loop_time, r_turn, 0.0};
      auto it = path.word.end();
      if (!path.word.empty() && path.word.back().kind == MotionKind::N) --it;
      path.word.insert(it, loops);
    } else {
      for (auto it = path.word.rbegin(); it != path.word.rend(); ++it) {
        if (it->kind == MotionKind::L || it->kind == MotionKind::R) {
          it->duration += prof.full_loops * loop_time;
          break;
        }
      }
    }
  }

  const double climb = dh / prof.turning_time;
  path.length = 0.0;
  for (MotionPrimitive& m : path.word) {
    if (m.kind == MotionKind::L || m.kind == MotionKind::R) {
      m.kind = m.kind == MotionKind::L ? MotionKind::Hl : MotionKind::Hr;
      m.climb_rate = climb;
      path.length += std::sqrt(path.speed * path.speed + climb * climb) * m.duration;
    } else {
      path.length += path.speed * m.duration;
    }
  }
  return path;
}

}  // namespace

TransitionPlan plan_level_transition(const UavState& current, const Circle& target_circle,
                                     int target_level, const LevelClock& target_clock,
                                     double t_now, const FleetConfig& config,
                                     SquareId target_square) {
  if (std::abs(target_level - current.level) > 1)
    throw InvalidConfigError("level transitions must be between adjacent levels");
  const double r_expected = loiter_radius_for_level(target_level, config.r_l_min);
  if (std::abs(target_circle.radius - r_expected) > 1e-6)
    throw InvalidConfigError("target circle radius does not match the target level");

  const double target_alt = altitude_for_level(target_level, config);
  const double dh = target_alt - current.altitude;
  const double speed = config.velocity;
  const double r_turn = config.r_l_min;
  const double omega_cur = speed / current.loiter_circle.radius;
  const double period_cur = kTwoPi / omega_cur;
  const double period_tgt = target_clock.period();

  TransitionPlan plan;
  plan.uav = current.id;
  plan.target_level = target_level;
  plan.target_circle = target_circle;
  plan.target_square = target_square;

  // Degenerate case: already on the target circle at the synchronized phase.
  if (target_level == current.level &&
      distance(target_circle.center, current.loiter_circle.center) <= 1e-9 &&
      std::abs(target_circle.radius - current.loiter_circle.radius) <= 1e-9 &&
      std::abs(wrap_signed(current.phase - target_clock.phase_at(t_now))) <=
          kPhaseTolerance) {
    const Pose3 pose = loiter_pose(current.loiter_circle, current.phase, current.altitude);
    plan.break_off = pose;
    plan.break_time = t_now;
    plan.join_in = pose;
    plan.join_time = t_now;
    plan.path.word = {{MotionKind::N, 0.0, 0.0, 0.0}};
    plan.path.start = pose;
    plan.path.goal = pose;
    plan.path.speed = speed;
    plan.path.length = 0.0;
    return plan;
  }

  // Candidate join angles on the target circle; for each, sweep the break-off
  // delay and solve arrival-phase = join angle by bisection on the wrapped
  // error. The sweep spans two full periods, which moves the arrival time
  // across more than one target period, so roots always exist.
  constexpr int kJoinGrid = 128;
  constexpr int kBreakGrid = 192;
  const double sweep = 2.0 * std::max(period_cur, period_tgt);

  struct Evaluation {
    double err = 0.0;
    double total_duration = 0.0;
    DubinsPath3D path2d;
    bool ok = false;
  };

  auto evaluate = [&](double t_b, double phi_j) {
    Evaluation ev;
    const double phase_b = wrap_angle(current.phase + omega_cur * t_b);
    const Pose3 break_pose =
        loiter_pose(current.loiter_circle, phase_b, current.altitude);
    const Pose3 join_pose = loiter_pose(target_circle, phi_j, target_alt);
    try {
      ev.path2d = plan_dubins_2d(break_pose, join_pose, r_turn, speed,
                                 config.denied_words);
    } catch (const PlanningError&) {
      return ev;
    }
    const ClimbProfile prof =
        climb_profile(ev.path2d, dh, config.max_climb_rate, r_turn);
    ev.total_duration = prof.total_duration;
    const double t_arrive = t_now + t_b + ev.total_duration;
    ev.err = wrap_signed(target_clock.phase_at(t_arrive) - phi_j);
    ev.ok = true;
    return ev;
  };

  struct Best {
    double length = std::numeric_limits<double>::infinity();
    double t_b = std::numeric_limits<double>::infinity();
    double phi_j = 0.0;
    Evaluation ev;
    bool found = false;
  } best;

  for (int jg = 0; jg < kJoinGrid; ++jg) {
    const double phi_j = kTwoPi * jg / kJoinGrid;
    Evaluation prev = evaluate(0.0, phi_j);
    double prev_t = 0.0;
    for (int bg = 1; bg <= kBreakGrid; ++bg) {
      const double t_b = sweep * bg / kBreakGrid;
      Evaluation cur = evaluate(t_b, phi_j);
      if (prev.ok && cur.ok && std::abs(cur.err - prev.err) < kPi &&
          ((prev.err <= 0.0) != (cur.err <= 0.0))) {
        double lo = prev_t, hi = t_b;
        double lo_err = prev.err;
        Evaluation mid_ev;
        for (int it = 0; it < 60 && hi - lo > 1e-9; ++it) {
          const double mid = 0.5 * (lo + hi);
          mid_ev = evaluate(mid, phi_j);
          if (!mid_ev.ok) break;
          if ((mid_ev.err <= 0.0) == (lo_err <= 0.0)) {
            lo = mid;
            lo_err = mid_ev.err;
          } else {
            hi = mid;
          }
        }
        const double root = 0.5 * (lo + hi);
        Evaluation root_ev = evaluate(root, phi_j);
        if (root_ev.ok && std::abs(root_ev.err) <= kPhaseTolerance) {
          DubinsPath3D path3d = make_transition_path(
              root_ev.path2d, current.altitude, dh, config.max_climb_rate, r_turn);
          const bool better =
              path3d.length < best.length - 1e-9 ||
              (std::abs(path3d.length - best.length) <= 1e-9 && root < best.t_b);
          if (better) {
            best.length = path3d.length;
            best.t_b = root;
            best.phi_j = phi_j;
            best.ev = root_ev;
            best.found = true;
          }
        }
      }
      prev = cur;
      prev_t = t_b;
    }
  }

  if (!best.found)
    throw PlanningError("no phase-synchronized arrival found for the transition");

  const double phase_b = wrap_angle(current.phase + omega_cur * best.t_b);
  plan.break_off = loiter_pose(current.loiter_circle, phase_b, current.altitude);
  plan.break_time = t_now + best.t_b;
  plan.path = make_transition_path(best.ev.path2d, current.altitude, dh,
                                   config.max_climb_rate, r_turn);
  plan.join_in = loiter_pose(target_circle, best.phi_j, target_alt);
  plan.join_time = plan.break_time + plan.path.duration();
  return plan;
}

}  // namespace loitercov
