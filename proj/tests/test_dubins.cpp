#include <doctest.h>

#include <cmath>
#include <random>

#include "loitercov/dubins.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace loitercov;
using oracles::uniform;

namespace {

double max_fd_curvature(const DubinsPath3D& path, double dt = 0.01) {
  const std::vector<Pose3> poses = sample_path(path, dt);
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < poses.size(); ++i) {
    const double ds = path.speed * dt;
    if (ds <= 0.0) continue;
    const double dpsi = std::abs(wrap_signed(poses[i + 1].heading - poses[i].heading));
    // The final (shorter) interval is handled by the exact endpoint sample.
    if (i + 2 == poses.size()) break;
    worst = std::max(worst, dpsi / ds);
  }
  return worst;
}

}  // namespace

TEST_CASE("plan_dubins_2d degenerate cases") {
  const Pose3 p{3.0, -2.0, 0.0, 1.2};
  const DubinsPath3D same = plan_dubins_2d(p, p, 80.0, 20.0);
  CHECK(same.length == 0.0);
  CHECK(same.word_string() == "N");
  CHECK(sample_path(same, 0.5).size() == 1);

  // Collinear poses: a pure straight, padded with N.
  const double r = 80.0;
  const Pose3 s{0, 0, 0, 0};
  const Pose3 g{10.0 * r, 0, 0, 0};
  const DubinsPath3D straight = plan_dubins_2d(s, g, r, 20.0);
  CHECK(straight.word_string() == "SN");
  CHECK(straight.length == doctest::Approx(10.0 * r).epsilon(1e-12));
}

TEST_CASE("plan_dubins_2d padding and invariants") {
  const Pose3 s{0, 0, 0, 0.3};
  const Pose3 g{400, 250, 0, 2.1};
  const DubinsPath3D path = plan_dubins_2d(s, g, 80.0, 20.0);
  CHECK(path.word.size() <= 4);
  CHECK(path.word.back().kind == MotionKind::N);
  CHECK(path.word.back().duration == 0.0);
  CHECK(path.length >= distance(s.position(), g.position()) - 1e-9);
  CHECK(path.length == doctest::Approx(path.speed * path.duration()));
}

TEST_CASE("plan_dubins_2d matches the exhaustive word oracle") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const Pose3 s{uniform(rng, -400, 400), uniform(rng, -400, 400), 0,
                  uniform(rng, 0, kTwoPi)};
    const Pose3 g{uniform(rng, -400, 400), uniform(rng, -400, 400), 0,
                  uniform(rng, 0, kTwoPi)};
    const double r = uniform(rng, 25, 120);
    const DubinsPath3D path = plan_dubins_2d(s, g, r, 20.0);
    const auto oracle = oracles::dubins_word_oracle(s, g, r);
    REQUIRE(oracle.has_value());
    CHECK(std::abs(path.length - oracle->length) <= 1e-9);
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("sampled paths stay on the speed profile and reach the goal") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const Pose3 s{uniform(rng, -300, 300), uniform(rng, -300, 300), 0,
                  uniform(rng, 0, kTwoPi)};
    const Pose3 g{uniform(rng, -300, 300), uniform(rng, -300, 300), 0,
                  uniform(rng, 0, kTwoPi)};
    const double r = uniform(rng, 30, 100);
    const double v = 20.0;
    const DubinsPath3D path = plan_dubins_2d(s, g, r, v);
    const std::vector<Pose3> poses = sample_path(path, 0.05);
    CHECK(poses.front().x == doctest::Approx(s.x));
    const Pose3& last = poses.back();
    CHECK(distance(last.position(), g.position()) <=
          1e-6 * path.length + 1e-9);
    CHECK(std::abs(wrap_signed(last.heading - g.heading)) < 1e-9);
    // Horizontal speed is v: chords never exceed v*dt and match it on
    // straights; arcs shorten by the chord factor only.
    for (std::size_t k = 0; k + 2 < poses.size(); ++k) {
      const double chord = distance(poses[k].position(), poses[k + 1].position());
      CHECK(chord <= v * 0.05 + 1e-9);
      CHECK(chord >= 2.0 * r * std::sin(v * 0.05 / (2.0 * r)) - 1e-9);
    }
  }
}

TEST_CASE("sample_path on a full circle returns to the start") {
  const Pose3 s{50, 60, 0, 0.7};
  DubinsPath3D loop;
  loop.start = s;
  loop.goal = s;
  loop.speed = 20.0;
  const double r = 80.0;
  loop.word = {{MotionKind::L, kTwoPi * r / 20.0, r, 0.0}, {MotionKind::N, 0, 0, 0}};
  loop.length = kTwoPi * r;
  const std::vector<Pose3> poses = sample_path(loop, 0.1);
  CHECK(distance(poses.back().position(), s.position()) < 1e-9);
  CHECK(std::abs(wrap_signed(poses.back().heading - s.heading)) < 1e-9);
}

TEST_CASE("pure straight sampling") {
  DubinsPath3D path;
  path.start = {0, 0, 80, 0};
  path.speed = 20.0;
  path.word = {{MotionKind::S, 10.0, 0, 0}, {MotionKind::N, 0, 0, 0}};
  path.goal = {200, 0, 80, 0};
  path.length = 200.0;
  const std::vector<Pose3> poses = sample_path(path, 1.0);
  CHECK(poses.back().x == doctest::Approx(200.0));
  CHECK(poses.back().y == doctest::Approx(0.0));
}

TEST_CASE("denied words are excluded") {
  const Pose3 s{0, 0, 0, 0.3};
  const Pose3 g{400, 250, 0, 2.1};
  const DubinsPath3D best = plan_dubins_2d(s, g, 80.0, 20.0);
  const std::string base = best.word_string().substr(0, best.word_string().size() - 1);
  // Denying the winning word forces a longer alternative.
  std::vector<std::string> denied = {base};
  const DubinsPath3D alt = plan_dubins_2d(s, g, 80.0, 20.0, denied);
  CHECK(alt.word_string() != best.word_string());
  CHECK(alt.length >= best.length - 1e-12);
  // Denying everything fails.
  const std::vector<std::string> all = {"LSL", "RSR", "LSR", "RSL", "RLR", "LRL"};
  CHECK_THROWS_AS(plan_dubins_2d(s, g, 80.0, 20.0, all), PlanningError);
}

namespace {

UavState agent_on_circle(const FleetConfig& config, Point2 center, int level,
                         double phase) {
  UavState a;
  a.id = 7;
  a.mode = UavMode::loitering;
  a.level = level;
  a.altitude = altitude_for_level(level, config);
  a.loiter_circle = Circle(center, loiter_radius_for_level(level, config.r_l_min));
  a.phase = phase;
  a.position = loiter_pose(a.loiter_circle, a.phase, a.altitude);
  a.velocity = config.velocity;
  return a;
}

}  // namespace

TEST_CASE("level transition: quadrant geometry climbs monotonically") {
  const FleetConfig config = fixtures::default_config();
  // Base square centered (40, 40), its super-square centered (80, 80).
  const UavState current = agent_on_circle(config, {40, 40}, 1, 1.0);
  const Circle target({80, 80}, 160.0);
  const LevelClock clock = make_level_clock(2, config);
  const TransitionPlan plan =
      plan_level_transition(current, target, 2, clock, 5.0, config);

  CHECK(plan.break_time >= 5.0);
  CHECK(plan.join_time > plan.break_time);
  CHECK(plan.path.word.size() <= 4);
  // Arrival on the target circle, tangent, at the synchronized phase.
  const Pose3& join = plan.join_in;
  CHECK(distance(join.position(), target.center) == doctest::Approx(160.0).epsilon(1e-9));
  const double join_angle = std::atan2(join.y - target.center.y, join.x - target.center.x);
  CHECK(std::abs(wrap_signed(join.heading - (join_angle + kPi / 2.0))) < 1e-9);
  CHECK(std::abs(wrap_signed(clock.phase_at(plan.join_time) - wrap_angle(join_angle))) <
        kPhaseTolerance);
  // Altitude climbs monotonically from 80 to 160.
  const std::vector<Pose3> poses = sample_path(plan.path, 0.05);
  CHECK(poses.front().h == doctest::Approx(80.0));
  CHECK(poses.back().h == doctest::Approx(160.0).epsilon(1e-9));
  for (std::size_t i = 0; i + 1 < poses.size(); ++i)
    CHECK(poses[i + 1].h >= poses[i].h - 1e-12);
  // Climb rate stays within the limit.
  for (const MotionPrimitive& m : plan.path.word)
    CHECK(std::abs(m.climb_rate) <= config.max_climb_rate + 1e-9);
  CHECK(max_fd_curvature(plan.path) <= 1.0 / config.min_turn() + 1e-6);
}

TEST_CASE("level transition: degenerate zero plan") {
  const FleetConfig config = fixtures::default_config();
  const LevelClock clock = make_level_clock(1, config);
  const double t_now = 12.0;
  const UavState current =
      agent_on_circle(config, {40, 40}, 1, clock.phase_at(t_now));
  const TransitionPlan plan = plan_level_transition(
      current, current.loiter_circle, 1, clock, t_now, config);
  CHECK(plan.path.length == 0.0);
  CHECK(plan.break_time == t_now);
  CHECK(plan.join_time == t_now);
}

TEST_CASE("level transition rejects non-adjacent levels and bad radii") {
  const FleetConfig config = fixtures::default_config();
  const UavState current = agent_on_circle(config, {40, 40}, 1, 0.0);
  const LevelClock c3 = make_level_clock(3, config);
  CHECK_THROWS_AS(
      plan_level_transition(current, Circle({80, 80}, 320.0), 3, c3, 0.0, config),
      InvalidConfigError);
  const LevelClock c2 = make_level_clock(2, config);
  CHECK_THROWS_AS(
      plan_level_transition(current, Circle({80, 80}, 100.0), 2, c2, 0.0, config),
      InvalidConfigError);
}

TEST_CASE("level transition property suite") {
  const FleetConfig config = fixtures::default_config();
  std::mt19937_64 rng(99);
  const double kappa_max = 1.0 / config.min_turn() + 1e-6;
  for (int i = 0; i < 40; ++i) {
    const bool up = (rng() & 1) != 0;
    const int from_level = up ? 1 : 2;
    const int to_level = up ? 2 : 1;
    const Point2 c_cur{uniform(rng, -200, 200), uniform(rng, -200, 200)};
    const Point2 c_tgt{c_cur.x + uniform(rng, -150, 150),
                       c_cur.y + uniform(rng, -150, 150)};
    const UavState current =
        agent_on_circle(config, c_cur, from_level, uniform(rng, 0, kTwoPi));
    const Circle target(c_tgt, loiter_radius_for_level(to_level, config.r_l_min));
    const LevelClock clock = make_level_clock(to_level, config);
    const double t_now = uniform(rng, 0, 100);
    const TransitionPlan plan =
        plan_level_transition(current, target, to_level, clock, t_now, config);

    const Pose3 end = path_pose_at(plan.path, plan.path.duration());
    CHECK(distance(end.position(), plan.join_in.position()) <=
          1e-6 * (1.0 + plan.path.length));
    const double join_angle =
        std::atan2(plan.join_in.y - c_tgt.y, plan.join_in.x - c_tgt.x);
    CHECK(std::abs(wrap_signed(clock.phase_at(plan.join_time) - wrap_angle(join_angle))) <
          kPhaseTolerance);
    CHECK(max_fd_curvature(plan.path) <= kappa_max);
    // 3D length lower bound.
    const double dx = plan.join_in.x - plan.break_off.x;
    const double dy = plan.join_in.y - plan.break_off.y;
    const double dh = plan.join_in.h - plan.break_off.h;
    CHECK(plan.path.length >= std::sqrt(dx * dx + dy * dy + dh * dh) - 1e-6);
  }
}
