#include "loitercov/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace loitercov {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t bounded_rand(std::uint64_t& state, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r;
  do {
    r = splitmix64(state);
  } while (r >= limit);
  return r % bound;
}

std::string mode_name(UavMode mode) {
  switch (mode) {
    case UavMode::loitering: return "loitering";
    case UavMode::transitioning: return "transitioning";
    default: return "dropped";
  }
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::uint64_t trace_hash(const std::vector<std::string>& trace) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const std::string& line : trace) {
    for (unsigned char c : line) {
      h ^= c;
      h *= 0x100000001B3ULL;
    }
    h ^= '\n';
    h *= 0x100000001B3ULL;
  }
  return h;
}

// ---------------------------------------------------------------------------
// JSON forms

json config_to_json(const FleetConfig& config) {
  json j;
  j["r_l_min"] = config.r_l_min;
  j["fov_half_angle_deg"] = config.fov_half_angle * 180.0 / kPi;
  j["velocity"] = config.velocity;
  j["psi_max"] = config.psi_max;
  j["g"] = config.g;
  j["r_com"] = config.r_com;
  j["max_level"] = config.max_level;
  j["max_climb_rate"] = config.max_climb_rate;
  j["turn_radius_model"] =
      config.turn_radius_model == TurnRadiusModel::paper ? "paper" : "coordinated";
  j["denied_words"] = config.denied_words;
  return j;
}

FleetConfig config_from_json(const json& j) {
  FleetConfig config;
  config.r_l_min = j.at("r_l_min").get<double>();
  if (j.contains("fov_half_angle_deg"))
    config.fov_half_angle = j["fov_half_angle_deg"].get<double>() * kPi / 180.0;
  config.velocity = j.at("velocity").get<double>();
  config.psi_max = j.at("psi_max").get<double>();
  config.g = j.value("g", 9.81);
  config.max_level = j.value("max_level", kMaxHierarchyLevels);
  config.max_climb_rate = j.value("max_climb_rate", 5.0);
  if (j.contains("turn_radius_model")) {
    const std::string model = j["turn_radius_model"].get<std::string>();
    if (model == "paper")
      config.turn_radius_model = TurnRadiusModel::paper;
    else if (model == "coordinated")
      config.turn_radius_model = TurnRadiusModel::coordinated;
    else
      throw InvalidConfigError("unknown turn_radius_model: " + model);
  }
  if (j.contains("denied_words"))
    config.denied_words = j["denied_words"].get<std::vector<std::string>>();
  config.r_com = j.value("r_com", config.min_r_com());
  config.validate();
  return config;
}

json packing_to_json(const Packing& packing) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config_to_json(packing.config());
  j["classification"] =
      packing.options().classification == Classification::paper ? "paper" : "robust";
  j["anchor"] =
      packing.options().anchor == AnchorMode::per_axis ? "per_axis" : "scalar";
  j["bounding"] = {{"min_x", packing.bounding().min_corner.x},
                   {"min_y", packing.bounding().min_corner.y},
                   {"side", packing.bounding().side}};
  json squares = json::array();
  for (const PackSquare& sq : packing.squares()) {
    json s;
    s["id"] = sq.id;
    s["level"] = sq.level;
    s["cx"] = sq.center.x;
    s["cy"] = sq.center.y;
    s["side"] = sq.side;
    s["parent"] = sq.parent;
    s["children"] = sq.children;
    s["inside"] = sq.inside;
    s["vertex_inside_count"] = sq.vertex_inside_count;
    squares.push_back(std::move(s));
  }
  j["squares"] = std::move(squares);
  j["base_squares"] = packing.base_squares();
  return j;
}

json fleet_to_json(std::span<const UavState> fleet) {
  json agents = json::array();
  for (const UavState& a : fleet) {
    json s;
    s["id"] = a.id;
    s["mode"] = mode_name(a.mode);
    s["level"] = a.level;
    s["altitude"] = a.altitude;
    s["square"] = a.assigned_square;
    s["circle"] = {{"cx", a.loiter_circle.center.x},
                   {"cy", a.loiter_circle.center.y},
                   {"r", a.loiter_circle.radius}};
    s["phase"] = a.phase;
    s["pos"] = {{"x", a.position.x},
                {"y", a.position.y},
                {"h", a.position.h},
                {"heading", a.position.heading}};
    agents.push_back(std::move(s));
  }
  return agents;
}

std::vector<UavState> fleet_from_json(const json& j, double velocity) {
  std::vector<UavState> fleet;
  for (const json& s : j) {
    UavState a;
    a.id = s.at("id").get<int>();
    const std::string mode = s.at("mode").get<std::string>();
    a.mode = mode == "loitering"  ? UavMode::loitering
             : mode == "dropped" ? UavMode::dropped
                                  : UavMode::transitioning;
    a.level = s.at("level").get<int>();
    a.altitude = s.at("altitude").get<double>();
    a.assigned_square = s.at("square").get<int>();
    a.loiter_circle = Circle({s["circle"]["cx"].get<double>(),
                              s["circle"]["cy"].get<double>()},
                             s["circle"]["r"].get<double>());
    a.phase = s.at("phase").get<double>();
    a.position = {s["pos"]["x"].get<double>(), s["pos"]["y"].get<double>(),
                  s["pos"]["h"].get<double>(), s["pos"]["heading"].get<double>()};
    a.velocity = velocity;
    fleet.push_back(std::move(a));
  }
  return fleet;
}

json coverage_report_to_json(const CoverageReport& report, int max_uncovered) {
  json j;
  j["fraction_covered"] = report.fraction_covered;
  j["total_samples"] = report.total_samples;
  j["covered_samples"] = report.covered_samples;
  j["uncovered_count"] = static_cast<int>(report.uncovered_samples.size());
  json uncovered = json::array();
  for (std::size_t i = 0;
       i < report.uncovered_samples.size() && i < static_cast<std::size_t>(max_uncovered);
       ++i)
    uncovered.push_back({report.uncovered_samples[i].x, report.uncovered_samples[i].y});
  j["uncovered_samples"] = std::move(uncovered);
  j["mean_quality"] = report.mean_quality;
  j["total_overlap"] = report.total_overlap;
  if (!report.per_agent_effective.empty()) {
    json eff = json::object();
    for (const auto& [id, e] : report.per_agent_effective) eff[std::to_string(id)] = e;
    j["per_agent_effective"] = std::move(eff);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Scenario

void Scenario::validate() const {
  if (!polygon.has_value()) throw InvalidConfigError("scenario has no polygon");
  config.validate();
  if (!(dt > 0.0)) throw InvalidConfigError("dt must be positive");
  if (duration < 0.0) throw InvalidConfigError("duration must be non-negative");
  const double res = resolved_grid_resolution();
  if (!(res > 0.0) || res > config.r_l_min / 10.0)
    throw InvalidResolutionError("grid resolution must be in (0, r_l_min / 10]");
  for (const DropEventSpec& e : events) {
    if (e.time < 0.0 || e.time > duration)
      throw InvalidConfigError("event time outside [0, duration]");
    if (e.uav_ids.empty() && e.count <= 0)
      throw InvalidConfigError("drop event needs uav_ids or a positive count");
  }
  if (output.snapshot_every < 1 || output.coverage_every < 1)
    throw InvalidConfigError("output cadences must be at least 1 step");
}

Scenario Scenario::from_json(const json& j) {
  Scenario sc;
  const json& poly = j.at("polygon");
  const auto xs = poly.at("x").get<std::vector<double>>();
  const auto ys = poly.at("y").get<std::vector<double>>();
  if (xs.size() != ys.size())
    throw InvalidPolygonError("polygon x and y arrays differ in length");
  std::vector<Point2> vertices;
  vertices.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) vertices.push_back({xs[i], ys[i]});
  sc.polygon = Polygon(std::move(vertices));
  sc.config = config_from_json(j.at("config"));
  sc.duration = j.value("duration", 0.0);
  sc.dt = j.value("dt", 0.1);
  sc.grid_resolution = j.value("grid_resolution", 0.0);
  if (j.contains("classification")) {
    const std::string c = j["classification"].get<std::string>();
    if (c == "paper")
      sc.packing.classification = Classification::paper;
    else if (c == "robust")
      sc.packing.classification = Classification::robust;
    else
      throw InvalidConfigError("unknown classification: " + c);
  }
  if (j.contains("anchor")) {
    const std::string a = j["anchor"].get<std::string>();
    if (a == "per_axis")
      sc.packing.anchor = AnchorMode::per_axis;
    else if (a == "scalar")
      sc.packing.anchor = AnchorMode::scalar;
    else
      throw InvalidConfigError("unknown anchor mode: " + a);
  }
  if (j.contains("policy")) {
    const std::string p = j["policy"].get<std::string>();
    if (p == "effective-coverage")
      sc.policy = SelectionPolicy::effective_coverage;
    else if (p == "phase-nearest")
      sc.policy = SelectionPolicy::phase_nearest;
    else
      throw InvalidConfigError("unknown policy: " + p);
  }
  for (const json& e : j.value("events", json::array())) {
    DropEventSpec spec;
    spec.time = e.at("time").get<double>();
    if (e.value("kind", "drop") != "drop")
      throw InvalidConfigError("only drop events are supported");
    if (e.contains("uav_ids")) spec.uav_ids = e["uav_ids"].get<std::vector<int>>();
    spec.count = e.value("count", 0);
    spec.seed = e.value("seed", 0ULL);
    sc.events.push_back(std::move(spec));
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    sc.output.snapshot_every = o.value("snapshot_every", 10);
    sc.output.coverage_every = o.value("coverage_every", 10);
    sc.output.include_tables = o.value("include_tables", false);
  }
  sc.validate();
  return sc;
}

json Scenario::to_json() const {
  json j;
  j["schema_version"] = kSchemaVersion;
  json xs = json::array(), ys = json::array();
  for (const Point2& p : polygon->vertices()) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  j["polygon"] = {{"x", std::move(xs)}, {"y", std::move(ys)}};
  j["config"] = config_to_json(config);
  j["duration"] = duration;
  j["dt"] = dt;
  if (grid_resolution > 0.0) j["grid_resolution"] = grid_resolution;
  j["classification"] =
      packing.classification == Classification::paper ? "paper" : "robust";
  j["anchor"] = packing.anchor == AnchorMode::per_axis ? "per_axis" : "scalar";
  j["policy"] = policy == SelectionPolicy::effective_coverage ? "effective-coverage"
                                                              : "phase-nearest";
  json events_json = json::array();
  for (const DropEventSpec& e : events) {
    json ev;
    ev["time"] = e.time;
    ev["kind"] = "drop";
    if (!e.uav_ids.empty()) ev["uav_ids"] = e.uav_ids;
    if (e.count > 0) {
      ev["count"] = e.count;
      ev["seed"] = e.seed;
    }
    events_json.push_back(std::move(ev));
  }
  j["events"] = std::move(events_json);
  j["output"] = {{"snapshot_every", output.snapshot_every},
                 {"coverage_every", output.coverage_every},
                 {"include_tables", output.include_tables}};
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  json j = json::parse(in);
  return Scenario::from_json(j);
}

// ---------------------------------------------------------------------------
// Deployment and simulation loop

std::vector<UavState> initial_deploy(const Packing& packing, const FleetConfig& config) {
  const LevelClock clock = make_level_clock(1, config);
  std::vector<UavState> fleet;
  fleet.reserve(packing.base_squares().size());
  UavId next_id = 0;
  for (SquareId sq_id : packing.base_squares()) {
    const PackSquare& sq = packing.square(sq_id);
    UavState a;
    a.id = next_id++;
    a.mode = UavMode::loitering;
    a.level = 1;
    a.altitude = altitude_for_level(1, config);
    a.assigned_square = sq.id;
    a.loiter_circle = sq.loiter_circle();
    a.phase = clock.phase_at(0.0);
    a.position = loiter_pose(a.loiter_circle, a.phase, a.altitude);
    a.velocity = config.velocity;
    fleet.push_back(std::move(a));
  }
  return fleet;
}

Engine::Engine(Scenario scenario)
    : scenario_(std::move(scenario)),
      packing_(build_packing(*scenario_.polygon, scenario_.config, scenario_.packing)) {
  scenario_.validate();
}

RunResult Engine::run() {
  const Scenario& sc = scenario_;
  const FleetConfig& config = sc.config;
  const Polygon& poly = *sc.polygon;
  const double resolution = sc.resolved_grid_resolution();

  RunResult result;
  std::vector<UavState> fleet = initial_deploy(packing_, config);
  result.counters.initial_agents = static_cast<int>(fleet.size());

  std::array<LevelClock, kMaxHierarchyLevels> clocks;
  for (int l = 1; l <= kMaxHierarchyLevels; ++l) clocks[l - 1] = make_level_clock(l, config);

  std::vector<NeighborTable> tables;
  // Last-known labels per observer; detection flips these, never the reverse.
  std::map<UavId, std::map<UavId, NeighborLabel>> label_knowledge;
  std::set<UavId> detected_drops;
  std::set<SquareId> unrecoverable_reported;
  std::vector<bool> event_done(sc.events.size(), false);

  std::ostringstream metrics;
  metrics << "time,fraction_covered,live_count,mean_quality\n";

  auto live_count = [&]() {
    int n = 0;
    for (const UavState& a : fleet)
      if (a.mode != UavMode::dropped) ++n;
    return n;
  };
  auto live_set = [&]() {
    std::set<UavId> s;
    for (const UavState& a : fleet)
      if (a.mode != UavMode::dropped) s.insert(a.id);
    return s;
  };

  auto emit_message = [&](double t, UavId from, UavId to, MessageKind kind,
                          const json& payload) {
    json rec;
    rec["record"] = "message";
    rec["schema_version"] = kSchemaVersion;
    rec["time"] = t;
    rec["from"] = from;
    rec["to"] = to;
    rec["kind"] = message_kind_name(kind);
    rec["payload"] = payload;
    result.trace.push_back(rec.dump());
  };

  auto group_members = [&](SquareId parent) {
    std::vector<UavId> members;
    for (SquareId child : packing_.square(parent).children) {
      if (child == kNoSquare) continue;
      for (const UavState& a : fleet) {
        if (a.mode != UavMode::dropped && a.assigned_square == child)
          members.push_back(a.id);
      }
    }
    std::sort(members.begin(), members.end());
    return members;
  };

  CoverageReport coverage =
      verify_full_coverage(fleet, poly, resolution, config, false);
  double last_fraction = coverage.fraction_covered;
  double last_quality = coverage.mean_quality;

  auto emit_metrics_row = [&](double t) {
    metrics << csv_number(t) << ',' << csv_number(last_fraction) << ',' << live_count()
            << ',' << csv_number(last_quality) << '\n';
  };

  auto emit_snapshot = [&](double t) {
    json rec;
    rec["record"] = "snapshot";
    rec["schema_version"] = kSchemaVersion;
    rec["time"] = t;
    rec["agents"] = fleet_to_json(fleet);
    json transitions = json::array();
    for (const UavState& a : fleet) {
      if (a.mode == UavMode::transitioning && a.transition) {
        const TransitionPlan& plan = *a.transition;
        transitions.push_back({{"uav", a.id},
                               {"target_square", plan.target_square},
                               {"target_level", plan.target_level},
                               {"break_time", plan.break_time},
                               {"join_time", plan.join_time},
                               {"word", plan.path.word_string()},
                               {"length", plan.path.length}});
      }
    }
    rec["transitions"] = std::move(transitions);
    rec["coverage"] = {{"fraction_covered", last_fraction},
                       {"mean_quality", last_quality},
                       {"live_count", live_count()}};
    if (sc.output.include_tables) {
      json tj = json::array();
      for (const NeighborTable& table : tables) {
        json entries = json::array();
        for (const auto& [id, label] : table.entries)
          entries.push_back({id, static_cast<int>(label)});
        tj.push_back({{"owner", table.owner}, {"entries", std::move(entries)}});
      }
      rec["tables"] = std::move(tj);
    }
    result.trace.push_back(rec.dump());
  };

  emit_metrics_row(0.0);
  emit_snapshot(0.0);

  const long n_steps = std::lround(sc.duration / sc.dt);
  for (long k = 1; k <= n_steps; ++k) {
    const double t = k * sc.dt;
    bool coverage_dirty = false;

    // Inject due drop events.
    for (std::size_t ei = 0; ei < sc.events.size(); ++ei) {
      if (event_done[ei] || sc.events[ei].time > t + 1e-12) continue;
      event_done[ei] = true;
      const DropEventSpec& spec = sc.events[ei];
      std::vector<UavId> ids = spec.uav_ids;
      if (ids.empty()) {
        std::vector<UavId> pool;
        for (const UavState& a : fleet)
          if (a.mode != UavMode::dropped) pool.push_back(a.id);
        std::sort(pool.begin(), pool.end());
        std::uint64_t rng = spec.seed;
        const int n = std::min<int>(spec.count, static_cast<int>(pool.size()));
        for (int i = 0; i < n; ++i) {
          const std::size_t j =
              i + static_cast<std::size_t>(bounded_rand(rng, pool.size() - i));
          std::swap(pool[i], pool[j]);
          ids.push_back(pool[i]);
        }
        std::sort(ids.begin(), ids.end());
      }
      for (UavId id : ids) {
        for (UavState& a : fleet) {
          if (a.id == id && a.mode != UavMode::dropped) {
            a.mode = UavMode::dropped;
            a.transition.reset();
            ++result.counters.dropped;
          }
        }
      }
      json rec;
      rec["record"] = "event";
      rec["schema_version"] = kSchemaVersion;
      rec["time"] = t;
      rec["kind"] = "drop";
      rec["uav_ids"] = ids;
      result.trace.push_back(rec.dump());
      coverage_dirty = true;
    }

    // Kinematics.
    for (UavState& a : fleet) {
      switch (a.mode) {
        case UavMode::loitering:
          a = step_loiter(a, clocks[a.level - 1], sc.dt);
          break;
        case UavMode::transitioning: {
          const TransitionPlan& plan = *a.transition;
          if (t < plan.break_time) {
            const double omega = config.velocity / a.loiter_circle.radius;
            a.phase = wrap_angle(a.phase + omega * sc.dt);
            a.position = loiter_pose(a.loiter_circle, a.phase, a.altitude);
          } else if (t < plan.join_time) {
            a.position = path_pose_at(plan.path, t - plan.break_time);
          } else {
            // Join: lock to the target level clock.
            const LevelClock& clock = clocks[plan.target_level - 1];
            a.mode = UavMode::loitering;
            a.level = plan.target_level;
            a.altitude = altitude_for_level(plan.target_level, config);
            a.loiter_circle = plan.target_circle;
            a.assigned_square = plan.target_square;
            a.phase = clock.phase_at(t);
            a.position = loiter_pose(a.loiter_circle, a.phase, a.altitude);
            ++result.counters.arrivals;
            for (UavId peer : group_members(packing_.square(plan.target_square).id))
              if (peer != a.id)
                emit_message(t, a.id, peer, MessageKind::level_update,
                             {{"level", a.level}, {"square", a.assigned_square}});
            a.transition.reset();
            coverage_dirty = true;
          }
          break;
        }
        case UavMode::dropped:
          break;
      }
    }

    // Protocol round: refresh table membership, detect against last-known
    // labels, resolve. A neighbor no one has labeled yet enters as active so
    // its absence is observable; labels never leave the dropped state.
    tables.clear();
    for (const UavState& a : fleet) {
      if (a.mode == UavMode::dropped) continue;
      NeighborTable table = build_neighborhood(a, fleet, config);
      const auto& known = label_knowledge[a.id];
      for (auto& [id, label] : table.entries) {
        const auto it = known.find(id);
        if (it != known.end()) {
          if (it->second == NeighborLabel::dropped)
            label = NeighborLabel::dropped;  // no resurrection
          else if (label == NeighborLabel::dropped)
            label = it->second;  // silence not yet observed; detection flips it
        } else if (label == NeighborLabel::dropped) {
          label = NeighborLabel::active;  // never observed; heartbeat is due
        }
      }
      tables.push_back(std::move(table));
    }
    const std::set<UavId> live = live_set();
    const std::vector<DropEvent> drop_events = detect_failures(tables, live);
    for (const NeighborTable& table : tables) label_knowledge[table.owner] = table.entries;

    std::set<UavId> new_drops;
    for (const DropEvent& ev : drop_events) {
      if (!detected_drops.contains(ev.dropped)) new_drops.insert(ev.dropped);
    }

    if (!new_drops.empty()) {
      for (UavId dropped : new_drops) {
        detected_drops.insert(dropped);
        SquareId failed_square = kNoSquare;
        for (const UavState& a : fleet)
          if (a.id == dropped) failed_square = a.assigned_square;
        if (failed_square == kNoSquare) continue;
        const PackSquare& fsq = packing_.square(failed_square);
        if (fsq.parent == kNoSquare) continue;
        const std::vector<UavId> members = group_members(fsq.parent);
        for (UavId from : members)
          for (UavId to : members)
            if (from != to)
              emit_message(t, from, to, MessageKind::drop_report,
                           {{"dropped", dropped}});
      }

      const std::vector<RecoveryDecision> decisions =
          resolve_failures(packing_, fleet, new_drops, sc.policy, poly, t);
      for (const RecoveryDecision& d : decisions) {
        if (d.kind == DecisionKind::unrecoverable) {
          if (unrecoverable_reported.contains(d.failed_super_square)) continue;
          unrecoverable_reported.insert(d.failed_super_square);
          ++result.counters.unrecoverable;
        } else {
          SquareId old_square = kNoSquare;
          for (const UavState& a : fleet)
            if (a.id == d.chosen_uav) old_square = a.assigned_square;
          apply_decision(d, fleet, packing_, t);
          for (const UavState& a : fleet)
            if (a.id == d.chosen_uav && a.transition)
              result.plans.push_back(*a.transition);
          coverage_dirty = true;
          if (d.kind == DecisionKind::promotion) {
            ++result.counters.promotions;
            for (UavId peer : group_members(d.failed_super_square))
              if (peer != d.chosen_uav)
                emit_message(t, d.chosen_uav, peer, MessageKind::claim_promotion,
                             {{"target_square", d.target_square}});
          } else {
            ++result.counters.lend_transitions;
            // Lend messages circulate within the donor group (the failed
            // square has no live endpoint).
            SquareId donor_group = d.target_square;
            if (d.kind == DecisionKind::lend_primary && old_square != kNoSquare)
              donor_group = packing_.square(old_square).parent;
            const MessageKind kind = d.kind == DecisionKind::lend_primary
                                         ? MessageKind::lend_request
                                         : MessageKind::lend_grant;
            if (donor_group != kNoSquare) {
              for (UavId peer : group_members(donor_group))
                if (peer != d.chosen_uav)
                  emit_message(t, d.chosen_uav, peer, kind,
                               {{"target_square", d.target_square}});
            }
          }
        }
        json rec;
        rec["record"] = "decision";
        rec["schema_version"] = kSchemaVersion;
        rec["time"] = t;
        rec["super_square"] = d.failed_super_square;
        rec["uav"] = d.chosen_uav;
        rec["target_square"] = d.target_square;
        rec["target_level"] = d.target_level;
        rec["kind"] = decision_kind_name(d.kind);
        result.trace.push_back(rec.dump());
        result.decisions.push_back(d);
      }
    }

    if (coverage_dirty) {
      coverage = verify_full_coverage(fleet, poly, resolution, config, false);
      last_fraction = coverage.fraction_covered;
      last_quality = coverage.mean_quality;
    }

    emit_metrics_row(t);
    // Eventful steps always get a snapshot so drop/recovery moments are
    // reconstructable from the trace regardless of the cadence.
    if (k % sc.output.snapshot_every == 0 || k == n_steps || coverage_dirty)
      emit_snapshot(t);
  }

  result.final_coverage =
      verify_full_coverage(fleet, poly, resolution, config, true);
  last_fraction = result.final_coverage.fraction_covered;
  last_quality = result.final_coverage.mean_quality;

  json report;
  report["schema_version"] = kSchemaVersion;
  report["initial_agents"] = result.counters.initial_agents;
  report["dropped"] = result.counters.dropped;
  report["promotions"] = result.counters.promotions;
  report["lend_transitions"] = result.counters.lend_transitions;
  report["unrecoverable"] = result.counters.unrecoverable;
  report["arrivals"] = result.counters.arrivals;
  report["live_count"] = live_count();
  report["duration"] = sc.duration;
  report["grid_resolution"] = resolution;
  report["final"] = coverage_report_to_json(result.final_coverage);
  result.report = std::move(report);
  result.metrics_csv = metrics.str();
  result.final_fleet = fleet;
  return result;
}

RunResult run_scenario(const Scenario& scenario) { return Engine(scenario).run(); }

}  // namespace loitercov
