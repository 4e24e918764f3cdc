// Command-line front end: packing, simulation, coverage verification and
// transition planning over scenario files, with SVG figure output.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "loitercov/engine.hpp"
#include "loitercov/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace loitercov;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPredicateFalse = 1;
constexpr int kExitUsage = 2;

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

struct CommonArgs {
  std::string scenario_path;
  std::string out_dir = ".";
  std::string svg_path;
  double resolution = 0.0;
  std::string classification;
  std::string policy;
  double dt = 0.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void apply_overrides(Scenario& scenario, const CommonArgs& args) {
  if (args.resolution > 0.0) scenario.grid_resolution = args.resolution;
  if (args.dt > 0.0) scenario.dt = args.dt;
  if (!args.classification.empty())
    scenario.packing.classification =
        args.classification == "robust" ? Classification::robust : Classification::paper;
  if (!args.policy.empty())
    scenario.policy = args.policy == "phase-nearest" ? SelectionPolicy::phase_nearest
                                                     : SelectionPolicy::effective_coverage;
  if (args.seed_set) {
    for (DropEventSpec& e : scenario.events)
      if (e.count > 0) e.seed = args.seed;
  }
  scenario.validate();
}

int cmd_pack(const CommonArgs& args) {
  Scenario scenario = load_scenario(args.scenario_path);
  apply_overrides(scenario, args);
  const Packing packing =
      build_packing(*scenario.polygon, scenario.config, scenario.packing);
  write_file(fs::path(args.out_dir) / "packing.json", packing_to_json(packing).dump(2) + "\n");
  std::cout << "base squares: " << packing.base_squares().size() << "\n";
  if (!args.svg_path.empty())
    write_file(args.svg_path, render_packing_svg(packing, *scenario.polygon));
  return kExitOk;
}

int cmd_simulate(const CommonArgs& args, bool frames, bool transitions) {
  Scenario scenario = load_scenario(args.scenario_path);
  apply_overrides(scenario, args);
  Engine engine(scenario);
  const RunResult result = engine.run();

  const fs::path out(args.out_dir);
  std::string trace_text;
  for (const std::string& line : result.trace) trace_text += line + "\n";
  write_file(out / "trace.jsonl", trace_text);
  write_file(out / "metrics.csv", result.metrics_csv);
  write_file(out / "report.json", result.report.dump(2) + "\n");

  if (frames) {
    // Reconstruct keyframes from the trace: initial, first with drops,
    // first with transitions, final.
    json initial, post_drop, post_decision, final_snap;
    for (const std::string& line : result.trace) {
      const json rec = json::parse(line);
      if (rec["record"] != "snapshot") continue;
      if (initial.is_null()) initial = rec;
      bool any_drop = false, any_transition = false;
      for (const json& a : rec["agents"]) {
        if (a["mode"] == "dropped") any_drop = true;
        if (a["mode"] == "transitioning") any_transition = true;
      }
      if (post_drop.is_null() && any_drop) post_drop = rec;
      if (post_decision.is_null() && any_transition) post_decision = rec;
      final_snap = rec;
    }
    const auto render = [&](const json& snap, bool circles) {
      const std::vector<UavState> fleet =
          fleet_from_json(snap["agents"], scenario.config.velocity);
      return render_frame_svg(engine.packing(), *scenario.polygon, fleet, circles);
    };
    if (!initial.is_null()) write_file(out / "frame_00_initial.svg", render(initial, true));
    if (!post_drop.is_null()) write_file(out / "frame_01_drop.svg", render(post_drop, false));
    if (!post_decision.is_null())
      write_file(out / "frame_02_decision.svg", render(post_decision, false));
    if (!final_snap.is_null()) write_file(out / "frame_03_final.svg", render(final_snap, true));
  }
  if (transitions) {
    write_file(out / "transitions.svg",
               render_transitions_svg(engine.packing(), *scenario.polygon,
                                      result.final_fleet, result.plans));
  }
  std::cout << result.report.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify_coverage(const CommonArgs& args, const std::string& snapshot_path) {
  Scenario scenario = load_scenario(args.scenario_path);
  apply_overrides(scenario, args);
  const Packing packing =
      build_packing(*scenario.polygon, scenario.config, scenario.packing);
  std::vector<UavState> fleet;
  if (snapshot_path.empty()) {
    fleet = initial_deploy(packing, scenario.config);
  } else {
    std::ifstream in(snapshot_path);
    if (!in) throw std::runtime_error("cannot open snapshot: " + snapshot_path);
    const json snap = json::parse(in);
    fleet = fleet_from_json(snap.contains("agents") ? snap["agents"] : snap,
                            scenario.config.velocity);
  }
  const CoverageReport report = verify_full_coverage(
      fleet, *scenario.polygon, scenario.resolved_grid_resolution(), scenario.config);
  write_file(fs::path(args.out_dir) / "coverage.json",
             coverage_report_to_json(report).dump(2) + "\n");
  std::cout << "fraction_covered: " << report.fraction_covered << " (" << report.covered_samples
            << "/" << report.total_samples << " samples)\n";
  return report.fraction_covered >= 1.0 ? kExitOk : kExitPredicateFalse;
}

int cmd_plan_dubins(const CommonArgs& args) {
  std::ifstream in(args.scenario_path);
  if (!in) throw std::runtime_error("cannot open plan spec: " + args.scenario_path);
  const json spec = json::parse(in);
  const FleetConfig config = config_from_json(spec.at("config"));

  const int start_level = spec.value("start_level", 1);
  const json& sc = spec.at("start_circle");
  UavState current;
  current.id = 0;
  current.mode = UavMode::loitering;
  current.level = start_level;
  current.altitude = altitude_for_level(start_level, config);
  current.loiter_circle =
      Circle({sc.at("cx").get<double>(), sc.at("cy").get<double>()},
             loiter_radius_for_level(start_level, config.r_l_min));
  current.phase = spec.value("start_phase", 0.0);
  current.position = loiter_pose(current.loiter_circle, current.phase, current.altitude);
  current.velocity = config.velocity;

  const json& tgt = spec.at("target");
  const int target_level = tgt.at("level").get<int>();
  const Circle target_circle({tgt.at("cx").get<double>(), tgt.at("cy").get<double>()},
                             loiter_radius_for_level(target_level, config.r_l_min));
  const double t_now = spec.value("time", 0.0);

  const TransitionPlan plan = plan_level_transition(
      current, target_circle, target_level, make_level_clock(target_level, config), t_now,
      config);

  json out;
  out["schema_version"] = kSchemaVersion;
  out["word"] = plan.path.word_string();
  json segments = json::array();
  for (const MotionPrimitive& m : plan.path.word)
    segments.push_back({{"kind", motion_kind_name(m.kind)},
                        {"duration", m.duration},
                        {"turn_radius", m.turn_radius},
                        {"climb_rate", m.climb_rate}});
  out["segments"] = std::move(segments);
  out["length"] = plan.path.length;
  out["break_time"] = plan.break_time;
  out["join_time"] = plan.join_time;
  json polyline = json::array();
  for (const Pose3& p : sample_path(plan.path, 0.5))
    polyline.push_back({p.x, p.y, p.h, p.heading});
  out["polyline"] = std::move(polyline);
  write_file(fs::path(args.out_dir) / "path.json", out.dump(2) + "\n");
  std::cout << "word " << plan.path.word_string() << ", length " << plan.path.length
            << " m\n";
  if (!args.svg_path.empty())
    write_file(args.svg_path, render_dubins_svg(plan.path, current.loiter_circle.radius,
                                                target_circle.radius));
  return kExitOk;
}

int cmd_render(const CommonArgs& args, const std::string& packing_path) {
  Scenario scenario = load_scenario(args.scenario_path);
  apply_overrides(scenario, args);
  Packing packing = build_packing(*scenario.polygon, scenario.config, scenario.packing);
  if (!packing_path.empty()) {
    // Cross-check that the provided packing matches the scenario.
    std::ifstream in(packing_path);
    if (!in) throw std::runtime_error("cannot open packing: " + packing_path);
    const json j = json::parse(in);
    if (j.at("base_squares").size() != packing.base_squares().size())
      throw std::runtime_error("packing file does not match the scenario");
  }
  const std::string svg = render_packing_svg(packing, *scenario.polygon);
  write_file(args.svg_path.empty() ? fs::path(args.out_dir) / "packing.svg"
                                   : fs::path(args.svg_path),
             svg);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilient multi-level loiter coverage simulator"};
  app.require_subcommand(1);

  CommonArgs args;
  bool frames = false, transitions = false;
  std::string snapshot_path, packing_path;

  auto add_common = [&](CLI::App* cmd, bool scenario_required = true) {
    auto* opt = cmd->add_option("--scenario", args.scenario_path, "scenario JSON file");
    if (scenario_required) opt->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--svg", args.svg_path, "SVG output path");
    cmd->add_option("--resolution", args.resolution, "coverage grid resolution (m)");
    cmd->add_option("--classification", args.classification, "paper|robust")
        ->check(CLI::IsMember({"paper", "robust"}));
    cmd->add_option("--policy", args.policy, "effective-coverage|phase-nearest")
        ->check(CLI::IsMember({"effective-coverage", "phase-nearest"}));
    cmd->add_option("--dt", args.dt, "simulation step (s)");
    cmd->add_option("--seed", args.seed, "override seed of random drop events")
        ->each([&](const std::string&) { args.seed_set = true; });
  };

  CLI::App* pack = app.add_subcommand("pack", "build and export the square packing");
  add_common(pack);
  CLI::App* simulate = app.add_subcommand("simulate", "run a scenario");
  add_common(simulate);
  simulate->add_flag("--frames", frames, "emit drop/recovery keyframe SVGs");
  simulate->add_flag("--transitions", transitions, "emit transition-path SVG");
  CLI::App* verify = app.add_subcommand("verify-coverage", "check the coverage predicate");
  add_common(verify);
  verify->add_option("--snapshot", snapshot_path, "fleet snapshot JSON (default: initial)");
  CLI::App* plan = app.add_subcommand("plan-dubins", "plan one level transition");
  add_common(plan);
  CLI::App* render = app.add_subcommand("render", "render a packing SVG");
  add_common(render);
  render->add_option("--packing", packing_path, "packing JSON to cross-check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(pack)) return cmd_pack(args);
    if (app.got_subcommand(simulate)) return cmd_simulate(args, frames, transitions);
    if (app.got_subcommand(verify)) return cmd_verify_coverage(args, snapshot_path);
    if (app.got_subcommand(plan)) return cmd_plan_dubins(args);
    if (app.got_subcommand(render)) return cmd_render(args, packing_path);
  } catch (const PlanningError& e) {
    std::cerr << "planning failed: " << e.what() << "\n";
    return kExitPredicateFalse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
