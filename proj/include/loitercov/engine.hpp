#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "loitercov/protocol.hpp"

namespace loitercov {

inline constexpr int kSchemaVersion = 1;

struct DropEventSpec {
  double time = 0.0;
  std::vector<UavId> uav_ids;  // explicit ids, or:
  int count = 0;               // random selection of `count` live agents
  std::uint64_t seed = 0;      // seed for the random selection
};

struct OutputOptions {
  int snapshot_every = 10;  // steps between trace snapshots
  int coverage_every = 10;  // steps between coverage evaluations
  bool include_tables = false;
};

struct Scenario {
  std::optional<Polygon> polygon;  // required; optional only for staged construction
  FleetConfig config;
  double duration = 0.0;
  double dt = 0.1;
  double grid_resolution = 0.0;  // 0 -> r_l_min / 20
  PackingOptions packing;
  SelectionPolicy policy = SelectionPolicy::effective_coverage;
  std::vector<DropEventSpec> events;
  OutputOptions output;

  double resolved_grid_resolution() const {
    return grid_resolution > 0.0 ? grid_resolution : config.r_l_min / 20.0;
  }
  void validate() const;

  static Scenario from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

Scenario load_scenario(const std::string& path);

struct RunCounters {
  int initial_agents = 0;
  int dropped = 0;
  int promotions = 0;
  int lend_transitions = 0;
  int unrecoverable = 0;
  int arrivals = 0;
};

struct RunResult {
  std::vector<std::string> trace;  // JSONL records: snapshot / message / decision / event
  std::string metrics_csv;
  nlohmann::json report;
  CoverageReport final_coverage;
  std::vector<UavState> final_fleet;
  std::vector<RecoveryDecision> decisions;
  std::vector<TransitionPlan> plans;  // every transition dispatched during the run
  RunCounters counters;
};

// One agent per inside base square, loitering at level 1 on the level clock.
std::vector<UavState> initial_deploy(const Packing& packing, const FleetConfig& config);

// Deterministic discrete-time loop: kinematics, one protocol round per step,
// event injection, recovery, snapshotting. Identical scenarios produce
// byte-identical traces.
class Engine {
 public:
  explicit Engine(Scenario scenario);

  RunResult run();

  const Packing& packing() const { return packing_; }

 private:
  Scenario scenario_;
  Packing packing_;
};

RunResult run_scenario(const Scenario& scenario);

// JSON forms of the external file interfaces.
nlohmann::json packing_to_json(const Packing& packing);
nlohmann::json fleet_to_json(std::span<const UavState> fleet);
std::vector<UavState> fleet_from_json(const nlohmann::json& j, double velocity);
nlohmann::json coverage_report_to_json(const CoverageReport& report, int max_uncovered = 64);
nlohmann::json config_to_json(const FleetConfig& config);
FleetConfig config_from_json(const nlohmann::json& j);

// FNV-1a over the concatenated trace lines; convenient determinism check.
std::uint64_t trace_hash(const std::vector<std::string>& trace);

}  // namespace loitercov
