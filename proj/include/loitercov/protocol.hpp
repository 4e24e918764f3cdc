#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "loitercov/coverage.hpp"
#include "loitercov/dubins.hpp"
#include "loitercov/packing.hpp"

namespace loitercov {

enum class NeighborLabel { dropped = 0, active = 1, promoted = 2 };

// Per-agent view of the agents within communication range. Labels only ever
// move 1 -> 0, 1 -> 2 or 2 -> 0.
struct NeighborTable {
  UavId owner = kNoUav;
  std::map<UavId, NeighborLabel> entries;
};

// Agents (live or dropped) within r_com of the agent, by 3D distance,
// inclusive. Throws when r_com violates the sqrt(2) * r_l_max bound.
NeighborTable build_neighborhood(const UavState& agent, std::span<const UavState> all,
                                 const FleetConfig& config);

struct DropEvent {
  UavId observer = kNoUav;
  UavId dropped = kNoUav;
};

// Flips table entries of agents missing from `live` to dropped and returns
// one event per (observer, dropped) flip.
std::vector<DropEvent> detect_failures(std::vector<NeighborTable>& tables,
                                       const std::set<UavId>& live);

enum class DecisionKind { promotion, lend_primary, lend_deficit, unrecoverable };

std::string decision_kind_name(DecisionKind kind);

struct RecoveryDecision {
  SquareId failed_super_square = kNoSquare;
  UavId chosen_uav = kNoUav;
  SquareId target_square = kNoSquare;  // square whose loiter circle to occupy
  int target_level = 0;
  DecisionKind kind = DecisionKind::unrecoverable;
};

enum class SelectionPolicy { effective_coverage, phase_nearest };

struct SelectionContext {
  const Polygon* polygon = nullptr;
  std::span<const UavState> fleet;  // for overlap neighborhoods
  Circle target_circle;
  int target_level = 1;
  LevelClock target_clock;
  double t_now = 0.0;
  const FleetConfig* config = nullptr;
};

// Chooses the survivor to send to the higher level. Default policy: smallest
// effective coverage (its departure sacrifices the least base-level
// coverage), planned-transfer length as tie-break; phase_nearest ranks by
// planned-transfer length directly. Lowest id breaks exact ties. A single
// survivor is chosen unconditionally.
UavId select_recovery_uav(std::span<const UavState> group, SelectionPolicy policy,
                          const SelectionContext& ctx);

// One decision per affected super-square, levels resolved bottom-up:
// survivors present -> a single promotion; none -> the nearest neighbor
// super-square with at least two spare members lends x1 (to the failed
// square's circle) and x2 (to its own); recovery past max_level or without a
// donor -> unrecoverable.
std::vector<RecoveryDecision> resolve_failures(const Packing& packing,
                                               std::span<const UavState> fleet,
                                               const std::set<UavId>& drops,
                                               SelectionPolicy policy,
                                               const Polygon& poly, double t_now);

// Marks the chosen agent transitioning with a synchronized plan toward the
// decision's target circle. Throws InvalidModeError for unrecoverable input.
void apply_decision(const RecoveryDecision& decision, std::vector<UavState>& fleet,
                    const Packing& packing, double t_now);

enum class MessageKind {
  heartbeat,
  drop_report,
  claim_promotion,
  lend_request,
  lend_grant,
  level_update
};

std::string message_kind_name(MessageKind kind);

struct ProtocolMessage {
  UavId from = kNoUav;
  UavId to = kNoUav;
  MessageKind kind = MessageKind::heartbeat;
  std::string payload;
  double timestamp = 0.0;
};

}  // namespace loitercov
