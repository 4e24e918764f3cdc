#include "loitercov/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace loitercov {

std::string decision_kind_name(DecisionKind kind) {
  switch (kind) {
    case DecisionKind::promotion: return "promotion";
    case DecisionKind::lend_primary: return "lend_primary";
    case DecisionKind::lend_deficit: return "lend_deficit";
    default: return "unrecoverable";
  }
}

std::string message_kind_name(MessageKind kind) {
  switch (kind) {
    case MessageKind::heartbeat: return "heartbeat";
    case MessageKind::drop_report: return "drop_report";
    case MessageKind::claim_promotion: return "claim_promotion";
    case MessageKind::lend_request: return "lend_request";
    case MessageKind::lend_grant: return "lend_grant";
    default: return "level_update";
  }
}

namespace {

NeighborLabel label_for(const UavState& agent) {
  if (agent.mode == UavMode::dropped) return NeighborLabel::dropped;
  if (agent.level > 1) return NeighborLabel::promoted;
  if (agent.mode == UavMode::transitioning && agent.transition &&
      agent.transition->target_level > 1)
    return NeighborLabel::promoted;
  return NeighborLabel::active;
}

double distance3(const Pose3& a, const Pose3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dh = a.h - b.h;
  return std::sqrt(dx * dx + dy * dy + dh * dh);
}

}  // namespace

NeighborTable build_neighborhood(const UavState& agent, std::span<const UavState> all,
                                 const FleetConfig& config) {
  if (config.r_com < config.min_r_com())
    throw InvalidConfigError("r_com is below sqrt(2) * r_l_max");
  NeighborTable table;
  table.owner = agent.id;
  for (const UavState& other : all) {
    if (other.id == agent.id) continue;
    if (distance3(agent.position, other.position) <= config.r_com)
      table.entries[other.id] = label_for(other);
  }
  return table;
}

std::vector<DropEvent> detect_failures(std::vector<NeighborTable>& tables,
                                       const std::set<UavId>& live) {
  std::vector<DropEvent> events;
  for (NeighborTable& table : tables) {
    if (!live.contains(table.owner)) continue;  // dropped agents observe nothing
    for (auto& [id, label] : table.entries) {
      if (label != NeighborLabel::dropped && !live.contains(id)) {
        label = NeighborLabel::dropped;
        events.push_back({table.owner, id});
      }
    }
  }
  return events;
}

namespace {

std::vector<UavId> rank_by_transfer_length(std::span<const UavState> candidates,
                                           const SelectionContext& ctx) {
  struct Ranked {
    UavId id;
    double length;
  };
  std::vector<Ranked> ranked;
  for (const UavState& c : candidates) {
    double len = std::numeric_limits<double>::infinity();
    try {
      const TransitionPlan plan =
          plan_level_transition(c, ctx.target_circle, ctx.target_level,
                                ctx.target_clock, ctx.t_now, *ctx.config);
      len = plan.path.length;
    } catch (const PlanningError&) {
      // Unreachable candidates rank last.
    }
    ranked.push_back({c.id, len});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (std::abs(a.length - b.length) > 1e-9) return a.length < b.length;
    return a.id < b.id;
  });
  std::vector<UavId> ids;
  for (const Ranked& r : ranked) ids.push_back(r.id);
  return ids;
}

}  // namespace

UavId select_recovery_uav(std::span<const UavState> group, SelectionPolicy policy,
                          const SelectionContext& ctx) {
  if (group.empty()) throw InvalidConfigError("selection over an empty survivor group");
  if (group.size() == 1) return group.front().id;

  if (policy == SelectionPolicy::phase_nearest) {
    return rank_by_transfer_length(group, ctx).front();
  }

  // Default: smallest effective coverage; planned transfer length breaks ties.
  std::vector<std::pair<UavId, double>> scored;
  for (const UavState& c : group) {
    std::vector<UavState> neighbors;
    for (const UavState& other : ctx.fleet) {
      if (other.id == c.id || other.mode != UavMode::loitering ||
          other.level != c.level)
        continue;
      if (distance(other.loiter_circle.center, c.loiter_circle.center) <
          other.loiter_circle.radius + c.loiter_circle.radius)
        neighbors.push_back(other);
    }
    scored.emplace_back(c.id, effective_coverage(c, neighbors, *ctx.polygon));
  }
  double min_e = std::numeric_limits<double>::infinity();
  for (const auto& [id, e] : scored) min_e = std::min(min_e, e);

  std::vector<UavState> tied;
  for (const UavState& c : group) {
    for (const auto& [id, e] : scored) {
      if (id == c.id && e <= min_e + 1e-9) tied.push_back(c);
    }
  }
  if (tied.size() == 1) return tied.front().id;
  return rank_by_transfer_length(tied, ctx).front();
}

namespace {

// A square's region is covered when a live agent is assigned to it or to any
// ancestor square.
bool covered_by_self_or_ancestor(SquareId id, const Packing& packing,
                                 const std::map<SquareId, int>& assigned_live) {
  SquareId cur = id;
  while (cur != kNoSquare) {
    if (assigned_live.contains(cur)) return true;
    cur = packing.square(cur).parent;
  }
  return false;
}

}  // namespace

std::vector<RecoveryDecision> resolve_failures(const Packing& packing,
                                               std::span<const UavState> fleet,
                                               const std::set<UavId>& drops,
                                               SelectionPolicy policy,
                                               const Polygon& poly, double t_now) {
  (void)drops;  // holes are recomputed from the fleet state itself
  std::vector<RecoveryDecision> decisions;

  // Live-assignment index and per-agent lookup.
  std::map<SquareId, int> assigned_live;  // square -> live agent count
  std::map<UavId, const UavState*> by_id;
  for (const UavState& a : fleet) {
    by_id[a.id] = &a;
    if (a.mode != UavMode::dropped && a.assigned_square != kNoSquare)
      ++assigned_live[a.assigned_square];
  }

  // Uncovered base squares, grouped by their super-square.
  std::map<SquareId, std::vector<SquareId>> holes_by_parent;
  for (SquareId base : packing.base_squares()) {
    if (!covered_by_self_or_ancestor(base, packing, assigned_live))
      holes_by_parent[packing.square(base).parent].push_back(base);
  }

  std::set<UavId> chosen;
  const FleetConfig& config = packing.config();

  auto selectable_under = [&](SquareId parent) {
    std::vector<UavState> out;
    for (SquareId child : packing.square(parent).children) {
      if (child == kNoSquare) continue;
      for (const UavState& a : fleet) {
        if (a.mode == UavMode::loitering && a.assigned_square == child &&
            !chosen.contains(a.id))
          out.push_back(a);
      }
    }
    std::sort(out.begin(), out.end(),
              [](const UavState& a, const UavState& b) { return a.id < b.id; });
    return out;
  };

  auto make_context = [&](SquareId target_square) {
    const PackSquare& target = packing.square(target_square);
    SelectionContext ctx;
    ctx.polygon = &poly;
    ctx.fleet = fleet;
    ctx.target_circle = target.loiter_circle();
    ctx.target_level = target.level;
    ctx.target_clock = make_level_clock(target.level, config);
    ctx.t_now = t_now;
    ctx.config = &config;
    return ctx;
  };

  // Worklist of affected super-squares, resolved lowest level first.
  std::vector<SquareId> worklist;
  for (const auto& [parent, holes] : holes_by_parent) worklist.push_back(parent);
  std::sort(worklist.begin(), worklist.end(), [&](SquareId a, SquareId b) {
    if (packing.square(a).level != packing.square(b).level)
      return packing.square(a).level < packing.square(b).level;
    return a < b;
  });

  std::set<SquareId> visited;
  for (std::size_t wi = 0; wi < worklist.size(); ++wi) {
    const SquareId parent = worklist[wi];
    if (visited.contains(parent)) continue;
    visited.insert(parent);
    const PackSquare& super_sq = packing.square(parent);

    if (covered_by_self_or_ancestor(parent, packing, assigned_live)) continue;
    if (super_sq.level > config.max_level) {
      decisions.push_back({parent, kNoUav, kNoSquare, super_sq.level,
                           DecisionKind::unrecoverable});
      continue;
    }

    const std::vector<UavState> survivors = selectable_under(parent);
    if (!survivors.empty()) {
      const UavId id = select_recovery_uav(survivors, policy, make_context(parent));
      decisions.push_back(
          {parent, id, parent, super_sq.level, DecisionKind::promotion});
      chosen.insert(id);
      ++assigned_live[parent];
      --assigned_live[by_id[id]->assigned_square];
      if (assigned_live[by_id[id]->assigned_square] == 0)
        assigned_live.erase(by_id[id]->assigned_square);
      continue;
    }

    // No survivors below: borrow from the nearest peer square that can spare
    // two members, one for the failed region and one for its own umbrella.
    std::vector<SquareId> peers = packing.inside_squares(super_sq.level);
    std::sort(peers.begin(), peers.end(), [&](SquareId a, SquareId b) {
      const double da = distance(packing.square(a).center, super_sq.center);
      const double db = distance(packing.square(b).center, super_sq.center);
      if (std::abs(da - db) > 1e-9) return da < db;
      return a < b;
    });
    SquareId donor = kNoSquare;
    std::vector<UavState> donor_pool;
    for (SquareId peer : peers) {
      if (peer == parent) continue;
      std::vector<UavState> pool = selectable_under(peer);
      if (pool.size() >= 2) {
        donor = peer;
        donor_pool = std::move(pool);
        break;
      }
    }
    if (donor != kNoSquare) {
      const UavId x1 = select_recovery_uav(donor_pool, policy, make_context(parent));
      chosen.insert(x1);
      std::vector<UavState> rest;
      for (const UavState& a : donor_pool)
        if (a.id != x1) rest.push_back(a);
      const UavId x2 = select_recovery_uav(rest, policy, make_context(donor));
      chosen.insert(x2);
      decisions.push_back(
          {parent, x1, parent, super_sq.level, DecisionKind::lend_primary});
      decisions.push_back(
          {parent, x2, donor, super_sq.level, DecisionKind::lend_deficit});
      ++assigned_live[parent];
      ++assigned_live[donor];
      for (UavId moved : {x1, x2}) {
        const SquareId from = by_id[moved]->assigned_square;
        if (--assigned_live[from] == 0) assigned_live.erase(from);
      }
      continue;
    }

    // Escalate one level up; the worklist is level-ordered so the parent is
    // processed after all squares of this level.
    if (super_sq.parent != kNoSquare && super_sq.level + 1 <= config.max_level) {
      worklist.push_back(super_sq.parent);
      std::stable_sort(worklist.begin() + wi + 1, worklist.end(),
                       [&](SquareId a, SquareId b) {
                         if (packing.square(a).level != packing.square(b).level)
                           return packing.square(a).level < packing.square(b).level;
                         return a < b;
                       });
    } else {
      decisions.push_back({parent, kNoUav, kNoSquare, super_sq.level + 1,
                           DecisionKind::unrecoverable});
    }
  }
  return decisions;
}

void apply_decision(const RecoveryDecision& decision, std::vector<UavState>& fleet,
                    const Packing& packing, double t_now) {
  if (decision.kind == DecisionKind::unrecoverable)
    throw InvalidModeError("cannot apply an unrecoverable decision");
  UavState* agent = nullptr;
  for (UavState& a : fleet) {
    if (a.id == decision.chosen_uav) agent = &a;
  }
  if (agent == nullptr || agent->mode != UavMode::loitering)
    throw InvalidModeError("decision targets an agent that is not loitering");

  const PackSquare& target = packing.square(decision.target_square);
  const FleetConfig& config = packing.config();
  const LevelClock clock = make_level_clock(target.level, config);
  TransitionPlan plan = plan_level_transition(*agent, target.loiter_circle(),
                                              target.level, clock, t_now, config,
                                              decision.target_square);
  agent->mode = UavMode::transitioning;
  agent->assigned_square = decision.target_square;
  agent->transition = std::make_shared<TransitionPlan>(std::move(plan));
}

}  // namespace loitercov
