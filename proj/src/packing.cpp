#include "loitercov/packing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace loitercov {

double min_turn_radius(double velocity, double psi_max, double g) {
  if (!(velocity > 0.0) || !(psi_max > 0.0) || !(g > 0.0))
    throw InvalidConfigError("turn-radius inputs must be positive");
  return velocity * velocity * psi_max / g;
}

double min_turn_radius_coordinated(double velocity, double psi_max, double g) {
  if (!(velocity > 0.0) || !(psi_max > 0.0) || !(g > 0.0))
    throw InvalidConfigError("turn-radius inputs must be positive");
  if (psi_max >= kPi / 2.0) throw InvalidConfigError("bank angle must be below pi/2");
  return velocity * velocity / (g * std::tan(psi_max));
}

double loiter_radius_for_level(int level, double r_l_min) {
  if (level < 1 || level > kMaxHierarchyLevels)
    throw std::out_of_range("altitude level out of range 1..4");
  return std::ldexp(r_l_min, level - 1);
}

double FleetConfig::min_turn() const {
  return turn_radius_model == TurnRadiusModel::paper
             ? min_turn_radius(velocity, psi_max, g)
             : min_turn_radius_coordinated(velocity, psi_max, g);
}

void FleetConfig::validate() const {
  if (!(r_l_min > 0.0)) throw InvalidConfigError("r_l_min must be positive");
  if (!(velocity > 0.0)) throw InvalidConfigError("velocity must be positive");
  if (!(psi_max > 0.0)) throw InvalidConfigError("psi_max must be positive");
  if (!(g > 0.0)) throw InvalidConfigError("g must be positive");
  if (max_level < 1 || max_level > kMaxHierarchyLevels)
    throw InvalidConfigError("max_level must be in 1..4");
  if (!(fov_half_angle > 0.0) || !(fov_half_angle < kPi / 2.0))
    throw InvalidConfigError("fov_half_angle must be in (0, pi/2)");
  if (r_l_min < min_turn())
    throw InvalidConfigError("r_l_min is below the minimum turning radius");
  if (r_com < min_r_com())
    throw InvalidConfigError("r_com is below sqrt(2) * r_l_max");
  if (!(max_climb_rate > 0.0)) throw InvalidConfigError("max_climb_rate must be positive");
}

Packing::Packing(FleetConfig config, PackingOptions options, BoundingSquare bounding,
                 std::vector<PackSquare> squares)
    : config_(std::move(config)),
      options_(options),
      bounding_(bounding),
      squares_(std::move(squares)) {
  for (const PackSquare& sq : squares_) {
    if (sq.level == 1 && sq.inside) base_squares_.push_back(sq.id);
  }
}

const PackSquare& Packing::square(SquareId id) const {
  if (id < 0 || id >= static_cast<SquareId>(squares_.size()))
    throw std::out_of_range("unknown square id");
  return squares_[id];
}

std::vector<SquareId> Packing::inside_squares(int level) const {
  std::vector<SquareId> out;
  for (const PackSquare& sq : squares_) {
    if (sq.level == level && sq.inside) out.push_back(sq.id);
  }
  return out;
}

SquareId Packing::super_square_of(SquareId id) const {
  const PackSquare& sq = square(id);
  if (sq.parent == kNoSquare)
    throw InvalidConfigError("square at the top level has no super-square");
  return sq.parent;
}

std::vector<SquareId> Packing::sibling_group(SquareId id) const {
  const SquareId parent = super_square_of(id);
  std::vector<SquareId> out;
  for (SquareId child : square(parent).children) {
    if (child != kNoSquare && square(child).inside) out.push_back(child);
  }
  return out;
}

namespace {

int grid_dim(int level) { return 1 << (kMaxHierarchyLevels + 1 - level); }  // 16,8,4,2

int level_id_offset(int level) {
  // Top-down: level 4 first.
  int off = 0;
  for (int l = kMaxHierarchyLevels; l > level; --l) off += grid_dim(l) * grid_dim(l);
  return off;
}

}  // namespace

Packing build_packing(const Polygon& poly, const FleetConfig& config,
                      const PackingOptions& options) {
  config.validate();
  const double r = config.r_l_min;
  const double span = 16.0 * r;

  const Point2 pmin = poly.min_corner();
  const Point2 pmax = poly.max_corner();
  Point2 anchor = pmin;
  if (options.anchor == AnchorMode::scalar) {
    const double m = std::min(pmin.x, pmin.y);
    anchor = {m, m};
  }
  const double extent_x = pmax.x - anchor.x;
  const double extent_y = pmax.y - anchor.y;
  const double extent = std::max(extent_x, extent_y);
  if (extent > span) {
    int multiple = 16;
    while (multiple * r < extent) multiple *= 2;
    std::ostringstream msg;
    msg << "area extent " << extent << " m exceeds the bounding square (" << span
        << " m); a bounding square of " << multiple << " * r_l_min would be required";
    throw AreaTooLargeError(msg.str(), multiple);
  }

  const BoundingSquare bounding{anchor, span};

  std::vector<PackSquare> squares(level_id_offset(0));
  for (int level = kMaxHierarchyLevels; level >= 1; --level) {
    const int n = grid_dim(level);
    const double side = span / n;
    const int offset = level_id_offset(level);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        PackSquare sq;
        sq.id = offset + j * n + i;
        sq.level = level;
        sq.side = side;
        sq.center = {anchor.x + (i + 0.5) * side, anchor.y + (j + 0.5) * side};
        for (const Point2& v : square_vertices(sq.center, side)) {
          if (point_in_polygon(v, poly)) ++sq.vertex_inside_count;
        }
        switch (options.classification) {
          case Classification::paper:
            sq.inside = sq.vertex_inside_count >= 1;
            break;
          case Classification::robust:
            sq.inside = polygon_area_in_square(poly, sq.center, side) > 1e-9;
            break;
        }
        if (level < kMaxHierarchyLevels) {
          const int pn = grid_dim(level + 1);
          const int pi = i / 2, pj = j / 2;
          sq.parent = level_id_offset(level + 1) + pj * pn + pi;
          squares[sq.parent].children[(j % 2) * 2 + (i % 2)] = sq.id;
        }
        squares[sq.id] = sq;
      }
    }
  }

  return Packing(config, options, bounding, std::move(squares));
}

}  // namespace loitercov
