#include "loitercov/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace loitercov {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

SvgCanvas::SvgCanvas(Point2 world_min, Point2 world_max, double pixels_per_meter,
                     double margin_m)
    : world_min_(world_min), scale_(pixels_per_meter), margin_(margin_m) {
  width_px_ = (world_max.x - world_min.x + 2.0 * margin_m) * scale_;
  height_px_ = (world_max.y - world_min.y + 2.0 * margin_m) * scale_;
}

Point2 SvgCanvas::to_px(Point2 world) const {
  return {(world.x - world_min_.x + margin_) * scale_,
          height_px_ - (world.y - world_min_.y + margin_) * scale_};
}

void SvgCanvas::line(Point2 a, Point2 b, const std::string& stroke, double width,
                     const std::string& dash) {
  const Point2 pa = to_px(a), pb = to_px(b);
  body_ += "<line x1=\"" + num(pa.x) + "\" y1=\"" + num(pa.y) + "\" x2=\"" + num(pb.x) +
           "\" y2=\"" + num(pb.y) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
           num(width) + "\"";
  if (!dash.empty()) body_ += " stroke-dasharray=\"" + dash + "\"";
  body_ += "/>\n";
}

void SvgCanvas::polyline(std::span<const Point2> pts, const std::string& stroke,
                         double width, const std::string& dash) {
  body_ += "<polyline points=\"";
  for (const Point2& p : pts) {
    const Point2 q = to_px(p);
    body_ += num(q.x) + "," + num(q.y) + " ";
  }
  body_ += "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"";
  if (!dash.empty()) body_ += " stroke-dasharray=\"" + dash + "\"";
  body_ += "/>\n";
}

void SvgCanvas::polygon(std::span<const Point2> pts, const std::string& stroke,
                        const std::string& fill, double width, const std::string& dash) {
  body_ += "<polygon points=\"";
  for (const Point2& p : pts) {
    const Point2 q = to_px(p);
    body_ += num(q.x) + "," + num(q.y) + " ";
  }
  body_ += "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
           num(width) + "\"";
  if (!dash.empty()) body_ += " stroke-dasharray=\"" + dash + "\"";
  body_ += "/>\n";
}

void SvgCanvas::circle(Point2 center, double radius, const std::string& stroke,
                       const std::string& fill, double width, const std::string& dash) {
  const Point2 c = to_px(center);
  body_ += "<circle cx=\"" + num(c.x) + "\" cy=\"" + num(c.y) + "\" r=\"" +
           num(radius * scale_) + "\" fill=\"" + fill + "\" stroke=\"" + stroke +
           "\" stroke-width=\"" + num(width) + "\"";
  if (!dash.empty()) body_ += " stroke-dasharray=\"" + dash + "\"";
  body_ += "/>\n";
}

void SvgCanvas::rect(Point2 center, double side, const std::string& stroke,
                     const std::string& fill, double width, const std::string& dash) {
  const Point2 tl = to_px({center.x - side / 2.0, center.y + side / 2.0});
  body_ += "<rect x=\"" + num(tl.x) + "\" y=\"" + num(tl.y) + "\" width=\"" +
           num(side * scale_) + "\" height=\"" + num(side * scale_) + "\" fill=\"" + fill +
           "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"";
  if (!dash.empty()) body_ += " stroke-dasharray=\"" + dash + "\"";
  body_ += "/>\n";
}

void SvgCanvas::arrow(Point2 p, double heading, double size_m, const std::string& color) {
  const Point2 tip{p.x + size_m * std::cos(heading), p.y + size_m * std::sin(heading)};
  const double back = heading + kPi;
  const double spread = 0.4;
  const Point2 l{tip.x + 0.6 * size_m * std::cos(back + spread),
                 tip.y + 0.6 * size_m * std::sin(back + spread)};
  const Point2 r{tip.x + 0.6 * size_m * std::cos(back - spread),
                 tip.y + 0.6 * size_m * std::sin(back - spread)};
  line(p, tip, color, 1.2);
  const std::array<Point2, 3> head{tip, l, r};
  polygon(head, color, color, 1.0);
}

void SvgCanvas::text(Point2 p, const std::string& s, double size_px,
                     const std::string& color) {
  const Point2 q = to_px(p);
  body_ += "<text x=\"" + num(q.x) + "\" y=\"" + num(q.y) + "\" font-size=\"" +
           num(size_px) + "\" fill=\"" + color + "\">" + s + "</text>\n";
}

std::string SvgCanvas::str() const {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_px_)
      << "\" height=\"" << num(height_px_) << "\" viewBox=\"0 0 " << num(width_px_) << " "
      << num(height_px_) << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_ << "</svg>\n";
  return out.str();
}

namespace {

SvgCanvas canvas_for(const Packing& packing) {
  const Point2 lo = packing.bounding().min_corner;
  const Point2 hi{lo.x + packing.bounding().side, lo.y + packing.bounding().side};
  return SvgCanvas(lo, hi);
}

void draw_polygon_outline(SvgCanvas& svg, const Polygon& poly) {
  svg.polygon(poly.vertices(), "black", "none", 2.0);
}

}  // namespace

std::string render_packing_svg(const Packing& packing, const Polygon& poly) {
  SvgCanvas svg = canvas_for(packing);
  for (SquareId id : packing.base_squares()) {
    const PackSquare& sq = packing.square(id);
    svg.rect(sq.center, sq.side, "gray", "none", 1.0, "6,4");
  }
  for (SquareId id : packing.base_squares()) {
    const PackSquare& sq = packing.square(id);
    svg.circle(sq.center, sq.loiter_circle().radius, "red", "none", 1.0);
  }
  draw_polygon_outline(svg, poly);
  return svg.str();
}

std::string render_frame_svg(const Packing& packing, const Polygon& poly,
                             std::span<const UavState> fleet, bool draw_circles) {
  SvgCanvas svg = canvas_for(packing);
  for (const UavState& a : fleet) {
    if (a.assigned_square == kNoSquare) continue;
    const PackSquare& sq = packing.square(a.assigned_square);
    switch (a.mode) {
      case UavMode::dropped:
        svg.rect(sq.center, sq.side, "peru", "peru");
        break;
      case UavMode::transitioning:
        svg.rect(sq.center, sq.side, "royalblue", "royalblue");
        break;
      case UavMode::loitering:
        if (a.level > 1)
          svg.rect(sq.center, sq.side, "royalblue", "royalblue");
        else
          svg.rect(sq.center, sq.side, "darkgray", "lightgray");
        break;
    }
  }
  if (draw_circles) {
    for (const UavState& a : fleet) {
      if (a.mode != UavMode::loitering) continue;
      svg.circle(a.loiter_circle.center, a.loiter_circle.radius,
                 a.level > 1 ? "royalblue" : "red", "none", 1.0);
    }
  }
  draw_polygon_outline(svg, poly);
  return svg.str();
}

std::string render_transitions_svg(const Packing& packing, const Polygon& poly,
                                   std::span<const UavState> fleet,
                                   std::span<const TransitionPlan> plans) {
  SvgCanvas svg = canvas_for(packing);
  for (const UavState& a : fleet) {
    if (a.mode != UavMode::loitering || a.level != 1) continue;
    svg.circle(a.loiter_circle.center, a.loiter_circle.radius, "silver", "none", 0.8);
  }
  for (const TransitionPlan& plan : plans) {
    svg.circle(Point2{plan.path.start.x, plan.path.start.y}, 3.0, "peru", "peru");
    svg.circle(plan.target_circle.center, plan.target_circle.radius, "royalblue", "none",
               1.4);
    const std::vector<Pose3> poses = sample_path(plan.path, 0.5);
    std::vector<Point2> pts;
    pts.reserve(poses.size());
    for (const Pose3& p : poses) pts.push_back(p.position());
    svg.polyline(pts, "saddlebrown", 1.6);
    const std::size_t step = std::max<std::size_t>(1, poses.size() / 6);
    for (std::size_t i = 0; i < poses.size(); i += step)
      svg.arrow(poses[i].position(), poses[i].heading, 14.0, "saddlebrown");
  }
  draw_polygon_outline(svg, poly);
  return svg.str();
}

std::string render_dubins_svg(const DubinsPath3D& path, double r_start, double r_goal) {
  std::vector<Pose3> poses = sample_path(path, 0.25);
  Point2 lo{path.start.x, path.start.y}, hi = lo;
  for (const Pose3& p : poses) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  const double pad = std::max(r_start, r_goal) + 20.0;
  SvgCanvas svg({lo.x - pad, lo.y - pad}, {hi.x + pad, hi.y + pad}, 1.0, 20.0);
  // Loiter circles are counter-clockwise, so centers sit left of the heading.
  auto left_center = [](const Pose3& p, double r) {
    return Point2{p.x + r * std::cos(p.heading + kPi / 2.0),
                  p.y + r * std::sin(p.heading + kPi / 2.0)};
  };
  if (r_start > 0.0) svg.circle(left_center(path.start, r_start), r_start, "peru", "none", 1.4);
  if (r_goal > 0.0)
    svg.circle(left_center(path.goal, r_goal), r_goal, "royalblue", "none", 1.4);
  std::vector<Point2> pts;
  pts.reserve(poses.size());
  for (const Pose3& p : poses) pts.push_back(p.position());
  svg.polyline(pts, "black", 1.6);
  const std::size_t step = std::max<std::size_t>(1, poses.size() / 8);
  for (std::size_t i = 0; i < poses.size(); i += step)
    svg.arrow(poses[i].position(), poses[i].heading, std::max(6.0, r_goal * 0.12), "black");
  svg.circle(pts.front(), 3.0, "peru", "peru");
  svg.circle(pts.back(), 3.0, "royalblue", "royalblue");
  return svg.str();
}

}  // namespace loitercov
