#pragma once

#include <span>
#include <string>

#include "loitercov/dubins.hpp"
#include "loitercov/engine.hpp"

namespace loitercov {

// Minimal SVG writer in world coordinates (meters, y up). The canvas flips
// the y axis and adds a margin so output matches the usual plot orientation.
class SvgCanvas {
 public:
  SvgCanvas(Point2 world_min, Point2 world_max, double pixels_per_meter = 0.5,
            double margin_m = 40.0);

  void line(Point2 a, Point2 b, const std::string& stroke, double width = 1.0,
            const std::string& dash = "");
  void polyline(std::span<const Point2> pts, const std::string& stroke,
                double width = 1.0, const std::string& dash = "");
  void polygon(std::span<const Point2> pts, const std::string& stroke,
               const std::string& fill, double width = 1.5,
               const std::string& dash = "");
  void circle(Point2 center, double radius, const std::string& stroke,
              const std::string& fill, double width = 1.0,
              const std::string& dash = "");
  void rect(Point2 center, double side, const std::string& stroke,
            const std::string& fill, double width = 1.0, const std::string& dash = "");
  // Small arrowhead at p pointing along heading (radians).
  void arrow(Point2 p, double heading, double size_m, const std::string& color);
  void text(Point2 p, const std::string& s, double size_px = 12.0,
            const std::string& color = "black");

  std::string str() const;

 private:
  Point2 to_px(Point2 world) const;

  Point2 world_min_;
  double scale_;
  double margin_;
  double width_px_, height_px_;
  std::string body_;
};

std::string render_packing_svg(const Packing& packing, const Polygon& poly);

// Fleet frame in the style used for failure/recovery plots: gray squares for
// active base agents, solid brown for dropped, solid blue for recovery agents
// at higher levels, circles for the active loiter paths.
std::string render_frame_svg(const Packing& packing, const Polygon& poly,
                             std::span<const UavState> fleet, bool draw_circles);

// Transition paths between levels with heading arrows along each path.
std::string render_transitions_svg(const Packing& packing, const Polygon& poly,
                                   std::span<const UavState> fleet,
                                   std::span<const TransitionPlan> plans);

std::string render_dubins_svg(const DubinsPath3D& path, double r_start, double r_goal);

}  // namespace loitercov
