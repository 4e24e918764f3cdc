#pragma once

#include <vector>

#include "loitercov/engine.hpp"

namespace loitercov::fixtures {

// The bundled demo area ("UH" glyphs), vertices as in data/uh.json.
inline Polygon uh_polygon() {
  const std::vector<double> xs = {100,  50,   100,  200,  275,  475,  550,  650,
                                  700,  700,  875,  875,  1075, 1075, 1250, 1250,
                                  1075, 1075, 875,  875,  700,  700,  650,  475,
                                  475,  420,  330,  275,  275,  100};
  const std::vector<double> ys = {1000, 500,  200,  150,  100,  100,  150,  200,
                                  400,  100,  100,  350,  350,  100,  100,  1000,
                                  1000, 650,  650,  1000, 1000, 600,  1000, 1000,
                                  350,  300,  300,  350,  1000, 1000};
  std::vector<Point2> v;
  v.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) v.push_back({xs[i], ys[i]});
  return Polygon(std::move(v));
}

inline FleetConfig default_config(double r_l_min = 80.0) {
  FleetConfig config;
  config.r_l_min = r_l_min;
  config.velocity = 20.0;
  config.psi_max = 0.5;
  config.r_com = std::max(1000.0, config.min_r_com());
  return config;
}

// Number of kept base squares for the bundled area under the default
// (boundary-inclusive vertex) classification; pinned as a regression
// baseline (see docs/uh_scenario.md for the sensitivity analysis).
inline constexpr int kUhBaseSquares = 165;

// The scripted drop list used by data/uh.json: 19 drops spread as one group
// losing 3 members, three groups losing 2, ten groups losing 1.
inline const std::vector<UavId> kUhDropList = {0,  1,  2,  3,  4,  5,  6,  7,  9, 10,
                                               12, 14, 16, 29, 31, 33, 35, 37, 39};

}  // namespace loitercov::fixtures
