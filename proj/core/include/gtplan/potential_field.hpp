#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "gtplan/params.hpp"
#include "gtplan/world.hpp"

namespace gtplan {

struct ObstacleFieldParams {
  double amplitude = 10.0;      // peak value at the vehicle center
  double sigma_x = 8.0;         // longitudinal convergence, m
  double sigma_y = 1.2;         // lateral convergence, m
  double shape = 1.0;           // exponent on the quadratic form
  double velocity_gain = 0.05;  // s/m, skews the lobe ahead of motion
};

struct RoadFieldParams {
  double amplitude = 2.0;
  double safety_margin = 0.2;  // m
  double vehicle_width = 1.8;  // m
};

struct LaneLine {
  double y = 0.0;
};

// Obstacle lobes plus lane-line walls whose sum is the combined field.
struct FieldScene {
  std::vector<std::pair<VehicleState, ObstacleFieldParams>> obstacles;
  std::vector<std::pair<LaneLine, RoadFieldParams>> road_lines;
};

/// Exponential lobe around one obstacle vehicle. Equals `amplitude` at the
/// vehicle center; decays with distance; a positive speed skews the lobe
/// ahead of the vehicle. Always positive.
double obstacle_potential(const ObstacleFieldParams& params, const VehicleState& ov,
                          double x, double y);

/// Lane-mark wall value at distance d >= 0 from the mark; strictly
/// decreasing in d, equal to `amplitude` at d = safety_margin + width/2.
double road_potential(const RoadFieldParams& params, double d);

/// Sum of every obstacle and lane-line contribution at (x, y).
double total_potential(const FieldScene& scene, double x, double y);

/// Copy of `base` with the longitudinal reach scaled by the style's
/// multiplier (and the lateral reach too when `scale_sigma_y` is set).
ObstacleFieldParams style_field_params(const ObstacleFieldParams& base,
                                       const StyleProfile& style,
                                       bool scale_sigma_y = false);

struct FieldGrid {
  double x0 = 0, x1 = 0;
  double y0 = 0, y1 = 0;
  int nx = 0, ny = 0;
  std::vector<double> values;  // row-major, rows over y

  double at(int ix, int iy) const { return values[static_cast<size_t>(iy) * nx + ix]; }
};

/// Dense sampling of the combined field over [x0,x1] x [y0,y1] with nx x ny
/// points (endpoints included). Deterministic.
FieldGrid sample_grid(const FieldScene& scene, double x0, double x1, double y0,
                      double y1, int nx, int ny);

/// Plain-text export: one header line with axes and resolution, then ny rows
/// of nx values. Bit-stable across runs for identical inputs.
void write_grid(std::ostream& os, const FieldGrid& grid);

/// Builds the scene for a world state: one style-scaled lobe per surrounding
/// vehicle and one wall per lane line (road edges included).
FieldScene build_scene(const Road& road, const std::vector<TrafficVehicle>& others,
                       const FieldParams& params, const VehicleGeometry& geometry);

}  // namespace gtplan
