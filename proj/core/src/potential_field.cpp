#include "gtplan/potential_field.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "gtplan/errors.hpp"

namespace gtplan {

double obstacle_potential(const ObstacleFieldParams& p, const VehicleState& ov,
                          double x, double y) {
  const double dx2 = (x - ov.x) * (x - ov.x) / (2.0 * p.sigma_x * p.sigma_x);
  const double dy2 = (y - ov.y) * (y - ov.y) / (2.0 * p.sigma_y * p.sigma_y);
  const double r2 = dx2 + dy2;
  // 0/0 at the vehicle center: the limit along the lateral axis is 0, which
  // keeps the field continuous with peak exactly `amplitude`.
  double xi = 0.0;
  if (r2 > 0.0) {
    const int k = x - ov.x < 0.0 ? -1 : 1;
    xi = k * dx2 / std::sqrt(r2);
  }
  const double eta = -std::pow(r2, p.shape) + p.velocity_gain * ov.speed * xi;
  return p.amplitude * std::exp(eta);
}

double road_potential(const RoadFieldParams& p, double d) {
  if (d < 0.0)
    fail(ErrorCategory::validation, "road potential distance must be >= 0");
  return p.amplitude * std::exp(-d + p.safety_margin + 0.5 * p.vehicle_width);
}

double total_potential(const FieldScene& scene, double x, double y) {
  double sum = 0.0;
  for (const auto& [ov, params] : scene.obstacles)
    sum += obstacle_potential(params, ov, x, y);
  for (const auto& [line, params] : scene.road_lines)
    sum += road_potential(params, std::abs(y - line.y));
  return sum;
}

ObstacleFieldParams style_field_params(const ObstacleFieldParams& base,
                                       const StyleProfile& style,
                                       bool scale_sigma_y) {
  ObstacleFieldParams out = base;
  out.sigma_x *= style.field_reach_multiplier;
  if (scale_sigma_y) out.sigma_y *= style.field_reach_multiplier;
  return out;
}

FieldGrid sample_grid(const FieldScene& scene, double x0, double x1, double y0,
                      double y1, int nx, int ny) {
  if (nx < 1 || ny < 1)
    fail(ErrorCategory::validation, "grid resolution must be >= 1");
  if (x1 < x0 || y1 < y0)
    fail(ErrorCategory::validation, "grid range is degenerate");
  if ((nx > 1 && x1 == x0) || (ny > 1 && y1 == y0))
    fail(ErrorCategory::validation, "grid range is degenerate");

  FieldGrid g;
  g.x0 = x0;
  g.x1 = x1;
  g.y0 = y0;
  g.y1 = y1;
  g.nx = nx;
  g.ny = ny;
  g.values.resize(static_cast<size_t>(nx) * ny);
  const double dx = nx > 1 ? (x1 - x0) / (nx - 1) : 0.0;
  const double dy = ny > 1 ? (y1 - y0) / (ny - 1) : 0.0;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      g.values[static_cast<size_t>(iy) * nx + ix] =
          total_potential(scene, x0 + ix * dx, y0 + iy * dy);
    }
  }
  return g;
}

void write_grid(std::ostream& os, const FieldGrid& grid) {
  char buf[200];
  std::snprintf(buf, sizeof(buf), "# x %.17g %.17g %d  y %.17g %.17g %d\n",
                grid.x0, grid.x1, grid.nx, grid.y0, grid.y1, grid.ny);
  os << buf;
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      std::snprintf(buf, sizeof(buf), "%.17g", grid.at(ix, iy));
      os << buf << (ix + 1 == grid.nx ? "\n" : " ");
    }
  }
}

FieldScene build_scene(const Road& road, const std::vector<TrafficVehicle>& others,
                       const FieldParams& params, const VehicleGeometry& geometry) {
  FieldScene scene;
  ObstacleFieldParams base;
  base.amplitude = params.amplitude;
  base.sigma_x = params.sigma_x;
  base.sigma_y = params.sigma_y;
  base.shape = params.shape;
  base.velocity_gain = params.velocity_gain;
  for (const auto& v : others) {
    scene.obstacles.push_back(
        {v.state, style_field_params(base, v.style, params.scale_sigma_y)});
  }
  RoadFieldParams wall;
  wall.amplitude = params.road_amplitude;
  wall.safety_margin = params.road_safety_margin;
  wall.vehicle_width = geometry.width;
  for (int k = 0; k <= road.lane_count; ++k) {
    const double y = road.half_width() - k * road.lane_width;
    scene.road_lines.push_back({{y}, wall});
  }
  return scene;
}

}  // namespace gtplan
