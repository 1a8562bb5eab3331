#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gtplan/errors.hpp"

namespace gtplan {

// Driving styles of surrounding vehicles. The weight triples are the
// calibrated selections for safety / comfort / efficiency.
enum class Style { aggressive, normal, cautious };

const char* to_string(Style s);
Style style_from_string(std::string_view name);

struct StyleProfile {
  Style label = Style::normal;
  double w_safety = 0.5;
  double w_comfort = 0.3;
  double w_efficiency = 0.2;
  // Scales the longitudinal reach of the vehicle's potential field lobe.
  double field_reach_multiplier = 1.0;

  void validate() const;
};

/// Weight triple and field reach for one of the three named styles.
StyleProfile style_weights(Style label);

// Straight multi-lane road. Lane index convention: 1 = leftmost lane,
// lane_count = rightmost. +y points left, origin on the road centerline.
struct Road {
  int lane_count = 2;  // 2 or 3
  double lane_width = 3.75;
  double length = 800.0;
  std::vector<double> speed_limits;  // per lane, m/s

  double speed_limit(int lane) const;
  double half_width() const { return 0.5 * lane_count * lane_width; }
  void validate() const;
};

/// Lateral coordinate of a lane's centerline. Monotone decreasing in the
/// lane index (lane 1 is leftmost, +y is left).
double lane_center(const Road& road, int lane);

/// Lane whose centerline is nearest to y. Ties on a lane mark resolve to
/// the lower index. y outside the road raises an off-road error.
int lane_of(const Road& road, double y);

struct VehicleState {
  double x = 0.0;        // longitudinal position, m
  double y = 0.0;        // lateral position, m (+y = left)
  double speed = 0.0;    // longitudinal speed, m/s
  double heading = 0.0;  // rad, 0 = along the road
  int lane = 1;
  double long_accel = 0.0;  // m/s^2
  double lat_accel = 0.0;   // m/s^2
};

struct VehicleGeometry {
  double safety_length = 5.0;  // l_v, m
  double width = 1.8;          // W, m

  void validate() const;
};

enum class Role { ahead, obstacle };

const char* to_string(Role r);
Role role_from_string(std::string_view name);

// One surrounding vehicle in a scenario. "ahead" vehicles always hold their
// speed; "obstacle" vehicles take part in the decision game.
struct TrafficVehicle {
  std::string name;
  VehicleState state;
  StyleProfile style;
  Role role = Role::ahead;
  bool sweep = false;  // style is swept by the CLI sweep command
};

struct Timing {
  double duration = 15.0;
  double sample_time = 0.1;      // dT
  double decision_period = 0.5;  // game re-solve period
};

struct Scenario {
  std::string name;
  Road road;
  VehicleState host;
  double host_desired_speed = -1.0;  // <0: defaults to the host lane limit
  std::vector<TrafficVehicle> others;
  Timing timing;

  double desired_speed_resolved() const;
  void validate(const VehicleGeometry& geometry) const;
};

}  // namespace gtplan
