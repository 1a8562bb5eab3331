#include "gtplan/world.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gtplan {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

}  // namespace

const char* to_string(Style s) {
  switch (s) {
    case Style::aggressive: return "aggressive";
    case Style::normal: return "normal";
    case Style::cautious: return "cautious";
  }
  return "?";
}

Style style_from_string(std::string_view name) {
  if (name == "aggressive") return Style::aggressive;
  if (name == "normal") return Style::normal;
  if (name == "cautious") return Style::cautious;
  fail(ErrorCategory::parse, "unknown driving style '" + std::string(name) +
                                 "' (expected aggressive|normal|cautious)");
}

const char* to_string(Role r) {
  return r == Role::ahead ? "ahead" : "obstacle";
}

Role role_from_string(std::string_view name) {
  if (name == "ahead") return Role::ahead;
  if (name == "obstacle") return Role::obstacle;
  fail(ErrorCategory::parse,
       "unknown vehicle role '" + std::string(name) + "' (expected ahead|obstacle)");
}

void StyleProfile::validate() const {
  const double sum = w_safety + w_comfort + w_efficiency;
  if (std::abs(sum - 1.0) > 1e-9)
    fail(ErrorCategory::validation,
         "style weights must sum to 1, got " + fmt("%.12g", sum));
  if (w_safety < 0 || w_comfort < 0 || w_efficiency < 0)
    fail(ErrorCategory::validation, "style weights must be non-negative");
  if (field_reach_multiplier <= 0)
    fail(ErrorCategory::validation, "field_reach_multiplier must be > 0");
}

StyleProfile style_weights(Style label) {
  switch (label) {
    case Style::aggressive:
      return {Style::aggressive, 0.10, 0.10, 0.80, 1.5};
    case Style::normal:
      return {Style::normal, 0.50, 0.30, 0.20, 1.0};
    case Style::cautious:
      return {Style::cautious, 0.70, 0.20, 0.10, 0.6};
  }
  fail(ErrorCategory::validation, "bad style enum");
}

double Road::speed_limit(int lane) const {
  if (lane < 1 || lane > lane_count)
    fail(ErrorCategory::invalid_lane,
         "lane " + std::to_string(lane) + " outside [1, " + std::to_string(lane_count) + "]");
  return speed_limits[static_cast<size_t>(lane - 1)];
}

void Road::validate() const {
  if (lane_count != 2 && lane_count != 3)
    fail(ErrorCategory::validation,
         "road.lanes must be 2 or 3, got " + std::to_string(lane_count));
  if (lane_width <= 0)
    fail(ErrorCategory::validation, "road.lane_width must be > 0");
  if (length <= 0)
    fail(ErrorCategory::validation, "road.length must be > 0");
  if (speed_limits.size() != static_cast<size_t>(lane_count))
    fail(ErrorCategory::validation,
         "road.speed_limits must list one limit per lane");
  for (double v : speed_limits)
    if (v <= 0) fail(ErrorCategory::validation, "road speed limits must be > 0");
}

double lane_center(const Road& road, int lane) {
  if (lane < 1 || lane > road.lane_count)
    fail(ErrorCategory::invalid_lane,
         "lane " + std::to_string(lane) + " outside [1, " + std::to_string(road.lane_count) + "]");
  const double mid = 0.5 * (road.lane_count + 1);
  return (mid - lane) * road.lane_width;
}

int lane_of(const Road& road, double y) {
  const double half = road.half_width();
  if (y < -half || y > half)
    fail(ErrorCategory::off_road,
         "y=" + fmt("%.6g", y) + " outside road (|y| <= " + fmt("%.6g", half) + ")");
  int best = 1;
  double best_dist = std::abs(y - lane_center(road, 1));
  for (int lane = 2; lane <= road.lane_count; ++lane) {
    const double d = std::abs(y - lane_center(road, lane));
    if (d < best_dist) {  // strict: ties keep the lower index
      best_dist = d;
      best = lane;
    }
  }
  return best;
}

void VehicleGeometry::validate() const {
  if (safety_length <= 0)
    fail(ErrorCategory::validation, "vehicle.safety_length must be > 0");
  if (width <= 0) fail(ErrorCategory::validation, "vehicle.width must be > 0");
}

double Scenario::desired_speed_resolved() const {
  if (host_desired_speed > 0) return host_desired_speed;
  return road.speed_limit(host.lane);
}

void Scenario::validate(const VehicleGeometry& geometry) const {
  road.validate();
  geometry.validate();
  if (timing.duration <= 0)
    fail(ErrorCategory::validation, "timing.duration must be > 0");
  if (timing.sample_time <= 0)
    fail(ErrorCategory::validation, "timing.sample_time must be > 0");
  const double ratio = timing.decision_period / timing.sample_time;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0 - 1e-9)
    fail(ErrorCategory::validation,
         "timing.decision_period must be an integer multiple of sample_time");

  auto check_vehicle = [&](const VehicleState& s, const std::string& who) {
    if (s.lane < 1 || s.lane > road.lane_count)
      fail(ErrorCategory::validation, who + ".lane outside the road");
    const double limit = road.speed_limit(s.lane);
    if (s.speed < 0 || s.speed > limit)
      fail(ErrorCategory::validation,
           who + ".speed " + fmt("%.6g", s.speed) + " outside [0, " + fmt("%.6g", limit) + "]");
  };
  check_vehicle(host, "host");
  for (const auto& v : others) {
    check_vehicle(v.state, v.name.empty() ? std::string("vehicle") : v.name);
    v.style.validate();
  }

  // No same-lane longitudinal overlap at t=0.
  std::vector<std::pair<double, std::string>> per_lane[4];
  per_lane[host.lane].push_back({host.x, "host"});
  for (const auto& v : others) per_lane[v.state.lane].push_back({v.state.x, v.name});
  for (int lane = 1; lane <= road.lane_count; ++lane) {
    auto& list = per_lane[lane];
    std::sort(list.begin(), list.end());
    for (size_t i = 1; i < list.size(); ++i) {
      const double gap = list[i].first - list[i - 1].first;
      if (gap <= geometry.safety_length)
        fail(ErrorCategory::validation,
             "vehicles '" + list[i - 1].second + "' and '" + list[i].second +
                 "' overlap on lane " + std::to_string(lane) + " (gap " +
                 fmt("%.6g", gap) + " <= safety length)");
    }
  }
}

}  // namespace gtplan
