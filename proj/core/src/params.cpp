#include "gtplan/params.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <sstream>

#include "gtplan/errors.hpp"

namespace gtplan {

const char* to_string(ObstacleMode m) {
  return m == ObstacleMode::game_response ? "game-response" : "constant-speed";
}

ObstacleMode obstacle_mode_from_string(std::string_view name) {
  if (name == "game-response") return ObstacleMode::game_response;
  if (name == "constant-speed") return ObstacleMode::constant_speed;
  fail(ErrorCategory::parse, "unknown obstacle mode '" + std::string(name) +
                                 "' (expected game-response|constant-speed)");
}

void PlannerParams::validate() const {
  if (!(prediction_horizon > control_horizon && control_horizon >= 1))
    fail(ErrorCategory::validation, "planner horizons must satisfy N_p > N_c >= 1");
  if (sample_time <= 0)
    fail(ErrorCategory::validation, "planner.sample_time must be > 0");
  if (q_field < 0 || q_lane < 0 || r_control < 0)
    fail(ErrorCategory::validation, "planner weights must be >= 0");
  if (u_min > u_max)
    fail(ErrorCategory::validation, "planner.u_min must be <= u_max");
  if (u_candidates.empty())
    fail(ErrorCategory::validation, "planner.u_candidates must be non-empty");
}

namespace {

struct Entry {
  std::string key;
  std::function<std::string()> get;
  std::function<void(const std::string&)> set;
};

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(ErrorCategory::override_key,
         "value '" + value + "' for " + key + " is not a number");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    fail(ErrorCategory::override_key,
         "value '" + value + "' for " + key + " is not an integer");
  return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  fail(ErrorCategory::override_key,
       "value '" + value + "' for " + key + " is not a bool");
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_grid(const std::vector<double>& g) {
  std::ostringstream os;
  for (size_t i = 0; i < g.size(); ++i) {
    if (i) os << ",";
    os << fmt_double(g[i]);
  }
  return os.str();
}

std::vector<double> parse_grid(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_double(key, tok));
  if (out.empty())
    fail(ErrorCategory::override_key, "empty grid for " + key);
  return out;
}

void build_registry(Params& p, std::vector<Entry>& out) {
  auto num = [&](const char* key, double& ref) {
    out.push_back({key, [&ref] { return fmt_double(ref); },
                   [&ref, k = std::string(key)](const std::string& v) { ref = parse_double(k, v); }});
  };
  auto integer = [&](const char* key, int& ref) {
    out.push_back({key, [&ref] { return std::to_string(ref); },
                   [&ref, k = std::string(key)](const std::string& v) { ref = parse_int(k, v); }});
  };
  auto boolean = [&](const char* key, bool& ref) {
    out.push_back({key, [&ref] { return std::string(ref ? "true" : "false"); },
                   [&ref, k = std::string(key)](const std::string& v) { ref = parse_bool(k, v); }});
  };
  auto grid = [&](const char* key, std::vector<double>& ref) {
    out.push_back({key, [&ref] { return fmt_grid(ref); },
                   [&ref, k = std::string(key)](const std::string& v) { ref = parse_grid(k, v); }});
  };

  GameParams& g = p.game;
  grid("game.host_accel_grid", g.host_accel_grid);
  grid("game.follower_accel_grid", g.follower_accel_grid);
  num("game.action_horizon", g.action_horizon);
  num("game.kappa_v_log", g.kappa_v_log);
  num("game.kappa_s_log", g.kappa_s_log);
  num("game.kappa_v_lat", g.kappa_v_lat);
  num("game.kappa_s_lat", g.kappa_s_lat);
  num("game.kappa_ax_host", g.kappa_ax_host);
  num("game.kappa_ay_host", g.kappa_ay_host);
  num("game.kappa_ax_obstacle", g.kappa_ax_obstacle);
  num("game.nu", g.nu);
  num("game.absent_gap", g.absent_gap);
  num("game.anchor_range", g.anchor_range);
  num("game.react_margin", g.react_margin);
  num("game.a_min", g.a_min);
  num("game.a_max", g.a_max);
  out.push_back({"game.host_style",
                 [&g] { return std::string(to_string(g.host_style)); },
                 [&g](const std::string& v) { g.host_style = style_from_string(v); }});

  FieldParams& f = p.field;
  num("field.amplitude", f.amplitude);
  num("field.sigma_x", f.sigma_x);
  num("field.sigma_y", f.sigma_y);
  num("field.shape", f.shape);
  num("field.velocity_gain", f.velocity_gain);
  num("field.road_amplitude", f.road_amplitude);
  num("field.road_safety_margin", f.road_safety_margin);
  boolean("field.scale_sigma_y", f.scale_sigma_y);

  PlannerParams& m = p.planner;
  integer("planner.prediction_horizon", m.prediction_horizon);
  integer("planner.control_horizon", m.control_horizon);
  num("planner.sample_time", m.sample_time);
  num("planner.q_field", m.q_field);
  num("planner.q_lane", m.q_lane);
  num("planner.r_control", m.r_control);
  num("planner.u_min", m.u_min);
  num("planner.u_max", m.u_max);
  grid("planner.u_candidates", m.u_candidates);
  num("planner.speed_floor", m.speed_floor);

  LoopParams& l = p.loop;
  out.push_back({"loop.obstacle_mode",
                 [&l] { return std::string(to_string(l.obstacle_mode)); },
                 [&l](const std::string& v) { l.obstacle_mode = obstacle_mode_from_string(v); }});
  num("loop.lane_change_epsilon", l.lane_change_epsilon);
  num("loop.heading_epsilon", l.heading_epsilon);
  num("loop.commit_time", l.commit_time);

  VehicleGeometry& veh = p.vehicle;
  num("vehicle.safety_length", veh.safety_length);
  num("vehicle.width", veh.width);
}

}  // namespace

void Params::set(const std::string& key, const std::string& value) {
  std::vector<Entry> reg;
  build_registry(*this, reg);
  for (auto& e : reg) {
    if (e.key == key) {
      e.set(value);
      return;
    }
  }
  fail(ErrorCategory::override_key, "unknown parameter '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> Params::entries() const {
  std::vector<Entry> reg;
  build_registry(const_cast<Params&>(*this), reg);
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(reg.size());
  for (auto& e : reg) out.push_back({e.key, e.get()});
  return out;
}

void Params::validate() const {
  planner.validate();
  vehicle.validate();
  if (game.nu <= 0) fail(ErrorCategory::validation, "game.nu must be > 0");
  if (game.action_horizon <= 0)
    fail(ErrorCategory::validation, "game.action_horizon must be > 0");
  if (game.kappa_v_log < 0 || game.kappa_s_log < 0 || game.kappa_v_lat < 0 ||
      game.kappa_s_lat < 0 || game.kappa_ax_host < 0 || game.kappa_ay_host < 0 ||
      game.kappa_ax_obstacle < 0)
    fail(ErrorCategory::validation, "game.kappa_* must be >= 0");
  if (game.follower_accel_grid.empty() || game.host_accel_grid.empty())
    fail(ErrorCategory::validation, "game action grids must be non-empty");
  if (game.a_min > game.a_max)
    fail(ErrorCategory::validation, "game.a_min must be <= a_max");
  if (field.amplitude <= 0 || field.sigma_x <= 0 || field.sigma_y <= 0 ||
      field.shape <= 0)
    fail(ErrorCategory::validation, "field obstacle parameters must be > 0");
  if (field.road_amplitude <= 0)
    fail(ErrorCategory::validation, "field.road_amplitude must be > 0");
  if (field.road_safety_margin < 0)
    fail(ErrorCategory::validation, "field.road_safety_margin must be >= 0");
  if (loop.lane_change_epsilon <= 0)
    fail(ErrorCategory::validation, "loop.lane_change_epsilon must be > 0");
  if (loop.commit_time < 0)
    fail(ErrorCategory::validation, "loop.commit_time must be >= 0");
}

}  // namespace gtplan
