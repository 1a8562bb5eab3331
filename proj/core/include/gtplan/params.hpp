#pragma once

#include <string>
#include <vector>

#include "gtplan/world.hpp"

namespace gtplan {

// Decision-game parameters. Candidate accelerations are finite grids so the
// bilevel solve is an exact enumeration.
struct GameParams {
  std::vector<double> host_accel_grid{-3.0, -2.0, -1.0, 0.0, 1.0, 2.0};
  std::vector<double> follower_accel_grid{-2.0, -1.0, 0.0, 1.0, 2.0};  // Phi^2

  // Candidate actions are treated as sustained maneuvers: game costs are
  // evaluated on states projected this many seconds ahead.
  double action_horizon = 2.0;

  double kappa_v_log = 10.0;
  double kappa_s_log = 2700.0;
  double kappa_v_lat = 10.0;
  double kappa_s_lat = 2700.0;
  double kappa_ax_host = 1.0;
  double kappa_ay_host = 1.0;
  double kappa_ax_obstacle = 14.0;
  double nu = 1e-3;

  // Absent leader convention: a phantom vehicle this far ahead.
  double absent_gap = 1e6;
  // Leaders farther than this do not anchor the speed reference or the
  // closing-speed term.
  double anchor_range = 50.0;

  // An obstacle starts reacting once the host's best lane-change candidate
  // into its lane comes within this cost margin of the decided action.
  double react_margin = 2.0;

  Style host_style = Style::normal;

  double a_min = -4.0;  // state acceleration bounds
  double a_max = 3.0;
};

struct FieldParams {
  double amplitude = 10.0;      // a_ov
  double sigma_x = 8.0;         // rho_X
  double sigma_y = 1.2;         // rho_Y
  double shape = 1.0;           // b
  double velocity_gain = 0.05;  // c, s/m
  double road_amplitude = 2.0;  // a_r
  double road_safety_margin = 0.2;  // d_r
  bool scale_sigma_y = false;   // style multiplier also applies to rho_Y
};

struct PlannerParams {
  int prediction_horizon = 15;  // N_p
  int control_horizon = 3;      // N_c
  double sample_time = 0.1;     // dT
  double q_field = 1.0;         // Q1 per-step weight
  double q_lane = 0.5;          // Q2 per-step weight
  double r_control = 0.1;       // R per-step weight
  double u_min = -3.0;
  double u_max = 3.0;
  std::vector<double> u_candidates{-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
  double speed_floor = 0.5;  // below this, heading dynamics are degenerate

  void validate() const;
};

enum class ObstacleMode { game_response, constant_speed };

const char* to_string(ObstacleMode m);
ObstacleMode obstacle_mode_from_string(std::string_view name);

struct LoopParams {
  ObstacleMode obstacle_mode = ObstacleMode::game_response;
  double lane_change_epsilon = 0.2;   // m, completion threshold
  double heading_epsilon = 0.02;      // rad, completion threshold
  double commit_time = 4.0;           // s, lane-change commitment window
};

// Everything configurable in one bundle; scenario documents and the CLI
// override entries by dotted path (e.g. game.kappa_s_lat).
struct Params {
  GameParams game;
  FieldParams field;
  PlannerParams planner;
  LoopParams loop;
  VehicleGeometry vehicle;

  void set(const std::string& key, const std::string& value);
  std::vector<std::pair<std::string, std::string>> entries() const;
  void validate() const;
};

}  // namespace gtplan
