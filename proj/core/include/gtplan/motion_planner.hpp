#pragma once

#include <vector>

#include "gtplan/params.hpp"
#include "gtplan/potential_field.hpp"
#include "gtplan/world.hpp"

namespace gtplan {

struct ControlInput {
  double lat_accel = 0.0;  // u, m/s^2
};

struct StateRate {
  double speed = 0.0;    // dv/dt
  double heading = 0.0;  // dphi/dt
  double x = 0.0;        // dX/dt
  double y = 0.0;        // dY/dt
};

/// Kinematic state derivative: (v_dot = a_x, phi_dot = a_y / v,
/// X_dot = v cos phi, Y_dot = v sin phi). Raises a degenerate-speed error
/// below `speed_floor` where the heading rate blows up.
StateRate state_rate(const VehicleState& state, const ControlInput& u, double a_x,
                     double speed_floor = 0.5);

/// One discrete step of the kinematic model under constant (a_x, u) over dt,
/// integrated with a classic 4-stage Runge-Kutta pass; afterwards the speed
/// is clamped into [0, v_max].
VehicleState step(const VehicleState& state, const ControlInput& u, double a_x,
                  double dt, double v_max, double speed_floor = 0.5);

struct PlanResult {
  std::vector<ControlInput> control_sequence;   // N_c entries
  std::vector<VehicleState> predicted_states;   // N_p entries
  std::vector<double> predicted_outputs;        // field value per step
  std::vector<double> lane_errors;              // lateral offset per step
  double cost = 0.0;
};

/// Propagates the model N_p steps, holding the final control for the tail
/// steps beyond N_c, and records the combined field value and the lateral
/// offset from the target-lane centerline at every predicted position.
PlanResult rollout(const VehicleState& state, const std::vector<ControlInput>& controls,
                   double a_x, const PlannerParams& params, const FieldScene& scene,
                   double target_center_y, double v_max);

/// J = sum q_field y^2 + q_lane dY^2 + r u^2 over the stored sequences.
double plan_cost(const PlanResult& result, const PlannerParams& params);

/// Receding-horizon solve: exhaustive search over the control candidate grid
/// for all N_c steps (candidates outside [u_min, u_max] are dropped). The
/// returned sequence minimizes the rollout cost exactly over that set; ties
/// keep the first candidate in enumeration order.
PlanResult solve_mpc(const VehicleState& state, double a_x, const FieldScene& scene,
                     double target_center_y, const PlannerParams& params, double v_max);

}  // namespace gtplan
