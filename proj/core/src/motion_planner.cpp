#include "gtplan/motion_planner.hpp"

#include <algorithm>
#include <cmath>

#include "gtplan/errors.hpp"

namespace gtplan {

StateRate state_rate(const VehicleState& s, const ControlInput& u, double a_x,
                     double speed_floor) {
  if (s.speed < speed_floor)
    fail(ErrorCategory::degenerate_speed,
         "speed below the floor, heading dynamics are singular");
  StateRate r;
  r.speed = a_x;
  r.heading = u.lat_accel / s.speed;
  r.x = s.speed * std::cos(s.heading);
  r.y = s.speed * std::sin(s.heading);
  return r;
}

VehicleState step(const VehicleState& state, const ControlInput& u, double a_x,
                  double dt, double v_max, double speed_floor) {
  if (dt <= 0) fail(ErrorCategory::validation, "step dt must be > 0");

  auto rate_at = [&](double v, double phi) {
    VehicleState tmp = state;
    tmp.speed = v;
    tmp.heading = phi;
    return state_rate(tmp, u, a_x, speed_floor);
  };

  const StateRate k1 = rate_at(state.speed, state.heading);
  const StateRate k2 = rate_at(state.speed + 0.5 * dt * k1.speed,
                               state.heading + 0.5 * dt * k1.heading);
  const StateRate k3 = rate_at(state.speed + 0.5 * dt * k2.speed,
                               state.heading + 0.5 * dt * k2.heading);
  const StateRate k4 =
      rate_at(state.speed + dt * k3.speed, state.heading + dt * k3.heading);

  VehicleState out = state;
  out.speed += dt / 6.0 * (k1.speed + 2 * k2.speed + 2 * k3.speed + k4.speed);
  out.heading +=
      dt / 6.0 * (k1.heading + 2 * k2.heading + 2 * k3.heading + k4.heading);
  out.x += dt / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
  out.y += dt / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
  out.speed = std::clamp(out.speed, 0.0, v_max);
  out.long_accel = a_x;
  out.lat_accel = u.lat_accel;
  return out;
}

PlanResult rollout(const VehicleState& state, const std::vector<ControlInput>& controls,
                   double a_x, const PlannerParams& params, const FieldScene& scene,
                   double target_center_y, double v_max) {
  const int n_c = params.control_horizon;
  const int n_p = params.prediction_horizon;
  if (static_cast<int>(controls.size()) != n_c)
    fail(ErrorCategory::validation, "control sequence length must equal N_c");

  PlanResult res;
  res.control_sequence = controls;
  res.predicted_states.reserve(static_cast<size_t>(n_p));
  res.predicted_outputs.reserve(static_cast<size_t>(n_p));
  res.lane_errors.reserve(static_cast<size_t>(n_p));

  VehicleState cur = state;
  for (int k = 0; k < n_p; ++k) {
    // Controls beyond the control horizon repeat the final one.
    const ControlInput u = controls[static_cast<size_t>(std::min(k, n_c - 1))];
    cur = step(cur, u, a_x, params.sample_time, v_max, params.speed_floor);
    res.predicted_states.push_back(cur);
    res.predicted_outputs.push_back(total_potential(scene, cur.x, cur.y));
    res.lane_errors.push_back(cur.y - target_center_y);
  }
  return res;
}

double plan_cost(const PlanResult& result, const PlannerParams& params) {
  double j = 0.0;
  for (double y : result.predicted_outputs) j += params.q_field * y * y;
  for (double e : result.lane_errors) j += params.q_lane * e * e;
  for (const auto& u : result.control_sequence)
    j += params.r_control * u.lat_accel * u.lat_accel;
  return j;
}

PlanResult solve_mpc(const VehicleState& state, double a_x, const FieldScene& scene,
                     double target_center_y, const PlannerParams& params,
                     double v_max) {
  params.validate();

  std::vector<double> candidates;
  for (double u : params.u_candidates)
    if (u >= params.u_min && u <= params.u_max) candidates.push_back(u);
  if (candidates.empty())
    fail(ErrorCategory::validation, "no control candidate within [u_min, u_max]");

  const int n_c = params.control_horizon;
  std::vector<ControlInput> seq(static_cast<size_t>(n_c));
  std::vector<size_t> idx(static_cast<size_t>(n_c), 0);

  PlanResult best;
  double best_cost = 0.0;
  bool have_best = false;
  while (true) {
    for (int k = 0; k < n_c; ++k)
      seq[static_cast<size_t>(k)].lat_accel = candidates[idx[static_cast<size_t>(k)]];
    PlanResult r = rollout(state, seq, a_x, params, scene, target_center_y, v_max);
    r.cost = plan_cost(r, params);
    if (!have_best || r.cost < best_cost) {
      best_cost = r.cost;
      best = std::move(r);
      have_best = true;
    }
    // advance the mixed-radix counter
    int k = 0;
    for (; k < n_c; ++k) {
      if (++idx[static_cast<size_t>(k)] < candidates.size()) break;
      idx[static_cast<size_t>(k)] = 0;
    }
    if (k == n_c) break;
  }
  return best;
}

}  // namespace gtplan
