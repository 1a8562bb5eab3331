#include "gtplan/decision_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gtplan/errors.hpp"

namespace gtplan {

int indicator(double delta_v) { return delta_v < 0.0 ? 1 : 0; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-9;

double sq(double v) { return v * v; }

// Safety cost of a vehicle against a leader ahead of it (velocity term
// gated on closing, gap term always active).
double safety_vs_leader(const VehicleState& self, const VehicleState& leader,
                        double k_v, double k_s, double nu, double l_v) {
  const double dv = leader.speed - self.speed;
  const double ds = leader.x - self.x - l_v;
  return k_v * indicator(dv) / (sq(dv) + nu) + k_s / (sq(ds) + nu);
}

// Lateral safety of the host against the target-lane obstacle.
double lateral_safety(const VehicleState& host, const VehicleState& obstacle,
                      double k_v, double k_s, double nu, double l_v) {
  const double dv = host.speed - obstacle.speed;
  const double ds = host.x - obstacle.x - l_v;
  return k_v * indicator(dv) / (sq(dv) + nu) + k_s / (sq(ds) + nu);
}

VehicleState phantom(double x, double speed) {
  VehicleState p;
  p.x = x;
  p.speed = speed;
  return p;
}

}  // namespace

CostBreakdown host_cost(const VehicleState& host,
                        const std::optional<VehicleState>& ahead,
                        const std::optional<VehicleState>& target_obstacle,
                        const HostAction& action, const Road& road,
                        const CostWeights& w, const StyleProfile& style) {
  const int alpha = action.lane_decision;
  if (alpha < -1 || alpha > 1)
    fail(ErrorCategory::validation, "lane decision must be in {-1,0,1}");
  const int target = host.lane + alpha;
  const double target_limit = road.speed_limit(target);

  const int sel_lat = std::abs(alpha);
  const int sel_log = std::abs(sel_lat - 1);

  CostBreakdown out;
  if (sel_log) {
    const VehicleState lead =
        ahead ? *ahead
              : phantom(host.x + w.absent_gap, road.speed_limit(host.lane));
    out.safety += safety_vs_leader(host, lead, w.k_v_log, w.k_s_log, w.nu,
                                   w.safety_length);
  }
  if (sel_lat) {
    // Absent obstacle: phantom far behind at the host's own speed, so both
    // lateral terms vanish.
    const VehicleState obs =
        target_obstacle ? *target_obstacle
                        : phantom(host.x - w.absent_gap, host.speed);
    out.safety += lateral_safety(host, obs, w.k_v_lat, w.k_s_lat, w.nu,
                                 w.safety_length);
  }
  out.comfort = w.k_ax * sq(action.long_accel) +
                sel_lat * w.k_ay * sq(host.lat_accel);
  const double ref_speed = ahead ? ahead->speed : target_limit;
  const double v_bar = std::min(target_limit, ref_speed);
  out.efficiency = sq(host.speed - v_bar);
  out.total = style.w_safety * out.safety + style.w_comfort * out.comfort +
              style.w_efficiency * out.efficiency;
  return out;
}

CostBreakdown obstacle_cost(const VehicleState& obstacle,
                            const std::optional<VehicleState>& obstacle_ahead,
                            const VehicleState& host, const HostAction& host_action,
                            const FollowerAction& follower, const Road& road,
                            const CostWeights& w, const StyleProfile& style) {
  const int alpha = host_action.lane_decision;
  if (alpha < -1 || alpha > 1)
    fail(ErrorCategory::validation, "lane decision must be in {-1,0,1}");
  const int sel_lat = std::abs(alpha);
  const int sel_log = std::abs(sel_lat - 1);
  const double lane_limit = road.speed_limit(obstacle.lane);

  CostBreakdown out;
  if (sel_log) {
    const VehicleState lead =
        obstacle_ahead ? *obstacle_ahead
                       : phantom(obstacle.x + w.absent_gap, lane_limit);
    out.safety += safety_vs_leader(obstacle, lead, w.k_v_log, w.k_s_log, w.nu,
                                   w.safety_length);
  }
  if (sel_lat) {
    // The obstacle's lateral safety cost equals the host's.
    out.safety += lateral_safety(host, obstacle, w.k_v_lat, w.k_s_lat, w.nu,
                                 w.safety_length);
  }
  out.comfort = w.k_ax * sq(follower.long_accel);
  const double lead_speed = obstacle_ahead ? obstacle_ahead->speed : lane_limit;
  const double v_bar = std::min(lane_limit, lead_speed);
  out.efficiency = sq(obstacle.speed - v_bar);
  out.total = style.w_safety * out.safety + style.w_comfort * out.comfort +
              style.w_efficiency * out.efficiency;
  return out;
}

VehicleState project_constant_accel(const VehicleState& s, double accel, double dt,
                                    double v_min, double v_max) {
  VehicleState out = s;
  const double v0 = s.speed;
  double v1 = v0 + accel * dt;
  double dx;
  if (v1 >= v_min && v1 <= v_max) {
    dx = v0 * dt + 0.5 * accel * dt * dt;
  } else {
    const double vb = v1 < v_min ? v_min : v_max;
    const double tb = accel != 0.0 ? (vb - v0) / accel : 0.0;
    if (tb >= 0.0 && tb <= dt) {
      dx = v0 * tb + 0.5 * accel * tb * tb + vb * (dt - tb);
    } else {
      dx = 0.5 * (v0 + std::clamp(v1, v_min, v_max)) * dt;
    }
    v1 = std::clamp(v1, v_min, v_max);
  }
  out.x += dx;
  out.speed = v1;
  out.long_accel = accel;
  return out;
}

namespace {

struct SolveContext {
  const WorldSnapshot& snap;
  const GameParams& gp;
  CostWeights w_host;
  CostWeights w_obst;
  double tau;
  double desired;
};

CostWeights make_host_weights(const GameParams& gp, const VehicleGeometry& g) {
  CostWeights w;
  w.k_v_log = gp.kappa_v_log;
  w.k_s_log = gp.kappa_s_log;
  w.k_v_lat = gp.kappa_v_lat;
  w.k_s_lat = gp.kappa_s_lat;
  w.k_ax = gp.kappa_ax_host;
  w.k_ay = gp.kappa_ay_host;
  w.nu = gp.nu;
  w.safety_length = g.safety_length;
  w.absent_gap = gp.absent_gap;
  return w;
}

CostWeights make_obstacle_weights(const GameParams& gp, const VehicleGeometry& g) {
  CostWeights w = make_host_weights(gp, g);
  w.k_ax = gp.kappa_ax_obstacle;
  return w;
}

// Nearest vehicle ahead of x in `lane` at current positions.
const VehicleState* lead_in_lane(const WorldSnapshot& snap, double x, int lane,
                                 bool include_host) {
  const VehicleState* best = nullptr;
  for (const auto& v : snap.others) {
    if (v.state.lane != lane || v.state.x <= x) continue;
    if (!best || v.state.x < best->x) best = &v.state;
  }
  if (include_host && snap.host.lane == lane && snap.host.x > x) {
    if (!best || snap.host.x < best->x) best = &snap.host;
  }
  return best;
}

// Anchor-gated, horizon-projected leader reference: leaders hold speed.
std::optional<VehicleState> anchored_leader(const SolveContext& ctx, double from_x,
                                            int lane, bool include_host) {
  const VehicleState* lead = lead_in_lane(ctx.snap, from_x, lane, include_host);
  if (!lead || lead->x - from_x > ctx.gp.anchor_range) return std::nullopt;
  VehicleState out = *lead;
  out.x += out.speed * ctx.tau;
  return out;
}

// Efficiency/longitudinal reference for the host when aiming at `lane`:
// the anchored leader, else a phantom at min(lane limit, desired speed).
VehicleState host_lead_reference(const SolveContext& ctx, int lane) {
  if (auto lead = anchored_leader(ctx, ctx.snap.host.x, lane, false)) return *lead;
  const double sp = std::min(ctx.snap.road.speed_limit(lane), ctx.desired);
  return phantom(ctx.snap.host.x + ctx.gp.absent_gap, sp);
}

// Index of the obstacle-role vehicle in `lane` nearest to the host.
int designated_follower(const WorldSnapshot& snap, int lane) {
  int best = -1;
  double best_d = kInf;
  for (size_t i = 0; i < snap.others.size(); ++i) {
    const auto& v = snap.others[i];
    if (v.role != Role::obstacle || v.state.lane != lane) continue;
    const double d = std::abs(v.state.x - snap.host.x);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

struct ResponseEval {
  std::vector<double> set;                // exact argmin accelerations
  std::vector<VehicleState> projections;  // obstacle projection per set entry
  double best_cost = kInf;
  FollowerAction reported;
  CostBreakdown reported_cost;
};

// Exact best-response set of others[idx] to `action` (lane decision already
// expressed relative to this obstacle's lane).
ResponseEval eval_response(const SolveContext& ctx, int idx, const HostAction& action,
                           const VehicleState& host_proj) {
  const auto& ov = ctx.snap.others[static_cast<size_t>(idx)];
  const double lane_limit = ctx.snap.road.speed_limit(ov.state.lane);
  std::optional<VehicleState> own_lead =
      anchored_leader(ctx, ov.state.x, ov.state.lane, true);

  ResponseEval out;
  std::vector<double> costs;
  std::vector<VehicleState> projections;
  for (double zeta : ctx.gp.follower_accel_grid) {
    if (zeta < ctx.gp.a_min - kTol || zeta > ctx.gp.a_max + kTol) continue;
    const VehicleState op =
        project_constant_accel(ov.state, zeta, ctx.tau, 0.0, lane_limit);
    const CostBreakdown cb = obstacle_cost(op, own_lead, host_proj, action,
                                           {zeta}, ctx.snap.road, ctx.w_obst,
                                           ov.style);
    costs.push_back(cb.total);
    projections.push_back(op);
    if (cb.total < out.best_cost) out.best_cost = cb.total;
  }
  size_t k = 0;
  for (size_t j = 0; j < ctx.gp.follower_accel_grid.size(); ++j) {
    const double zeta = ctx.gp.follower_accel_grid[j];
    if (zeta < ctx.gp.a_min - kTol || zeta > ctx.gp.a_max + kTol) continue;
    if (costs[k] == out.best_cost) {
      out.set.push_back(zeta);
      out.projections.push_back(projections[k]);
    }
    ++k;
  }
  // Reported response: smallest |accel|, then the smaller value.
  double best_key = kInf;
  for (double a : out.set) {
    const double key = std::abs(a);
    if (key < best_key - kTol) {
      best_key = key;
      out.reported.long_accel = a;
    }
  }
  const auto& ovv = ctx.snap.others[static_cast<size_t>(idx)];
  const VehicleState rp = project_constant_accel(
      ovv.state, out.reported.long_accel, ctx.tau, 0.0, lane_limit);
  out.reported_cost = obstacle_cost(rp, own_lead, host_proj, action,
                                    {out.reported.long_accel}, ctx.snap.road,
                                    ctx.w_obst, ovv.style);
  return out;
}

struct CandidateResult {
  HostAction action;
  double worst_cost = kInf;
  CostBreakdown worst_breakdown;
  bool feasible = false;
};

// Worst-case host cost of (alpha, a) over the follower best-response set.
CandidateResult eval_candidate(const SolveContext& ctx, int alpha, double accel) {
  CandidateResult res;
  res.action = {alpha, accel};
  const VehicleState& host = ctx.snap.host;
  const int target = host.lane + alpha;
  const double target_limit = ctx.snap.road.speed_limit(target);

  // Eq. (23): exclude actions whose projected speed leaves [0, limit].
  const double v_end = host.speed + accel * ctx.tau;
  if (v_end < -kTol || v_end > target_limit + kTol) return res;
  res.feasible = true;

  const VehicleState host_proj =
      project_constant_accel(host, accel, ctx.tau, 0.0, target_limit);

  const VehicleState base_lead = host_lead_reference(ctx, target);
  const int follower_idx = alpha != 0 ? designated_follower(ctx.snap, target) : -1;

  if (alpha == 0 || follower_idx < 0) {
    const CostBreakdown cb =
        host_cost(host_proj, base_lead, std::nullopt, res.action, ctx.snap.road,
                  ctx.w_host, ctx.snap.host_profile);
    res.worst_cost = cb.total;
    res.worst_breakdown = cb;
    return res;
  }

  const auto& ov = ctx.snap.others[static_cast<size_t>(follower_idx)];
  const bool follower_leads =
      ov.state.x > host.x && ov.state.x - host.x <= ctx.gp.anchor_range;
  ResponseEval resp = eval_response(ctx, follower_idx, res.action, host_proj);
  res.worst_cost = -kInf;
  for (size_t i = 0; i < resp.set.size(); ++i) {
    const VehicleState& op = resp.projections[i];
    // When the follower is also the target-lane leader, the efficiency
    // anchor tracks its reacted speed.
    const VehicleState lead = follower_leads ? op : base_lead;
    const CostBreakdown cb = host_cost(host_proj, lead, op, res.action,
                                       ctx.snap.road, ctx.w_host,
                                       ctx.snap.host_profile);
    if (cb.total > res.worst_cost) {
      res.worst_cost = cb.total;
      res.worst_breakdown = cb;
    }
  }
  return res;
}

}  // namespace

std::vector<double> follower_best_response(const HostAction& host_action,
                                           const WorldSnapshot& snapshot,
                                           int obstacle_index,
                                           const GameParams& params) {
  if (obstacle_index < 0 ||
      obstacle_index >= static_cast<int>(snapshot.others.size()))
    fail(ErrorCategory::validation, "obstacle index out of range");
  SolveContext ctx{snapshot,
                   params,
                   make_host_weights(params, snapshot.geometry),
                   make_obstacle_weights(params, snapshot.geometry),
                   params.action_horizon,
                   snapshot.host_desired > 0
                       ? snapshot.host_desired
                       : snapshot.road.speed_limit(snapshot.host.lane)};
  const int target = snapshot.host.lane + host_action.lane_decision;
  const double limit = ctx.snap.road.speed_limit(target);
  const VehicleState host_proj = project_constant_accel(
      snapshot.host, host_action.long_accel, ctx.tau, 0.0, limit);
  // Lane decision relative to this obstacle: +-1 only when targeted.
  HostAction rel = host_action;
  if (snapshot.others[static_cast<size_t>(obstacle_index)].state.lane != target ||
      host_action.lane_decision == 0)
    rel.lane_decision = 0;
  return eval_response(ctx, obstacle_index, rel, host_proj).set;
}

DecisionOutcome solve_stackelberg(const WorldSnapshot& snapshot,
                                  const GameParams& params,
                                  std::optional<int> committed_lane) {
  const VehicleState& host = snapshot.host;
  if (host.lane < 1 || host.lane > snapshot.road.lane_count)
    fail(ErrorCategory::invalid_lane, "host lane outside the road");

  SolveContext ctx{snapshot,
                   params,
                   make_host_weights(params, snapshot.geometry),
                   make_obstacle_weights(params, snapshot.geometry),
                   params.action_horizon,
                   snapshot.host_desired > 0
                       ? snapshot.host_desired
                       : snapshot.road.speed_limit(host.lane)};

  // Candidate enumeration order doubles as the tie rule: stay first, then
  // smaller |accel|, then the smaller (braking) value.
  std::vector<int> alphas;
  for (int alpha : {0, -1, 1}) {
    const int target = host.lane + alpha;
    if (target >= 1 && target <= snapshot.road.lane_count) alphas.push_back(alpha);
  }
  std::vector<double> accels = params.host_accel_grid;
  std::sort(accels.begin(), accels.end(), [](double a, double b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return a < b;
  });

  DecisionOutcome out;
  bool any = false;
  CandidateResult best;
  std::vector<CandidateResult> alpha_best(alphas.size());
  for (size_t ai = 0; ai < alphas.size(); ++ai) {
    for (double a : accels) {
      if (a < params.a_min - kTol || a > params.a_max + kTol) continue;
      const CandidateResult cand = eval_candidate(ctx, alphas[ai], a);
      if (!cand.feasible) continue;
      if (!alpha_best[ai].feasible ||
          cand.worst_cost < alpha_best[ai].worst_cost) {
        alpha_best[ai] = cand;
      }
      if (!any || cand.worst_cost < best.worst_cost) {
        best = cand;
        any = true;
      }
    }
  }
  if (!any)
    fail(ErrorCategory::infeasible,
         "no feasible host action: every candidate violates the velocity bounds");

  for (size_t ai = 0; ai < alphas.size(); ++ai) {
    if (alpha_best[ai].feasible)
      out.alpha_best.push_back({alphas[ai], alpha_best[ai].action.long_accel,
                                alpha_best[ai].worst_cost});
  }

  // A committed maneuver pins the lane decision; the acceleration is still
  // re-optimized each solve.
  if (committed_lane) {
    const int alpha_forced = *committed_lane - host.lane;
    for (size_t ai = 0; ai < alphas.size(); ++ai) {
      if (alphas[ai] == alpha_forced && alpha_best[ai].feasible) {
        best = alpha_best[ai];
        break;
      }
    }
  }

  out.host_action = best.action;
  out.host_cost = best.worst_breakdown;
  out.decided_cost = best.worst_cost;

  // Predicted responses of every obstacle to the decided action.
  const int target = host.lane + best.action.lane_decision;
  const double target_limit = snapshot.road.speed_limit(target);
  const VehicleState host_proj = project_constant_accel(
      host, best.action.long_accel, ctx.tau, 0.0, target_limit);
  const int designated =
      best.action.lane_decision != 0 ? designated_follower(snapshot, target) : -1;
  for (size_t i = 0; i < snapshot.others.size(); ++i) {
    if (snapshot.others[i].role != Role::obstacle) continue;
    HostAction rel = best.action;
    if (static_cast<int>(i) != designated) rel.lane_decision = 0;
    ResponseEval resp = eval_response(ctx, static_cast<int>(i), rel, host_proj);
    FollowerPrediction fp;
    fp.vehicle_index = static_cast<int>(i);
    fp.action = resp.reported;
    fp.response_set = resp.set;
    fp.cost = resp.reported_cost;
    out.followers.push_back(std::move(fp));
  }
  return out;
}

MatrixGameResult solve_matrix_game(
    const std::vector<std::vector<double>>& leader_costs,
    const std::vector<std::vector<double>>& follower_costs) {
  if (leader_costs.empty() || leader_costs.size() != follower_costs.size())
    fail(ErrorCategory::validation, "cost tables must have the same nonempty shape");
  const size_t cols = leader_costs[0].size();
  if (cols == 0)
    fail(ErrorCategory::validation, "cost tables must have the same nonempty shape");
  for (size_t r = 0; r < leader_costs.size(); ++r) {
    if (leader_costs[r].size() != cols || follower_costs[r].size() != cols)
      fail(ErrorCategory::validation, "cost tables must have the same nonempty shape");
  }

  int best_row = -1;
  int best_follower = 0;
  double best_worst = kInf;
  for (size_t r = 0; r < leader_costs.size(); ++r) {
    double fmin = kInf;
    for (double c : follower_costs[r]) fmin = std::min(fmin, c);
    double worst = -kInf;
    int first_in_set = -1;
    for (size_t j = 0; j < cols; ++j) {
      if (follower_costs[r][j] == fmin) {
        if (first_in_set < 0) first_in_set = static_cast<int>(j);
        worst = std::max(worst, leader_costs[r][j]);
      }
    }
    if (best_row < 0 || worst < best_worst) {
      best_row = static_cast<int>(r);
      best_worst = worst;
      best_follower = first_in_set;
    }
  }
  MatrixGameResult res;
  res.leader = best_row;
  res.follower = best_follower;
  res.leader_cost = leader_costs[static_cast<size_t>(best_row)][static_cast<size_t>(best_follower)];
  res.follower_cost = follower_costs[static_cast<size_t>(best_row)][static_cast<size_t>(best_follower)];
  return res;
}

}  // namespace gtplan
