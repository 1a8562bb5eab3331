#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gtplan/params.hpp"
#include "gtplan/world.hpp"

namespace gtplan {

// Host lane-change decision: -1 change left, 0 stay, +1 change right,
// paired with a longitudinal acceleration from a finite candidate grid.
struct HostAction {
  int lane_decision = 0;
  double long_accel = 0.0;
};

struct FollowerAction {
  double long_accel = 0.0;
};

// Weighting coefficients of the safety / comfort cost terms plus the
// denominator guard and the safety length entering every gap.
struct CostWeights {
  double k_v_log = 1.0;
  double k_s_log = 1.0;
  double k_v_lat = 1.0;
  double k_s_lat = 1.0;
  double k_ax = 1.0;
  double k_ay = 1.0;
  double nu = 1e-3;
  double safety_length = 5.0;
  double absent_gap = 1e6;
};

struct CostBreakdown {
  double safety = 0.0;
  double comfort = 0.0;
  double efficiency = 0.0;
  double total = 0.0;
};

/// 1 when the relative velocity closes (delta_v < 0), else 0.
int indicator(double delta_v);

/// Host decision cost. The safety component switches between the
/// longitudinal term (vs. `ahead`, active when lane_decision == 0) and the
/// lateral term (vs. `target_obstacle`, active otherwise); exactly one is
/// live for any action. The efficiency reference speed is
/// min(target-lane limit, ahead->speed), falling back to the target-lane
/// limit when `ahead` is absent. Absent vehicles are replaced by phantoms
/// far enough away that their terms vanish.
CostBreakdown host_cost(const VehicleState& host,
                        const std::optional<VehicleState>& ahead,
                        const std::optional<VehicleState>& target_obstacle,
                        const HostAction& action, const Road& road,
                        const CostWeights& weights, const StyleProfile& style);

/// Obstacle (follower) decision cost. `host_action.lane_decision` must be
/// the host's move relative to this obstacle's lane: +-1 only when the host
/// targets the obstacle's lane, 0 otherwise. When it is +-1 the safety term
/// equals the host's lateral safety cost against this obstacle; when 0 it is
/// the obstacle's own car-following cost against `obstacle_ahead`.
CostBreakdown obstacle_cost(const VehicleState& obstacle,
                            const std::optional<VehicleState>& obstacle_ahead,
                            const VehicleState& host, const HostAction& host_action,
                            const FollowerAction& follower, const Road& road,
                            const CostWeights& weights, const StyleProfile& style);

// One surrounding vehicle inside a decision snapshot.
struct SnapshotVehicle {
  std::string name;
  VehicleState state;
  StyleProfile style;
  Role role = Role::ahead;
};

// Immutable world state a single game solve runs on.
struct WorldSnapshot {
  Road road;
  VehicleGeometry geometry;
  VehicleState host;
  double host_desired = -1.0;  // <=0: host-lane speed limit
  StyleProfile host_profile;
  std::vector<SnapshotVehicle> others;
};

struct FollowerPrediction {
  int vehicle_index = -1;  // index into WorldSnapshot::others
  FollowerAction action;   // reported response (smallest |accel| in the set)
  std::vector<double> response_set;  // all exact minimizers, grid order
  CostBreakdown cost;      // obstacle cost at the reported response
};

// Best worst-case host cost for one feasible lane decision, with the
// acceleration that attains it. Used by the closed loop to detect
// lane-change intent.
struct CandidateEval {
  int lane_decision = 0;
  double long_accel = 0.0;
  double worst_host_cost = 0.0;
};

struct DecisionOutcome {
  HostAction host_action;
  CostBreakdown host_cost;
  double decided_cost = 0.0;
  std::vector<FollowerPrediction> followers;  // one per obstacle-role vehicle
  std::vector<CandidateEval> alpha_best;      // one per feasible lane decision
};

/// Exact best-response set of one obstacle to a host action: every element
/// of the follower grid attaining the minimal obstacle cost, evaluated on
/// states projected one action horizon ahead.
std::vector<double> follower_best_response(const HostAction& host_action,
                                           const WorldSnapshot& snapshot,
                                           int obstacle_index,
                                           const GameParams& params);

/// Solves the leader-follower decision problem by exhaustive enumeration of
/// the discretized action grids: for every feasible (lane decision,
/// acceleration) the follower best-response set is computed and the leader
/// minimizes its worst cost over that set. Velocity bounds exclude violating
/// host actions; if none remain an infeasible error is raised. Ties prefer
/// staying, then the smaller |acceleration|.
/// `committed_lane` forces the lane decision toward that lane while the
/// acceleration is still optimized (used mid-maneuver by the closed loop).
DecisionOutcome solve_stackelberg(const WorldSnapshot& snapshot,
                                  const GameParams& params,
                                  std::optional<int> committed_lane = std::nullopt);

struct MatrixGameResult {
  int leader = 0;
  int follower = 0;
  double leader_cost = 0.0;
  double follower_cost = 0.0;
};

/// Leader-follower equilibrium of a discrete cost-table game, sharing the
/// solver core of solve_stackelberg: the follower plays an exact argmin
/// within the leader's row, the leader minimizes its worst cost over the
/// follower's tie set. Ties pick the first index.
MatrixGameResult solve_matrix_game(const std::vector<std::vector<double>>& leader_costs,
                                   const std::vector<std::vector<double>>& follower_costs);

/// Longitudinal constant-acceleration projection over dt with the speed
/// clamped to [v_min, v_max]; position integrates the clamped speed profile.
VehicleState project_constant_accel(const VehicleState& s, double accel, double dt,
                                    double v_min, double v_max);

}  // namespace gtplan
