#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gtplan/decision_game.hpp"
#include "gtplan/motion_planner.hpp"
#include "gtplan/params.hpp"
#include "gtplan/world.hpp"

namespace gtplan {

struct ObstacleDecisionRecord {
  std::string name;
  double predicted_accel = 0.0;  // best response to the decided host action
  double executed_accel = 0.0;   // acceleration the vehicle actually applies
  CostBreakdown cost;            // obstacle cost at the predicted response
};

struct DecisionRecord {
  double t = 0.0;
  int alpha = 0;
  int target_lane = 1;
  double host_accel = 0.0;
  double decided_cost = 0.0;
  CostBreakdown host_cost;
  std::vector<ObstacleDecisionRecord> obstacles;
};

struct StepRecord {
  double t = 0.0;
  VehicleState host;
  std::vector<VehicleState> others;  // order matches SimLog::vehicle_names
  int decision_index = -1;           // active decision, index into decisions
  double u_applied = 0.0;
  double plan_cost = 0.0;
  double min_gap = 0.0;  // same-lane longitudinal gap minus safety length
};

struct SimLog {
  Scenario scenario;
  Params params;
  std::vector<std::string> vehicle_names;
  std::vector<DecisionRecord> decisions;
  std::vector<StepRecord> steps;
  bool collision = false;
  double collision_time = -1.0;
  bool infeasible = false;
  std::string note;
};

/// Runs the integrated decision/planning loop: the game re-solves every
/// decision period and latches the target lane and host acceleration, the
/// planner runs every sample step and its first control is applied, obstacle
/// vehicles execute their game responses (game-response mode) or hold speed.
/// Ends at the scenario duration or at the first collision, which is logged
/// and flagged rather than thrown.
SimLog simulate(const Scenario& scenario, const Params& params);

/// First timestamp whose active decision has a nonzero lane decision.
std::optional<double> lane_change_onset(const SimLog& log);

/// Whether a decided lane change ever reached the target centerline
/// (|Y - center| < epsilon, |heading| < 0.02 rad), and the longitudinal
/// position where it first did.
std::pair<bool, std::optional<double>> lane_change_complete(const SimLog& log,
                                                            double epsilon);

struct ChangeEpisode {
  double onset_t = 0.0;
  int target_lane = 0;
  bool completed = false;
  double completion_t = 0.0;
  double completion_x = 0.0;
};

/// All lane-change episodes in the log (onset, target, completion).
std::vector<ChangeEpisode> change_episodes(const SimLog& log, double epsilon,
                                           double heading_epsilon);

struct GapMetrics {
  double min_gap = 0.0;  // +inf sentinel when no same-lane pair ever exists
  struct PairSeries {
    std::string a, b;
    std::vector<double> gaps;  // +inf on steps where the pair split lanes
  };
  std::vector<PairSeries> pairs;
};

/// Minimum over time of the same-lane longitudinal gap minus the safety
/// length, plus the per-pair time series.
GapMetrics gap_metrics(const SimLog& log);

/// Column-documented tab-separated table, one row per step. Byte-stable for
/// identical inputs.
void write_table(std::ostream& os, const SimLog& log);

/// Structured run summary (decisions, onset/completion metrics, minimum gap,
/// collision flag) as a JSON document.
void write_summary(std::ostream& os, const SimLog& log);

}  // namespace gtplan
