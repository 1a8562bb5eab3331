#include "gtplan/closed_loop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "gtplan/errors.hpp"
#include "gtplan/potential_field.hpp"

namespace gtplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

double pair_gap(const VehicleState& a, const VehicleState& b, double l_v) {
  if (a.lane != b.lane) return kInf;
  return std::abs(a.x - b.x) - l_v;
}

double step_min_gap(const VehicleState& host, const std::vector<VehicleState>& others,
                    double l_v) {
  double m = kInf;
  for (size_t i = 0; i < others.size(); ++i) {
    m = std::min(m, pair_gap(host, others[i], l_v));
    for (size_t j = i + 1; j < others.size(); ++j)
      m = std::min(m, pair_gap(others[i], others[j], l_v));
  }
  return m;
}

// Tie rule for the reported/executed follower response: smallest |accel|,
// then the smaller value.
double pick_response(const std::vector<double>& set) {
  double best = 0.0;
  double best_key = kInf;
  for (double a : set) {
    if (std::abs(a) < best_key - 1e-12) {
      best_key = std::abs(a);
      best = a;
    }
  }
  return best;
}

}  // namespace

SimLog simulate(const Scenario& scenario, const Params& params) {
  scenario.validate(params.vehicle);
  params.validate();

  SimLog log;
  log.scenario = scenario;
  log.params = params;

  const Road& road = scenario.road;
  const double dt = scenario.timing.sample_time;
  const int n_steps = static_cast<int>(std::llround(scenario.timing.duration / dt));
  const int decision_every =
      static_cast<int>(std::llround(scenario.timing.decision_period / dt));
  const double desired = scenario.desired_speed_resolved();

  VehicleState host = scenario.host;
  host.y = lane_center(road, host.lane);
  std::vector<TrafficVehicle> others = scenario.others;
  for (auto& v : others) {
    v.state.y = lane_center(road, v.state.lane);
    log.vehicle_names.push_back(v.name);
  }

  std::optional<int> committed;
  double commit_deadline = 0.0;
  int target_lane = host.lane;
  double host_cmd_accel = 0.0;
  std::vector<double> exec_accel(others.size(), 0.0);

  for (int k = 0; k < n_steps; ++k) {
    const double t = k * dt;
    host.lane = lane_of(road, host.y);

    if (k % decision_every == 0) {
      // Commitment release: arrived on the target centerline or timed out.
      if (committed) {
        const bool arrived =
            std::abs(host.y - lane_center(road, *committed)) <
                params.loop.lane_change_epsilon &&
            std::abs(host.heading) < params.loop.heading_epsilon;
        if (arrived || t >= commit_deadline) committed.reset();
      }

      WorldSnapshot snap;
      snap.road = road;
      snap.geometry = params.vehicle;
      snap.host = host;
      snap.host_desired = desired;
      snap.host_profile = style_weights(params.game.host_style);
      for (const auto& v : others)
        snap.others.push_back({v.name, v.state, v.style, v.role});

      DecisionRecord rec;
      rec.t = t;
      try {
        const DecisionOutcome outcome =
            solve_stackelberg(snap, params.game, committed);
        const int alpha = outcome.host_action.lane_decision;
        if (!committed && alpha != 0) {
          committed = host.lane + alpha;
          commit_deadline = t + params.loop.commit_time;
        }
        target_lane = committed ? *committed : host.lane;
        host_cmd_accel = outcome.host_action.long_accel;

        rec.alpha = alpha;
        rec.target_lane = target_lane;
        rec.host_accel = host_cmd_accel;
        rec.decided_cost = outcome.decided_cost;
        rec.host_cost = outcome.host_cost;

        for (size_t i = 0; i < others.size(); ++i) {
          if (others[i].role != Role::obstacle) continue;
          ObstacleDecisionRecord od;
          od.name = others[i].name;
          for (const auto& fp : outcome.followers) {
            if (fp.vehicle_index == static_cast<int>(i)) {
              od.predicted_accel = fp.action.long_accel;
              od.cost = fp.cost;
            }
          }
          double exec = 0.0;
          if (params.loop.obstacle_mode == ObstacleMode::game_response) {
            if (alpha != 0 && others[i].state.lane == host.lane + alpha) {
              // Targeted by the decided maneuver: play the predicted response.
              exec = od.predicted_accel;
            } else {
              // React once the host's best candidate into this lane becomes
              // competitive with the decided action.
              const int alpha_hat = others[i].state.lane - host.lane;
              if (alpha_hat == -1 || alpha_hat == 1) {
                for (const auto& cand : outcome.alpha_best) {
                  if (cand.lane_decision != alpha_hat) continue;
                  if (cand.worst_host_cost <=
                      outcome.decided_cost + params.game.react_margin) {
                    const HostAction threat{alpha_hat, cand.long_accel};
                    exec = pick_response(follower_best_response(
                        threat, snap, static_cast<int>(i), params.game));
                  }
                }
              }
            }
          }
          od.executed_accel = exec;
          exec_accel[i] = exec;
          rec.obstacles.push_back(std::move(od));
        }
      } catch (const Error& e) {
        if (e.category() != ErrorCategory::infeasible) throw;
        log.infeasible = true;
        log.note = e.what();
        break;
      }
      log.decisions.push_back(std::move(rec));
    }

    // Plan the lateral control toward the target-lane centerline.
    FieldScene scene = build_scene(road, others, params.field, params.vehicle);
    double u = 0.0;
    double cost = 0.0;
    if (host.speed >= params.planner.speed_floor) {
      PlannerParams pp = params.planner;
      pp.sample_time = dt;
      const PlanResult plan =
          solve_mpc(host, host_cmd_accel, scene, lane_center(road, target_lane),
                    pp, road.speed_limit(host.lane));
      u = plan.control_sequence.front().lat_accel;
      cost = plan.cost;
    }

    StepRecord sr;
    sr.t = t;
    sr.host = host;
    sr.host.long_accel = host_cmd_accel;
    sr.host.lat_accel = u;
    for (const auto& v : others) sr.others.push_back(v.state);
    sr.decision_index = static_cast<int>(log.decisions.size()) - 1;
    sr.u_applied = u;
    sr.plan_cost = cost;
    sr.min_gap = step_min_gap(sr.host, sr.others, params.vehicle.safety_length);
    log.steps.push_back(std::move(sr));

    if (log.steps.back().min_gap < 0.0) {
      log.collision = true;
      log.collision_time = t;
      break;
    }

    // Advance the host.
    if (host.speed >= params.planner.speed_floor) {
      host = step(host, {u}, host_cmd_accel, dt, road.speed_limit(host.lane),
                  params.planner.speed_floor);
    } else {
      // Below the floor the heading dynamics are singular: coast straight.
      host = project_constant_accel(host, host_cmd_accel, dt, 0.0,
                                    road.speed_limit(host.lane));
    }
    host.lane = lane_of(road, host.y);

    // Advance the surrounding vehicles (ahead vehicles hold speed).
    for (size_t i = 0; i < others.size(); ++i) {
      const double a = others[i].role == Role::obstacle ? exec_accel[i] : 0.0;
      others[i].state = project_constant_accel(
          others[i].state, a, dt, 0.0, road.speed_limit(others[i].state.lane));
    }
  }
  return log;
}

std::optional<double> lane_change_onset(const SimLog& log) {
  for (const auto& s : log.steps) {
    if (s.decision_index < 0) continue;
    if (log.decisions[static_cast<size_t>(s.decision_index)].alpha != 0) return s.t;
  }
  return std::nullopt;
}

std::vector<ChangeEpisode> change_episodes(const SimLog& log, double epsilon,
                                           double heading_epsilon) {
  std::vector<ChangeEpisode> out;
  bool active = false;
  ChangeEpisode ep;
  for (const auto& s : log.steps) {
    if (s.decision_index < 0) continue;
    const auto& d = log.decisions[static_cast<size_t>(s.decision_index)];
    if (!active && d.alpha != 0) {
      active = true;
      ep = ChangeEpisode{};
      ep.onset_t = s.t;
      ep.target_lane = d.target_lane;
    }
    if (!active) continue;
    const double center = lane_center(log.scenario.road, ep.target_lane);
    if (std::abs(s.host.y - center) < epsilon &&
        std::abs(s.host.heading) < heading_epsilon) {
      ep.completed = true;
      ep.completion_t = s.t;
      ep.completion_x = s.host.x;
      out.push_back(ep);
      active = false;
    } else if (d.alpha == 0 && d.target_lane != ep.target_lane) {
      out.push_back(ep);  // aborted before crossing
      active = false;
    }
  }
  if (active) out.push_back(ep);
  return out;
}

std::pair<bool, std::optional<double>> lane_change_complete(const SimLog& log,
                                                            double epsilon) {
  const auto eps = change_episodes(log, epsilon, log.params.loop.heading_epsilon);
  for (const auto& ep : eps) {
    if (ep.completed) return {true, ep.completion_x};
  }
  return {false, std::nullopt};
}

GapMetrics gap_metrics(const SimLog& log) {
  GapMetrics m;
  m.min_gap = kInf;
  const double l_v = log.params.vehicle.safety_length;
  std::vector<std::pair<int, int>> pairs;  // -1 = host
  const int n = static_cast<int>(log.vehicle_names.size());
  for (int i = -1; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  for (const auto& [i, j] : pairs) {
    GapMetrics::PairSeries ps;
    ps.a = i < 0 ? "host" : log.vehicle_names[static_cast<size_t>(i)];
    ps.b = log.vehicle_names[static_cast<size_t>(j)];
    for (const auto& s : log.steps) {
      const VehicleState& a = i < 0 ? s.host : s.others[static_cast<size_t>(i)];
      const VehicleState& b = s.others[static_cast<size_t>(j)];
      const double g = pair_gap(a, b, l_v);
      ps.gaps.push_back(g);
      m.min_gap = std::min(m.min_gap, g);
    }
    m.pairs.push_back(std::move(ps));
  }
  return m;
}

void write_table(std::ostream& os, const SimLog& log) {
  os << "# gtplan simulation log: scenario=" << log.scenario.name << "\n";
  os << "# columns: t host_x host_y host_v host_phi host_lane host_ax host_u";
  for (const auto& n : log.vehicle_names)
    os << " " << n << "_x " << n << "_y " << n << "_v " << n << "_lane " << n << "_ax";
  os << " alpha target_lane cmd_ax u plan_cost cost_safety cost_comfort"
        " cost_efficiency cost_total min_gap\n";
  for (const auto& s : log.steps) {
    os << fmt(s.t) << "\t" << fmt(s.host.x) << "\t" << fmt(s.host.y) << "\t"
       << fmt(s.host.speed) << "\t" << fmt(s.host.heading) << "\t" << s.host.lane
       << "\t" << fmt(s.host.long_accel) << "\t" << fmt(s.u_applied);
    for (const auto& v : s.others) {
      os << "\t" << fmt(v.x) << "\t" << fmt(v.y) << "\t" << fmt(v.speed) << "\t"
         << v.lane << "\t" << fmt(v.long_accel);
    }
    const DecisionRecord* d =
        s.decision_index >= 0 ? &log.decisions[static_cast<size_t>(s.decision_index)]
                              : nullptr;
    os << "\t" << (d ? d->alpha : 0) << "\t" << (d ? d->target_lane : s.host.lane)
       << "\t" << fmt(d ? d->host_accel : 0.0) << "\t" << fmt(s.u_applied) << "\t"
       << fmt(s.plan_cost);
    if (d) {
      os << "\t" << fmt(d->host_cost.safety) << "\t" << fmt(d->host_cost.comfort)
         << "\t" << fmt(d->host_cost.efficiency) << "\t" << fmt(d->host_cost.total);
    } else {
      os << "\t0\t0\t0\t0";
    }
    os << "\t" << fmt(s.min_gap) << "\n";
  }
}

void write_summary(std::ostream& os, const SimLog& log) {
  const auto onset = lane_change_onset(log);
  const auto complete = lane_change_complete(log, log.params.loop.lane_change_epsilon);
  const auto episodes = change_episodes(log, log.params.loop.lane_change_epsilon,
                                        log.params.loop.heading_epsilon);
  const auto gaps = gap_metrics(log);

  auto jnum = [](double v) -> std::string {
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    return fmt(v);
  };

  os << "{\n";
  os << "  \"scenario\": \"" << log.scenario.name << "\",\n";
  os << "  \"steps\": " << log.steps.size() << ",\n";
  os << "  \"collision\": " << (log.collision ? "true" : "false") << ",\n";
  os << "  \"collision_time\": " << (log.collision ? fmt(log.collision_time) : "null")
     << ",\n";
  os << "  \"infeasible\": " << (log.infeasible ? "true" : "false") << ",\n";
  os << "  \"lane_change_onset\": " << (onset ? fmt(*onset) : "null") << ",\n";
  os << "  \"lane_change_completed\": " << (complete.first ? "true" : "false")
     << ",\n";
  os << "  \"completion_x\": "
     << (complete.second ? fmt(*complete.second) : "null") << ",\n";
  os << "  \"min_gap\": " << jnum(gaps.min_gap) << ",\n";
  os << "  \"episodes\": [";
  for (size_t i = 0; i < episodes.size(); ++i) {
    const auto& ep = episodes[i];
    os << (i ? "," : "") << "\n    {\"onset_t\": " << fmt(ep.onset_t)
       << ", \"target_lane\": " << ep.target_lane
       << ", \"completed\": " << (ep.completed ? "true" : "false")
       << ", \"completion_t\": " << (ep.completed ? fmt(ep.completion_t) : "null")
       << ", \"completion_x\": " << (ep.completed ? fmt(ep.completion_x) : "null")
       << "}";
  }
  os << (episodes.empty() ? "" : "\n  ") << "],\n";
  os << "  \"decisions\": [";
  int prev_alpha = 0;
  int prev_target = -1;
  bool first = true;
  std::ostringstream dec;
  for (const auto& d : log.decisions) {
    if (d.alpha == prev_alpha && d.target_lane == prev_target) continue;
    dec << (first ? "" : ",") << "\n    {\"t\": " << fmt(d.t)
        << ", \"alpha\": " << d.alpha << ", \"target_lane\": " << d.target_lane
        << ", \"host_accel\": " << fmt(d.host_accel) << "}";
    prev_alpha = d.alpha;
    prev_target = d.target_lane;
    first = false;
  }
  os << dec.str() << (first ? "" : "\n  ") << "],\n";

  os << "  \"final\": {\n";
  if (!log.steps.empty()) {
    const auto& last = log.steps.back();
    os << "    \"t\": " << fmt(last.t) << ",\n";
    os << "    \"host\": {\"x\": " << fmt(last.host.x) << ", \"y\": "
       << fmt(last.host.y) << ", \"speed\": " << fmt(last.host.speed)
       << ", \"lane\": " << last.host.lane << "},\n";
    os << "    \"vehicles\": [";
    for (size_t i = 0; i < last.others.size(); ++i) {
      const auto& v = last.others[i];
      os << (i ? "," : "") << "\n      {\"name\": \"" << log.vehicle_names[i]
         << "\", \"x\": " << fmt(v.x) << ", \"speed\": " << fmt(v.speed)
         << ", \"lane\": " << v.lane << "}";
    }
    os << (last.others.empty() ? "" : "\n    ") << "]\n";
  }
  os << "  }\n";
  os << "}\n";
}

}  // namespace gtplan
