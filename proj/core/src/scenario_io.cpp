#include "gtplan/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gtplan/errors.hpp"

namespace gtplan {

using nlohmann::json;

namespace {

// The three test cases. Speeds and gaps follow the published setups; road
// dimensions and timing use the artifact defaults.
//
// case1: single lane change on a two-lane road. The host approaches a slower
// vehicle ahead; one obstacle sits two meters behind on the left lane.
const std::string kCase1 = R"({
  "name": "case1",
  "road": {"lanes": 2, "lane_width": 3.75, "length": 800.0, "speed_limits": [25.0, 25.0]},
  "host": {"lane": 2, "x": 0.0, "speed": 20.0, "desired_speed": 20.0},
  "vehicles": [
    {"name": "V1", "lane": 2, "x": 50.0, "speed": 15.0, "role": "ahead"},
    {"name": "V2", "lane": 1, "x": -2.0, "speed": 12.0, "role": "obstacle", "style": "normal", "sweep": true}
  ],
  "timing": {"duration": 15.0, "sample_time": 0.1, "decision_period": 0.5}
})";

// case2: double lane change. V2 (fixed normal) guards the first change to
// the left; V3 is the slow leader met on the left lane 105 m ahead of V2;
// V1, initially the vehicle ahead, becomes the obstacle guarding the return
// to the right lane.
const std::string kCase2 = R"({
  "name": "case2",
  "road": {"lanes": 2, "lane_width": 3.75, "length": 800.0, "speed_limits": [25.0, 25.0]},
  "host": {"lane": 2, "x": 0.0, "speed": 20.0, "desired_speed": 20.0},
  "vehicles": [
    {"name": "V1", "lane": 2, "x": 50.0, "speed": 15.0, "role": "obstacle", "style": "normal", "sweep": true},
    {"name": "V2", "lane": 1, "x": -2.0, "speed": 12.0, "role": "obstacle", "style": "normal"},
    {"name": "V3", "lane": 1, "x": 103.0, "speed": 15.0, "role": "ahead"}
  ],
  "timing": {"duration": 30.0, "sample_time": 0.1, "decision_period": 0.5}
})";

// case3: three-lane road, host on the middle lane, obstacles on both sides.
const std::string kCase3 = R"({
  "name": "case3",
  "road": {"lanes": 3, "lane_width": 3.75, "length": 800.0, "speed_limits": [25.0, 25.0, 25.0]},
  "host": {"lane": 2, "x": 0.0, "speed": 20.0, "desired_speed": 20.0},
  "vehicles": [
    {"name": "V1", "lane": 2, "x": 30.0, "speed": 15.0, "role": "ahead"},
    {"name": "V2", "lane": 1, "x": -2.0, "speed": 12.0, "role": "obstacle", "style": "normal", "sweep": true},
    {"name": "V4", "lane": 3, "x": 3.0, "speed": 13.0, "role": "obstacle", "style": "normal", "sweep": true}
  ],
  "timing": {"duration": 18.0, "sample_time": 0.1, "decision_period": 0.5}
})";

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  fail(ErrorCategory::parse, "scenario field '" + where + "': " + what);
}

double require_number(const json& j, const std::string& where) {
  if (!j.is_number()) parse_fail(where, "expected a number");
  return j.get<double>();
}

int require_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) parse_fail(where, "expected an integer");
  return j.get<int>();
}

std::string require_string(const json& j, const std::string& where) {
  if (!j.is_string()) parse_fail(where, "expected a string");
  return j.get<std::string>();
}

const json& require_key(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) parse_fail(where + "." + key, "missing");
  return j.at(key);
}

}  // namespace

ScenarioDocument load_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCategory::parse, std::string("scenario document is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCategory::parse, "scenario document must be a JSON object");

  ScenarioDocument doc;
  Scenario& s = doc.scenario;
  if (j.contains("name")) s.name = require_string(j.at("name"), "name");

  const json& jr = require_key(j, "road", "");
  s.road.lane_count = require_int(require_key(jr, "lanes", "road"), "road.lanes");
  s.road.lane_width = require_number(require_key(jr, "lane_width", "road"), "road.lane_width");
  s.road.length = require_number(require_key(jr, "length", "road"), "road.length");
  const json& jl = require_key(jr, "speed_limits", "road");
  if (!jl.is_array()) parse_fail("road.speed_limits", "expected an array");
  for (const auto& v : jl) s.road.speed_limits.push_back(require_number(v, "road.speed_limits[]"));

  const json& jh = require_key(j, "host", "");
  s.host.lane = require_int(require_key(jh, "lane", "host"), "host.lane");
  s.host.x = require_number(require_key(jh, "x", "host"), "host.x");
  s.host.speed = require_number(require_key(jh, "speed", "host"), "host.speed");
  if (jh.contains("desired_speed"))
    s.host_desired_speed = require_number(jh.at("desired_speed"), "host.desired_speed");

  if (j.contains("vehicles")) {
    const json& jv = j.at("vehicles");
    if (!jv.is_array()) parse_fail("vehicles", "expected an array");
    for (size_t i = 0; i < jv.size(); ++i) {
      const json& e = jv[i];
      const std::string where = "vehicles[" + std::to_string(i) + "]";
      TrafficVehicle v;
      v.name = require_string(require_key(e, "name", where), where + ".name");
      v.state.lane = require_int(require_key(e, "lane", where), where + ".lane");
      v.state.x = require_number(require_key(e, "x", where), where + ".x");
      v.state.speed = require_number(require_key(e, "speed", where), where + ".speed");
      v.role = role_from_string(require_string(require_key(e, "role", where), where + ".role"));
      if (e.contains("style"))
        v.style = style_weights(style_from_string(require_string(e.at("style"), where + ".style")));
      else
        v.style = style_weights(Style::normal);
      if (e.contains("sweep")) {
        if (!e.at("sweep").is_boolean()) parse_fail(where + ".sweep", "expected a bool");
        v.sweep = e.at("sweep").get<bool>();
      }
      s.others.push_back(std::move(v));
    }
  }

  const json& jt = require_key(j, "timing", "");
  s.timing.duration = require_number(require_key(jt, "duration", "timing"), "timing.duration");
  s.timing.sample_time = require_number(require_key(jt, "sample_time", "timing"), "timing.sample_time");
  s.timing.decision_period =
      require_number(require_key(jt, "decision_period", "timing"), "timing.decision_period");

  if (j.contains("overrides")) {
    const json& jo = j.at("overrides");
    if (!jo.is_object()) parse_fail("overrides", "expected an object");
    for (auto it = jo.begin(); it != jo.end(); ++it) {
      std::string value;
      if (it.value().is_string()) value = it.value().get<std::string>();
      else value = it.value().dump();
      doc.params.set(it.key(), value);
    }
  }

  doc.params.planner.sample_time = s.timing.sample_time;
  s.validate(doc.params.vehicle);
  doc.params.validate();
  return doc;
}

ScenarioDocument load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCategory::io, "cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string save_scenario(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["road"] = {{"lanes", s.road.lane_count},
               {"lane_width", s.road.lane_width},
               {"length", s.road.length},
               {"speed_limits", s.road.speed_limits}};
  j["host"] = {{"lane", s.host.lane}, {"x", s.host.x}, {"speed", s.host.speed}};
  if (s.host_desired_speed > 0) j["host"]["desired_speed"] = s.host_desired_speed;
  j["vehicles"] = json::array();
  for (const auto& v : s.others) {
    json e = {{"name", v.name},
              {"lane", v.state.lane},
              {"x", v.state.x},
              {"speed", v.state.speed},
              {"role", to_string(v.role)},
              {"style", to_string(v.style.label)}};
    if (v.sweep) e["sweep"] = true;
    j["vehicles"].push_back(std::move(e));
  }
  j["timing"] = {{"duration", s.timing.duration},
                 {"sample_time", s.timing.sample_time},
                 {"decision_period", s.timing.decision_period}};
  return j.dump(2) + "\n";
}

std::vector<std::string> bundled_scenario_names() { return {"case1", "case2", "case3"}; }

const std::string& bundled_scenario_text(const std::string& name) {
  if (name == "case1") return kCase1;
  if (name == "case2") return kCase2;
  if (name == "case3") return kCase3;
  fail(ErrorCategory::io, "unknown bundled scenario '" + name + "'");
}

ScenarioDocument bundled_scenario(const std::string& name) {
  return load_scenario(bundled_scenario_text(name));
}

}  // namespace gtplan
