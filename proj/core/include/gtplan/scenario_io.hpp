#pragma once

#include <string>
#include <vector>

#include "gtplan/params.hpp"
#include "gtplan/world.hpp"

namespace gtplan {

// A scenario document bundles the world description with any parameter
// overrides it carries.
struct ScenarioDocument {
  Scenario scenario;
  Params params;  // defaults with document overrides applied
};

/// Parses and validates a scenario config document (JSON text). Raises a
/// parse error naming the offending field on schema violations and a
/// validation error on invariant breaches.
ScenarioDocument load_scenario(const std::string& text);

/// Reads a scenario from a file path.
ScenarioDocument load_scenario_file(const std::string& path);

/// Serializes a scenario (without parameter overrides) back to JSON text.
/// load(save(s)) reproduces the scenario exactly.
std::string save_scenario(const Scenario& scenario);

/// Names of the built-in scenario documents.
std::vector<std::string> bundled_scenario_names();

/// Raw JSON text of a bundled scenario (case1, case2, case3).
const std::string& bundled_scenario_text(const std::string& name);

/// Loads a bundled scenario by name.
ScenarioDocument bundled_scenario(const std::string& name);

}  // namespace gtplan
