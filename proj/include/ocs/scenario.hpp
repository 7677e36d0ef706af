#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ocs/chiller_catalog.hpp"
#include "ocs/plant_model.hpp"

namespace ocs {

/// One day of exogenous inputs plus the plant parameters it is run with.
struct Scenario {
  std::string name;
  std::string description;
  double start_hour = 7.0;  // clock time of the first step, for reporting
  double sampling_h = 1.0;
  std::vector<double> t_amb_k;
  std::vector<double> q_occ_w;
  PlantParams plant;
  std::vector<bool> initial_on;  // empty: every unit off before the first step

  std::size_t steps() const { return q_occ_w.size(); }
  StepExogenous exogenous(std::size_t t) const { return {t_amb_k[t], q_occ_w[t]}; }

  /// Structural checks only; see validate_against for the catalog checks.
  void validate(const std::string& path = "scenario") const;
  /// Checks that need the plant: initial state size and tau < sampling.
  void validate_against(const std::vector<ChillerSpec>& chillers) const;

  bool operator==(const Scenario&) const = default;
};

Scenario scenario_from_json(const nlohmann::json& doc, const std::string& origin = "scenario");
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Loads a scenario file, or one of the bundled fixtures when `path_or_name`
/// is "tl1", "tl2" or "tl3" and no such file exists.
Scenario load_scenario(const std::string& path_or_name);
Scenario load_scenario_file(const std::filesystem::path& path);

/// Reconstructed 12-hour (07:00-19:00) hospital-module days:
///   tl1  warm day, single afternoon peak around 14:00;
///   tl2  hotter day, morning and afternoon peaks;
///   tl3  half-holiday, load concentrated in the morning.
Scenario fixture_scenario(const std::string& name);
const std::vector<std::string>& fixture_scenario_names();

}  // namespace ocs
