#include "ocs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ocs/errors.hpp"

namespace ocs {

using nlohmann::json;

void Scenario::validate(const std::string& path) const {
  if (name.empty()) throw ValidationError(path + ".name", "must not be empty");
  if (!(sampling_h > 0.0)) throw ValidationError(path + ".sampling_h", "must be > 0");
  if (q_occ_w.empty()) throw ValidationError(path + ".q_occ_w", "need at least one step");
  if (t_amb_k.size() != q_occ_w.size()) {
    throw ValidationError(path + ".q_occ_w", "length " + std::to_string(q_occ_w.size()) +
                                                 " does not match t_amb_k length " +
                                                 std::to_string(t_amb_k.size()));
  }
  for (std::size_t t = 0; t < q_occ_w.size(); ++t) {
    if (!(q_occ_w[t] >= 0.0) || !std::isfinite(q_occ_w[t])) {
      throw ValidationError(path + ".q_occ_w[" + std::to_string(t) + "]",
                            "load must be finite and non-negative");
    }
    if (!(t_amb_k[t] > 0.0) || !std::isfinite(t_amb_k[t])) {
      throw ValidationError(path + ".t_amb_k[" + std::to_string(t) + "]",
                            "temperature must be a positive kelvin value");
    }
  }
  plant.validate(path + ".plant");
}

void Scenario::validate_against(const std::vector<ChillerSpec>& chillers) const {
  if (!initial_on.empty() && initial_on.size() != chillers.size()) {
    throw ValidationError("scenario.initial_on", "one entry per chiller required");
  }
  for (std::size_t i = 0; i < chillers.size(); ++i) {
    if (!(chillers[i].tau_h < sampling_h)) {
      throw ValidationError("chillers[" + std::to_string(i) + "].tau_h",
                            "time constant must be shorter than the sampling period");
    }
  }
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& path) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw ValidationError(path + "." + key, "unknown field");
    }
  }
}

const json& object_at(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path + "." + key, "missing required field");
  if (!it->is_object()) throw ValidationError(path + "." + key, "expected an object");
  return *it;
}

double number_at(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path + "." + key, "missing required field");
  if (!it->is_number()) throw ValidationError(path + "." + key, "expected a number");
  return it->get<double>();
}

void optional_number(const json& obj, const char* key, const std::string& path, double& out) {
  if (obj.contains(key)) out = number_at(obj, key, path);
}

std::vector<double> series_at(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path + "." + key, "missing required field");
  if (!it->is_array()) throw ValidationError(path + "." + key, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < it->size(); ++i) {
    if (!(*it)[i].is_number()) {
      throw ValidationError(path + "." + key + "[" + std::to_string(i) + "]", "expected a number");
    }
    out.push_back((*it)[i].get<double>());
  }
  return out;
}

}  // namespace

Scenario scenario_from_json(const json& doc, const std::string& origin) {
  if (!doc.is_object()) throw ValidationError(origin, "scenario must be an object");
  reject_unknown(doc,
                 {"name", "description", "start_hour", "sampling_h", "t_amb_k", "q_occ_w", "loss",
                  "pump", "bounds", "plant", "initial_on"},
                 origin);
  Scenario s;
  auto name = doc.find("name");
  if (name == doc.end() || !name->is_string()) {
    throw ValidationError(origin + ".name", "expected a string");
  }
  s.name = name->get<std::string>();
  if (auto d = doc.find("description"); d != doc.end()) {
    if (!d->is_string()) throw ValidationError(origin + ".description", "expected a string");
    s.description = d->get<std::string>();
  }
  optional_number(doc, "start_hour", origin, s.start_hour);
  optional_number(doc, "sampling_h", origin, s.sampling_h);
  s.t_amb_k = series_at(doc, "t_amb_k", origin);
  s.q_occ_w = series_at(doc, "q_occ_w", origin);

  const json& loss = object_at(doc, "loss", origin);
  reject_unknown(loss, {"ua_w_per_k"}, origin + ".loss");
  s.plant.loss.ua_w_per_k = number_at(loss, "ua_w_per_k", origin + ".loss");

  const json& pump = object_at(doc, "pump", origin);
  reject_unknown(pump, {"p_nom_w", "m_nom"}, origin + ".pump");
  s.plant.pump.p_nom_w = number_at(pump, "p_nom_w", origin + ".pump");
  s.plant.pump.m_nom = number_at(pump, "m_nom", origin + ".pump");

  const json& bounds = object_at(doc, "bounds", origin);
  reject_unknown(bounds, {"t_out_min_k", "t_out_max_k", "m_s_max"}, origin + ".bounds");
  s.plant.t_out_min_k = number_at(bounds, "t_out_min_k", origin + ".bounds");
  s.plant.t_out_max_k = number_at(bounds, "t_out_max_k", origin + ".bounds");
  s.plant.m_s_max = number_at(bounds, "m_s_max", origin + ".bounds");

  if (doc.contains("plant")) {
    const json& plant = object_at(doc, "plant", origin);
    const std::string p = origin + ".plant";
    reject_unknown(plant,
                   {"cp", "ev_approach_k", "co_approach_k", "dt_chiller_max_k",
                    "dt_secondary_max_k"},
                   p);
    optional_number(plant, "cp", p, s.plant.cp);
    optional_number(plant, "ev_approach_k", p, s.plant.ev_approach_k);
    optional_number(plant, "co_approach_k", p, s.plant.co_approach_k);
    optional_number(plant, "dt_chiller_max_k", p, s.plant.dt_chiller_max_k);
    optional_number(plant, "dt_secondary_max_k", p, s.plant.dt_secondary_max_k);
  }
  if (auto it = doc.find("initial_on"); it != doc.end()) {
    if (!it->is_array()) throw ValidationError(origin + ".initial_on", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_boolean()) {
        throw ValidationError(origin + ".initial_on[" + std::to_string(i) + "]",
                              "expected a boolean");
      }
      s.initial_on.push_back((*it)[i].get<bool>());
    }
  }
  s.validate(origin);
  return s;
}

json scenario_to_json(const Scenario& s) {
  json doc = {
      {"name", s.name},
      {"description", s.description},
      {"start_hour", s.start_hour},
      {"sampling_h", s.sampling_h},
      {"t_amb_k", s.t_amb_k},
      {"q_occ_w", s.q_occ_w},
      {"loss", {{"ua_w_per_k", s.plant.loss.ua_w_per_k}}},
      {"pump", {{"p_nom_w", s.plant.pump.p_nom_w}, {"m_nom", s.plant.pump.m_nom}}},
      {"bounds",
       {{"t_out_min_k", s.plant.t_out_min_k},
        {"t_out_max_k", s.plant.t_out_max_k},
        {"m_s_max", s.plant.m_s_max}}},
      {"plant",
       {{"cp", s.plant.cp},
        {"ev_approach_k", s.plant.ev_approach_k},
        {"co_approach_k", s.plant.co_approach_k},
        {"dt_chiller_max_k", s.plant.dt_chiller_max_k},
        {"dt_secondary_max_k", s.plant.dt_secondary_max_k}}},
  };
  if (!s.initial_on.empty()) {
    json on = json::array();
    for (bool b : s.initial_on) on.push_back(b);
    doc["initial_on"] = std::move(on);
  }
  return doc;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": byte " + std::to_string(e.byte), e.what());
  }
  return scenario_from_json(doc, path.string());
}

Scenario load_scenario(const std::string& path_or_name) {
  const auto& names = fixture_scenario_names();
  const bool is_fixture = std::find(names.begin(), names.end(), path_or_name) != names.end();
  if (is_fixture && !std::filesystem::exists(path_or_name)) {
    return fixture_scenario(path_or_name);
  }
  return load_scenario_file(path_or_name);
}

const std::vector<std::string>& fixture_scenario_names() {
  static const std::vector<std::string> names{"tl1", "tl2", "tl3"};
  return names;
}

namespace {

constexpr double kCelsius = 273.15;
constexpr double kPlantCapacityRt = 950.0;

double bump(double hour, double centre, double width) {
  const double z = (hour - centre) / width;
  return std::exp(-z * z);
}

Scenario base_fixture(std::string name, std::string description) {
  Scenario s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.start_hour = 7.0;
  s.sampling_h = 1.0;
  s.plant.loss.ua_w_per_k = 4000.0;
  s.plant.pump.p_nom_w = 37000.0;
  s.plant.pump.m_nom = 150.0;
  s.plant.t_out_min_k = 278.15;
  s.plant.t_out_max_k = 284.15;
  s.plant.m_s_max = 232.0;
  return s;
}

}  // namespace

Scenario fixture_scenario(const std::string& name) {
  const double capacity = rt_to_watts(kPlantCapacityRt);
  Scenario s;
  if (name == "tl1") {
    s = base_fixture("tl1", "Reconstructed warm working day, steady occupancy, peak near 14:00");
  } else if (name == "tl2") {
    s = base_fixture("tl2", "Reconstructed hot working day, morning and afternoon peaks");
  } else if (name == "tl3") {
    s = base_fixture("tl3", "Reconstructed half-holiday, occupancy mostly before noon");
  } else {
    throw ValidationError("scenario", "unknown fixture '" + name + "'");
  }

  for (int k = 0; k < 12; ++k) {
    const double h = s.start_hour + k;
    double t_c = 0.0;
    double load = 0.0;
    if (name == "tl1") {
      t_c = 28.0 + 8.0 * bump(h, 15.0, 4.0);
      load = 0.50 + 0.30 * bump(h, 14.0, 2.5);
    } else if (name == "tl2") {
      t_c = 30.0 + 8.0 * bump(h, 15.0, 4.0);
      load = 0.40 + 0.40 * bump(h, 10.0, 1.5) + 0.38 * bump(h, 16.0, 1.5);
    } else {
      t_c = 26.0 + 7.0 * bump(h, 14.0, 4.0);
      load = 0.08 + 0.62 * bump(h, 9.5, 2.0);
    }
    s.t_amb_k.push_back(kCelsius + t_c);
    s.q_occ_w.push_back(load * capacity);
  }
  return s;
}

}  // namespace ocs
