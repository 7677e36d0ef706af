#include "ocs/chiller_catalog.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ocs/errors.hpp"

namespace ocs {

using nlohmann::json;

double rt_to_watts(double capacity_rt) {
  if (!(capacity_rt >= 0.0)) {
    throw DomainError("rt_to_watts: capacity must be non-negative");
  }
  return capacity_rt * kWattsPerRefrigerationTon;
}

CopTable::CopTable(std::vector<double> ev_axis, std::vector<double> co_axis,
                   std::vector<double> plr_axis, std::vector<double> values)
    : ev_axis_(std::move(ev_axis)),
      co_axis_(std::move(co_axis)),
      plr_axis_(std::move(plr_axis)),
      values_(std::move(values)) {}

namespace {

void check_axis(const std::vector<double>& axis, const std::string& path) {
  if (axis.size() < 2) {
    throw ValidationError(path, "axis needs at least two points");
  }
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!std::isfinite(axis[i])) throw ValidationError(path, "non-finite value");
    if (i > 0 && !(axis[i] > axis[i - 1])) {
      throw ValidationError(path, "axis must be strictly increasing");
    }
  }
}

struct Bracket {
  std::size_t lo;
  double frac;
};

// Locates x in the axis after clamping it to [front, back].
Bracket bracket(const std::vector<double>& axis, double x) {
  x = std::clamp(x, axis.front(), axis.back());
  auto it = std::upper_bound(axis.begin(), axis.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - axis.begin());
  hi = std::clamp<std::size_t>(hi, 1, axis.size() - 1);
  const std::size_t lo = hi - 1;
  const double frac = (x - axis[lo]) / (axis[hi] - axis[lo]);
  return {lo, frac};
}

}  // namespace

void CopTable::validate(const std::string& path) const {
  check_axis(ev_axis_, path + ".ev_axis_k");
  check_axis(co_axis_, path + ".co_axis_k");
  check_axis(plr_axis_, path + ".plr_axis");
  if (!(plr_axis_.front() > 0.0) || plr_axis_.back() > 1.0) {
    throw ValidationError(path + ".plr_axis", "part-load ratios must lie in (0, 1]");
  }
  const std::size_t expected = ev_axis_.size() * co_axis_.size() * plr_axis_.size();
  if (values_.size() != expected) {
    throw ValidationError(path + ".values",
                          "expected " + std::to_string(expected) + " values, got " +
                              std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw ValidationError(path + ".values[" + std::to_string(i) + "]",
                            "COP values must be finite and positive");
    }
  }
}

double CopTable::lookup(double t_ev, double t_co, double plr) const {
  if (!(plr > 0.0)) {
    throw DomainError("cop lookup: part-load ratio must be positive");
  }
  const Bracket e = bracket(ev_axis_, t_ev);
  const Bracket c = bracket(co_axis_, t_co);
  const Bracket p = bracket(plr_axis_, plr);

  double result = 0.0;
  for (int de = 0; de < 2; ++de) {
    const double we = de ? e.frac : 1.0 - e.frac;
    if (we == 0.0) continue;
    for (int dc = 0; dc < 2; ++dc) {
      const double wc = dc ? c.frac : 1.0 - c.frac;
      if (wc == 0.0) continue;
      for (int dp = 0; dp < 2; ++dp) {
        const double wp = dp ? p.frac : 1.0 - p.frac;
        if (wp == 0.0) continue;
        result += we * wc * wp * at(e.lo + de, c.lo + dc, p.lo + dp);
      }
    }
  }
  return result;
}

void ChillerSpec::validate(const std::string& path) const {
  if (!(nominal_capacity_w > 0.0) || !std::isfinite(nominal_capacity_w)) {
    throw ValidationError(path + ".nominal_capacity_w", "must be positive");
  }
  if (!(m_min > 0.0)) throw ValidationError(path + ".m_min", "must be positive");
  if (!(m_max > m_min) || !std::isfinite(m_max)) {
    throw ValidationError(path + ".m_max", "must exceed m_min");
  }
  if (!(tau_h > 0.0) || !std::isfinite(tau_h)) {
    throw ValidationError(path + ".tau_h", "must be positive");
  }
  if (!(startup_idle_power_w >= 0.0)) {
    throw ValidationError(path + ".startup_idle_power_w", "must be non-negative");
  }
  cop.validate(path + ".cop_table");
}

double cop_lookup(const ChillerSpec& spec, double t_ev, double t_co, double plr) {
  return spec.cop.lookup(t_ev, t_co, plr);
}

namespace {

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(path + "." + key, "missing required field");
  }
  return *it;
}

double number(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number()) throw ValidationError(path + "." + key, "expected a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_array()) throw ValidationError(path + "." + key, "expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw ValidationError(path + "." + key + "[" + std::to_string(i) + "]",
                            "expected a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& path) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(known.begin(), known.end(),
                     [&](const char* k) { return key == k; })) {
      throw ValidationError(path + "." + key, "unknown field");
    }
  }
}

}  // namespace

std::vector<ChillerSpec> load_catalog(const json& doc, const std::string& origin) {
  if (!doc.is_object()) throw ValidationError(origin, "catalog must be an object");
  reject_unknown(doc, {"chillers", "note"}, origin);
  const json& list = require(doc, "chillers", origin);
  if (!list.is_array() || list.empty()) {
    throw ValidationError(origin + ".chillers", "expected a non-empty array");
  }

  std::vector<ChillerSpec> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = origin + ".chillers[" + std::to_string(i) + "]";
    const json& e = list[i];
    if (!e.is_object()) throw ValidationError(path, "expected an object");
    reject_unknown(e,
                   {"id", "model", "nominal_capacity_w", "capacity_rt", "m_min", "m_max",
                    "tau_h", "startup_idle_power_w", "cop_table"},
                   path);

    ChillerSpec s;
    const json& id = require(e, "id", path);
    if (!id.is_number_integer()) throw ValidationError(path + ".id", "expected an integer");
    s.id = id.get<int>();
    if (auto it = e.find("model"); it != e.end()) {
      if (!it->is_string()) throw ValidationError(path + ".model", "expected a string");
      s.model = it->get<std::string>();
    }

    const bool has_w = e.contains("nominal_capacity_w");
    const bool has_rt = e.contains("capacity_rt");
    if (has_w == has_rt) {
      throw ValidationError(path + ".nominal_capacity_w",
                            "give exactly one of nominal_capacity_w or capacity_rt");
    }
    if (has_w) {
      s.nominal_capacity_w = number(e, "nominal_capacity_w", path);
    } else {
      const double rt = number(e, "capacity_rt", path);
      if (rt < 0.0) throw ValidationError(path + ".capacity_rt", "must be non-negative");
      s.nominal_capacity_w = rt_to_watts(rt);
    }
    s.m_min = number(e, "m_min", path);
    s.m_max = number(e, "m_max", path);
    s.tau_h = number(e, "tau_h", path);
    if (e.contains("startup_idle_power_w")) {
      s.startup_idle_power_w = number(e, "startup_idle_power_w", path);
    }

    const std::string tpath = path + ".cop_table";
    const json& t = require(e, "cop_table", path);
    if (!t.is_object()) throw ValidationError(tpath, "expected an object");
    reject_unknown(t, {"ev_axis_k", "co_axis_k", "plr_axis", "values"}, tpath);
    s.cop = CopTable(numbers(t, "ev_axis_k", tpath), numbers(t, "co_axis_k", tpath),
                     numbers(t, "plr_axis", tpath), numbers(t, "values", tpath));
    s.validate(path);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ChillerSpec> load_catalog_text(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": byte " + std::to_string(e.byte), e.what());
  }
  return load_catalog(doc, origin);
}

std::vector<ChillerSpec> load_catalog_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_catalog_text(buf.str(), path.string());
}

json catalog_to_json(const std::vector<ChillerSpec>& chillers) {
  json list = json::array();
  for (const auto& s : chillers) {
    list.push_back({
        {"id", s.id},
        {"model", s.model},
        {"nominal_capacity_w", s.nominal_capacity_w},
        {"m_min", s.m_min},
        {"m_max", s.m_max},
        {"tau_h", s.tau_h},
        {"startup_idle_power_w", s.startup_idle_power_w},
        {"cop_table",
         {{"ev_axis_k", s.cop.ev_axis()},
          {"co_axis_k", s.cop.co_axis()},
          {"plr_axis", s.cop.plr_axis()},
          {"values", s.cop.values()}}},
    });
  }
  return json{{"chillers", std::move(list)}};
}

namespace {

// Part-load shape relative to full load: efficiency peaks around PLR 0.6 and
// collapses at low load.
constexpr std::array<double, 10> kPlrAxis{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
constexpr std::array<double, 10> kPlrShape{0.55, 0.85, 1.05, 1.18, 1.25,
                                           1.27, 1.25, 1.18, 1.09, 1.0};

CopTable fixture_table(double full_load_cop, double part_load_bump) {
  std::vector<double> ev{273.15, 275.15, 277.15, 279.15, 281.15, 283.15};
  std::vector<double> co{293.15, 298.15, 303.15, 308.15, 313.15, 318.15, 323.15, 328.15};
  std::vector<double> plr(kPlrAxis.begin(), kPlrAxis.end());
  std::vector<double> values;
  values.reserve(ev.size() * co.size() * plr.size());
  for (double te : ev) {
    for (double tc : co) {
      // +3 %/K warmer evaporator, -2.5 %/K warmer condenser.
      const double lift =
          1.0 + 0.03 * (te - kFixtureNominalEvK) - 0.025 * (tc - kFixtureNominalCoK);
      for (double shape : kPlrShape) {
        values.push_back(full_load_cop * lift * (1.0 + (shape - 1.0) * part_load_bump));
      }
    }
  }
  return CopTable(std::move(ev), std::move(co), std::move(plr), std::move(values));
}

}  // namespace

std::vector<ChillerSpec> fixture_catalog() {
  // IPLV 13.7 for the two larger units, 12.8 for the smallest: the smallest
  // unit gets a flatter part-load curve.
  std::vector<ChillerSpec> out;
  out.push_back({1, "400STD", rt_to_watts(400), 29.0, 105.0, fixture_table(2.8, 1.0), 0.2, 0.0});
  out.push_back({2, "300STD", rt_to_watts(300), 20.0, 68.0, fixture_table(2.8, 1.0), 0.2, 0.0});
  out.push_back({3, "250STD", rt_to_watts(250), 16.0, 59.0, fixture_table(2.8, 0.9), 0.2, 0.0});
  return out;
}

}  // namespace ocs
