#include "ocs/dispatch.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ocs/errors.hpp"

namespace ocs {

using nlohmann::json;

const char* to_string(MethodId id) {
  switch (id) {
    case MethodId::M1: return "m1";
    case MethodId::M2: return "m2";
    case MethodId::Proportional: return "proportional";
  }
  return "unknown";
}

std::optional<MethodId> parse_method(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "m1") return MethodId::M1;
  if (t == "m2") return MethodId::M2;
  if (t == "proportional") return MethodId::Proportional;
  return std::nullopt;
}

void DispatchConfig::validate() const {
  spsa.validate("config.spsa");
  if (!(flow_resolution > 0.0)) throw ValidationError("config.flow_resolution", "must be > 0");
  if (!(setpoint_resolution > 0.0)) {
    throw ValidationError("config.setpoint_resolution", "must be > 0");
  }
  if (!(secondary_resolution > 0.0)) {
    throw ValidationError("config.secondary_resolution", "must be > 0");
  }
  if (!(objective_scale > 0.0)) throw ValidationError("config.objective_scale", "must be > 0");
  if (!(off_band > 0.0 && off_band < 1.0)) {
    throw ValidationError("config.off_band", "must lie in (0, 1)");
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

template <typename T>
void read(const json& obj, const char* key, const std::string& path, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer()) throw ValidationError(path + "." + key, "expected an integer");
  } else {
    if (!it->is_number()) throw ValidationError(path + "." + key, "expected a number");
  }
  out = it->get<T>();
}

}  // namespace

DispatchConfig dispatch_config_from_json(const json& doc, const std::string& origin) {
  if (!doc.is_object()) throw ValidationError(origin, "config must be an object");
  reject_unknown(doc,
                 {"spsa", "flow_resolution", "setpoint_resolution", "secondary_resolution",
                  "objective_scale", "off_band"},
                 origin);
  DispatchConfig c;
  if (auto it = doc.find("spsa"); it != doc.end()) {
    const std::string p = origin + ".spsa";
    if (!it->is_object()) throw ValidationError(p, "expected an object");
    reject_unknown(*it,
                   {"a", "A", "alpha", "c", "gamma", "j_min", "j_max", "beta", "penalty_weight",
                    "rng_seed", "max_retries", "blocking"},
                   p);
    read(*it, "a", p, c.spsa.a);
    read(*it, "A", p, c.spsa.A);
    read(*it, "alpha", p, c.spsa.alpha);
    read(*it, "c", p, c.spsa.c);
    read(*it, "gamma", p, c.spsa.gamma);
    read(*it, "j_min", p, c.spsa.j_min);
    read(*it, "j_max", p, c.spsa.j_max);
    read(*it, "beta", p, c.spsa.beta);
    read(*it, "penalty_weight", p, c.spsa.penalty_weight);
    read(*it, "rng_seed", p, c.spsa.rng_seed);
    read(*it, "max_retries", p, c.spsa.max_retries);
    read(*it, "blocking", p, c.spsa.blocking);
  }
  read(doc, "flow_resolution", origin, c.flow_resolution);
  read(doc, "setpoint_resolution", origin, c.setpoint_resolution);
  read(doc, "secondary_resolution", origin, c.secondary_resolution);
  read(doc, "objective_scale", origin, c.objective_scale);
  read(doc, "off_band", origin, c.off_band);
  c.validate();
  return c;
}

json dispatch_config_to_json(const DispatchConfig& c) {
  return {
      {"spsa",
       {{"a", c.spsa.a},
        {"A", c.spsa.A},
        {"alpha", c.spsa.alpha},
        {"c", c.spsa.c},
        {"gamma", c.spsa.gamma},
        {"j_min", c.spsa.j_min},
        {"j_max", c.spsa.j_max},
        {"beta", c.spsa.beta},
        {"penalty_weight", c.spsa.penalty_weight},
        {"rng_seed", c.spsa.rng_seed},
        {"max_retries", c.spsa.max_retries},
        {"blocking", c.spsa.blocking}}},
      {"flow_resolution", c.flow_resolution},
      {"setpoint_resolution", c.setpoint_resolution},
      {"secondary_resolution", c.secondary_resolution},
      {"objective_scale", c.objective_scale},
      {"off_band", c.off_band},
  };
}

DispatchConfig load_dispatch_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": byte " + std::to_string(e.byte), e.what());
  }
  return dispatch_config_from_json(doc, path);
}

namespace {

void fill_from_evaluation(SolveReport& r, const OcsProblem& problem, std::vector<double> x,
                          double penalty_weight) {
  r.scenario = problem.scenario().name;
  r.eval = problem.evaluate(x);
  r.x = std::move(x);
  r.energy_kwh = r.eval.energy_kwh;
  r.nc = r.eval.trace.nc;
  r.objective = OcsProblem::penalized_objective(r.eval, r.method != MethodId::M2, penalty_weight);
}

// Search coordinates. A chiller flow is off in the lower off_band of its
// range and runs linearly from m_min to m_max above it; m_s is searched as a
// fraction of min(m_p, m_s_max); setpoints linearly. Each kind has its own
// resolution (the length of the full range in search units).
struct SearchSpace {
  const OcsProblem& problem;
  const DispatchConfig& config;

  double resolution(std::size_t k) const {
    const int steps = problem.layout().steps();
    if (k < std::size_t(steps)) return config.secondary_resolution;
    return ((k / steps) % 2 == 1) ? config.flow_resolution : config.setpoint_resolution;
  }

  std::vector<double> to_search(std::span<const double> x) const {
    const auto& layout = problem.layout();
    const auto& chillers = problem.chillers();
    const auto& plant = problem.scenario().plant;
    const double band = config.off_band;
    std::vector<double> s(x.size());
    for (int t = 0; t < layout.steps(); ++t) {
      double m_p = 0.0;
      for (int i = 0; i < layout.chillers(); ++i) {
        const auto& c = chillers[i];
        const double m = x[layout.flow(i, t)];
        m_p += m;
        s[layout.flow(i, t)] =
            m <= 0.0 ? 0.5 * band
                     : band + (1.0 - band) * std::clamp((m - c.m_min) / (c.m_max - c.m_min), 0.0, 1.0);
        s[layout.setpoint(i, t)] = std::clamp(
            (x[layout.setpoint(i, t)] - plant.t_out_min_k) / (plant.t_out_max_k - plant.t_out_min_k),
            0.0, 1.0);
      }
      const double cap = std::min(m_p, plant.m_s_max);
      s[layout.secondary_flow(t)] =
          cap > 0.0 ? std::clamp(x[layout.secondary_flow(t)] / cap, 0.0, 1.0) : 1.0;
    }
    for (std::size_t k = 0; k < s.size(); ++k) s[k] *= resolution(k);
    return s;
  }

  std::vector<double> to_plant(std::span<const double> u) const {
    const auto& layout = problem.layout();
    const auto& chillers = problem.chillers();
    const auto& plant = problem.scenario().plant;
    const double band = config.off_band;
    std::vector<double> x(u.size());
    const auto unit = [&](std::size_t k) { return std::clamp(u[k] / resolution(k), 0.0, 1.0); };
    for (int t = 0; t < layout.steps(); ++t) {
      double m_p = 0.0;
      for (int i = 0; i < layout.chillers(); ++i) {
        const auto& c = chillers[i];
        const double s = unit(layout.flow(i, t));
        const double m = s < band ? 0.0 : c.m_min + (s - band) / (1.0 - band) * (c.m_max - c.m_min);
        x[layout.flow(i, t)] = m;
        m_p += m;
        x[layout.setpoint(i, t)] =
            plant.t_out_min_k + unit(layout.setpoint(i, t)) * (plant.t_out_max_k - plant.t_out_min_k);
      }
      x[layout.secondary_flow(t)] = unit(layout.secondary_flow(t)) * std::min(m_p, plant.m_s_max);
    }
    project(x, problem.bounds());
    return x;
  }

  void clip(std::span<double> u) const {
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = std::clamp(u[k], 0.0, resolution(k));
  }
};

}  // namespace

SolveReport run_spsa(MethodId method, const OcsProblem& problem, const DispatchConfig& config,
                     std::span<const double> x0_plant) {
  if (method == MethodId::Proportional) {
    throw ContractError("run_spsa: the proportional baseline is not optimized");
  }
  config.validate();
  const bool with_pe = method == MethodId::M1;
  const double weight = config.spsa.penalty_weight;
  const SearchSpace space{problem, config};

  std::vector<double> x0(x0_plant.begin(), x0_plant.end());
  project(x0, problem.bounds());
  // Both methods share the billed reference so their step sizes match.
  double reference = problem.penalized_objective(x0, true, weight);
  if (!std::isfinite(reference) || reference <= 0.0) reference = 1.0;
  const double scale = config.objective_scale / reference;

  SpsaProblem sp;
  sp.objective = [&](std::span<const double> u) {
    return scale * problem.penalized_objective(space.to_plant(u), with_pe, weight);
  };
  sp.project = [&](std::span<double> u) { space.clip(u); };
  sp.feasible = [&](std::span<const double> u) {
    return problem.evaluate(space.to_plant(u)).feasible;
  };

  const auto started = std::chrono::steady_clock::now();
  const SpsaResult res = spsa_solve(space.to_search(x0), config.spsa, sp);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  SolveReport r;
  r.method = method;
  r.seed = config.spsa.rng_seed;
  r.history = res.history;
  for (auto& h : r.history) {
    h.objective /= scale;
    h.best_objective /= scale;
  }
  r.stop = res.reason;
  r.evaluations = res.evaluations;
  r.diagnostics = res.diagnostics;
  fill_from_evaluation(r, problem, space.to_plant(res.x), weight);
  r.aet_s = elapsed;
  return r;
}

SolveReport run_m1(const OcsProblem& problem, const DispatchConfig& config) {
  return run_spsa(MethodId::M1, problem, config, problem.proportional_decision());
}

SolveReport run_m2(const OcsProblem& problem, const DispatchConfig& config) {
  return run_spsa(MethodId::M2, problem, config, problem.proportional_decision());
}

SolveReport run_proportional(const OcsProblem& problem) {
  const auto started = std::chrono::steady_clock::now();
  SolveReport r;
  r.method = MethodId::Proportional;
  auto x = problem.proportional_decision();
  project(x, problem.bounds());
  fill_from_evaluation(r, problem, std::move(x), SpsaConfig{}.penalty_weight);
  r.aet_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (!r.eval.feasible) r.diagnostics = "proportional loading violates plant limits";
  return r;
}

SolveReport run_method(MethodId method, const OcsProblem& problem, const DispatchConfig& config) {
  switch (method) {
    case MethodId::M1: return run_m1(problem, config);
    case MethodId::M2: return run_m2(problem, config);
    case MethodId::Proportional: return run_proportional(problem);
  }
  throw ContractError("run_method: unknown method");
}

SolveReport best_of_seeds(MethodId method, const OcsProblem& problem, DispatchConfig config,
                          std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw ContractError("best_of_seeds: no seeds");
  std::optional<SolveReport> best;
  double total_time = 0.0;
  for (const auto seed : seeds) {
    config.spsa.rng_seed = seed;
    SolveReport r = run_method(method, problem, config);
    total_time += r.aet_s;
    const bool better = !best || (r.ok() && !best->ok()) ||
                        (r.ok() == best->ok() && r.objective < best->objective);
    if (better) best = std::move(r);
  }
  best->aet_s = total_time / double(seeds.size());
  return *best;
}

ComparisonTable compare(std::span<const SolveReport> reports) {
  if (reports.empty()) throw ContractError("compare: no reports");
  ComparisonTable table;
  table.scenario = reports.front().scenario;
  const auto& ref = reports.front();
  for (const auto& r : reports) {
    if (r.scenario != table.scenario) {
      throw ContractError("compare: reports come from different scenarios");
    }
    table.rows.push_back({r.method, r.energy_kwh, r.nc, r.aet_s, r.energy_kwh - ref.energy_kwh,
                          r.nc - ref.nc});
  }
  return table;
}

json ComparisonTable::to_json() const {
  json rows_json = json::array();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    json row = {{"method", to_string(r.method)},
                {"energy_kwh", r.energy_kwh},
                {"nc", r.nc},
                {"aet_s", r.aet_s}};
    if (k > 0) {
      row["delta_energy_kwh"] = r.delta_energy_kwh;
      row["delta_nc"] = r.delta_nc;
    }
    rows_json.push_back(std::move(row));
  }
  return {{"scenario", scenario}, {"reference", to_string(rows.front().method)},
          {"rows", std::move(rows_json)}};
}

std::string ComparisonTable::to_text() const {
  std::ostringstream out;
  out << "scenario " << scenario << "\n";
  out << std::left << std::setw(14) << "method" << std::right << std::setw(12) << "E [kWh]"
      << std::setw(6) << "Nc" << std::setw(10) << "AET [s]" << std::setw(12) << "dE [kWh]"
      << std::setw(6) << "dNc" << "\n";
  out << std::fixed;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    out << std::left << std::setw(14) << to_string(r.method) << std::right << std::setw(12)
        << std::setprecision(1) << r.energy_kwh << std::setw(6) << r.nc << std::setw(10)
        << std::setprecision(3) << r.aet_s;
    if (k > 0) {
      out << std::setw(12) << std::setprecision(1) << r.delta_energy_kwh << std::setw(6)
          << std::showpos << r.delta_nc << std::noshowpos;
    }
    out << "\n";
  }
  return out.str();
}

json RestartSummary::to_json() const {
  json list = json::array();
  for (const auto& r : runs) {
    list.push_back({{"seed", r.seed},
                    {"objective", r.objective},
                    {"energy_kwh", r.energy_kwh},
                    {"nc", r.nc}});
  }
  return {{"method", to_string(method)},
          {"scenario", scenario},
          {"restarts", runs.size()},
          {"min_objective", min_objective},
          {"median_objective", median_objective},
          {"max_objective", max_objective},
          {"runs", std::move(list)}};
}

RestartSummary run_restarts(MethodId method, const OcsProblem& problem,
                            const DispatchConfig& config, int n, std::uint64_t base_seed,
                            double jitter) {
  if (n < 1) throw ContractError("run_restarts: need at least one restart");
  if (method == MethodId::Proportional) {
    throw ContractError("run_restarts: the proportional baseline is deterministic");
  }
  RestartSummary summary;
  summary.method = method;
  summary.scenario = problem.scenario().name;
  const auto base = problem.proportional_decision();
  const auto& b = problem.bounds();
  for (int k = 0; k < n; ++k) {
    DispatchConfig cfg = config;
    cfg.spsa.rng_seed = base_seed + std::uint64_t(k);
    auto x0 = base;
    if (k > 0 && jitter > 0.0) {
      std::mt19937_64 eng(cfg.spsa.rng_seed ^ 0x9e3779b97f4a7c15ULL);
      for (std::size_t i = 0; i < x0.size(); ++i) {
        const double u = double(eng() >> 11) * 0x1.0p-53;  // [0, 1)
        x0[i] += (2.0 * u - 1.0) * jitter * b.scale(i);
      }
    }
    const SolveReport r = run_spsa(method, problem, cfg, x0);
    summary.runs.push_back({cfg.spsa.rng_seed, r.objective, r.energy_kwh, r.nc});
  }
  std::vector<double> obj;
  for (const auto& r : summary.runs) obj.push_back(r.objective);
  std::sort(obj.begin(), obj.end());
  summary.min_objective = obj.front();
  summary.max_objective = obj.back();
  const std::size_t m = obj.size() / 2;
  summary.median_objective = obj.size() % 2 ? obj[m] : 0.5 * (obj[m - 1] + obj[m]);
  return summary;
}

}  // namespace ocs
