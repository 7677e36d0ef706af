#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ocs/ocs_problem.hpp"
#include "ocs/spsa.hpp"

namespace ocs {

enum class MethodId { M1, M2, Proportional };

const char* to_string(MethodId id);
/// Accepts "m1", "m2", "proportional" (case-insensitive).
std::optional<MethodId> parse_method(const std::string& text);

/// SPSA settings plus the map between plant units and the solver's search
/// space. A search coordinate spans [0, resolution] for its kind of variable;
/// the lowest off_band of a chiller-flow coordinate means "off". The
/// objective is handed to SPSA as objective_scale * J / E(x0).
struct DispatchConfig {
  SpsaConfig spsa;
  double flow_resolution = 40.0;
  double setpoint_resolution = 5.0;
  double secondary_resolution = 10.0;
  double objective_scale = 1000.0;
  double off_band = 0.2;

  void validate() const;
  bool operator==(const DispatchConfig&) const = default;
};

DispatchConfig dispatch_config_from_json(const nlohmann::json& doc,
                                         const std::string& origin = "config");
nlohmann::json dispatch_config_to_json(const DispatchConfig& config);
DispatchConfig load_dispatch_config(const std::string& path);

struct SolveReport {
  MethodId method = MethodId::Proportional;
  std::string scenario;
  std::vector<double> x;  // projected decision vector
  TrajectoryEvaluation eval;
  double energy_kwh = 0.0;  // billed with P_e for every method
  int nc = 0;
  double aet_s = 0.0;
  double objective = 0.0;  // the method's own penalized objective
  std::uint64_t seed = 0;
  std::vector<IterationRecord> history;
  std::optional<StopReason> stop;
  long evaluations = 0;
  std::string diagnostics;

  bool ok() const { return !stop || *stop != StopReason::NoFeasiblePoint; }
};

/// Dynamic sequencing: SPSA on the full objective, transients included.
SolveReport run_m1(const OcsProblem& problem, const DispatchConfig& config);
/// Static sequencing: same pipeline with P_e = 0 in the objective. The
/// reported energy still includes P_e.
SolveReport run_m2(const OcsProblem& problem, const DispatchConfig& config);
/// Capacity-proportional loading with every unit on; no optimization.
SolveReport run_proportional(const OcsProblem& problem);

SolveReport run_method(MethodId method, const OcsProblem& problem, const DispatchConfig& config);

/// SPSA from an explicit starting point (projected first).
SolveReport run_spsa(MethodId method, const OcsProblem& problem, const DispatchConfig& config,
                     std::span<const double> x0);

/// Runs `seeds` independent solves and keeps the one with the lowest own
/// objective.
SolveReport best_of_seeds(MethodId method, const OcsProblem& problem, DispatchConfig config,
                          std::span<const std::uint64_t> seeds);

struct ComparisonRow {
  MethodId method;
  double energy_kwh;
  int nc;
  double aet_s;
  double delta_energy_kwh;  // relative to the first row
  int delta_nc;
};

struct ComparisonTable {
  std::string scenario;
  std::vector<ComparisonRow> rows;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Throws ContractError for an empty list or reports from different scenarios.
ComparisonTable compare(std::span<const SolveReport> reports);

struct RestartRun {
  std::uint64_t seed;
  double objective;
  double energy_kwh;
  int nc;
};

struct RestartSummary {
  MethodId method;
  std::string scenario;
  std::vector<RestartRun> runs;
  double min_objective = 0.0;
  double median_objective = 0.0;
  double max_objective = 0.0;

  nlohmann::json to_json() const;
};

/// Repeated solves with seeds base_seed, base_seed + 1, ... Every run after
/// the first also starts from a seeded jitter of the proportional guess
/// (`jitter` in normalized units) to sample different basins.
RestartSummary run_restarts(MethodId method, const OcsProblem& problem,
                            const DispatchConfig& config, int n, std::uint64_t base_seed,
                            double jitter = 0.05);

}  // namespace ocs
