#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ocs/dispatch.hpp"

namespace ocs {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Per-step table. Columns:
///   step, hour, then for each chiller i: m_i, t_out_i, plr_i, p_i,
///   then m_s, t_s_in, t_s_out, p_s, p_e, p_total, t_amb, q_occ, q_loss.
std::string trajectory_csv(const SolveReport& report, const OcsProblem& problem);

/// Decisions recovered from a trajectory table, one entry per step.
std::vector<StepDecision> parse_trajectory_csv(const std::string& text, int chillers);

/// Columns: j, objective, best_objective, step_norm, feasible, retries.
std::string history_csv(const SolveReport& report);

nlohmann::json summary_json(const SolveReport& report, const DispatchConfig& config);

struct EmittedFiles {
  std::filesystem::path trajectory;
  std::filesystem::path summary;
  std::filesystem::path history;
};

/// Writes <method>_trajectory.csv, <method>_summary.json and
/// <method>_history.csv into out_dir (created if missing). I/O failures throw
/// std::runtime_error naming the path.
EmittedFiles emit_report(const SolveReport& report, const OcsProblem& problem,
                         const DispatchConfig& config, const std::filesystem::path& out_dir);

/// Creates missing parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ocs
