#include "ocs/report_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ocs/errors.hpp"

namespace ocs {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv(const SolveReport& report, const OcsProblem& problem) {
  const auto& sc = problem.scenario();
  const int n = problem.layout().chillers();
  std::ostringstream out;
  out << "step,hour";
  for (int i = 1; i <= n; ++i) {
    out << ",m_" << i << ",t_out_" << i << ",plr_" << i << ",p_" << i;
  }
  out << ",m_s,t_s_in,t_s_out,p_s,p_e,p_total,t_amb,q_occ,q_loss\n";

  const auto& ev = report.eval;
  for (std::size_t t = 0; t < ev.steps.size(); ++t) {
    const auto& d = ev.decisions[t];
    const auto& s = ev.steps[t];
    out << t + 1 << ',' << format_double(sc.start_hour + double(t) * sc.sampling_h);
    for (int i = 0; i < n; ++i) {
      out << ',' << format_double(d.m[i]) << ',' << format_double(d.t_out[i]) << ','
          << format_double(s.plr[i]) << ',' << format_double(s.p[i]);
    }
    out << ',' << format_double(d.m_s) << ',' << format_double(s.t_s_in) << ','
        << format_double(s.t_s_out) << ',' << format_double(s.p_s) << ','
        << format_double(ev.p_e[t]) << ',' << format_double(ev.p_total[t]) << ','
        << format_double(sc.t_amb_k[t]) << ',' << format_double(sc.q_occ_w[t]) << ','
        << format_double(s.q_loss) << '\n';
  }
  return out.str();
}

std::vector<StepDecision> parse_trajectory_csv(const std::string& text, int chillers) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trajectory", "empty table");
  const std::size_t columns = 2 + 4 * std::size_t(chillers) + 9;

  std::vector<StepDecision> out;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> v;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = std::min(line.find(',', pos), line.size());
      double value = 0.0;
      const auto res = std::from_chars(line.data() + pos, line.data() + comma, value);
      if (res.ec != std::errc() || res.ptr != line.data() + comma) {
        throw ParseError("trajectory: row " + std::to_string(row), "bad number");
      }
      v.push_back(value);
      pos = comma + 1;
    }
    if (v.size() != columns) {
      throw ParseError("trajectory: row " + std::to_string(row), "wrong column count");
    }
    StepDecision d;
    for (int i = 0; i < chillers; ++i) {
      d.m.push_back(v[2 + 4 * i]);
      d.t_out.push_back(v[3 + 4 * i]);
    }
    d.m_s = v[2 + 4 * chillers];
    out.push_back(std::move(d));
  }
  return out;
}

std::string history_csv(const SolveReport& report) {
  std::ostringstream out;
  out << "j,objective,best_objective,step_norm,feasible,retries\n";
  for (const auto& h : report.history) {
    out << h.j << ',' << format_double(h.objective) << ',' << format_double(h.best_objective)
        << ',' << format_double(h.step_norm) << ',' << (h.feasible ? 1 : 0) << ',' << h.retries
        << '\n';
  }
  return out.str();
}

json summary_json(const SolveReport& report, const DispatchConfig& config) {
  json violations = json::array();
  for (std::size_t t = 0; t < report.eval.steps.size(); ++t) {
    for (const auto& v : report.eval.steps[t].violations) {
      violations.push_back({{"step", t + 1},
                            {"kind", to_string(v.kind)},
                            {"chiller", v.chiller < 0 ? json(nullptr) : json(v.chiller + 1)},
                            {"amount", v.amount}});
    }
  }
  json doc = {
      {"method", to_string(report.method)},
      {"scenario", report.scenario},
      {"energy_kwh", report.energy_kwh},
      {"static_energy_kwh", report.eval.static_energy_kwh},
      {"nc", report.nc},
      {"objective", report.objective},
      {"feasible", report.eval.feasible},
      {"violations", std::move(violations)},
      {"aet_s", report.aet_s},
  };
  if (report.method != MethodId::Proportional) {
    doc["seed"] = report.seed;
    doc["iterations"] = report.history.size();
    doc["evaluations"] = report.evaluations;
    doc["stop_reason"] = report.stop ? to_string(*report.stop) : "none";
    doc["config"] = dispatch_config_to_json(config);
  }
  if (!report.diagnostics.empty()) doc["diagnostics"] = report.diagnostics;
  return doc;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw std::runtime_error("cannot create " + path.parent_path().string() + ": " +
                               ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

EmittedFiles emit_report(const SolveReport& report, const OcsProblem& problem,
                         const DispatchConfig& config, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

  const std::string prefix = to_string(report.method);
  EmittedFiles files{out_dir / (prefix + "_trajectory.csv"), out_dir / (prefix + "_summary.json"),
                     out_dir / (prefix + "_history.csv")};
  write_text_file(files.trajectory, trajectory_csv(report, problem));
  write_text_file(files.summary, summary_json(report, config).dump(2) + "\n");
  write_text_file(files.history, history_csv(report));
  return files;
}

}  // namespace ocs
