#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ocs/chiller_catalog.hpp"
#include "ocs/dispatch.hpp"
#include "ocs/errors.hpp"
#include "ocs/report_io.hpp"
#include "ocs/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolver = 1;
constexpr int kExitUsage = 2;

struct Inputs {
  std::string scenario = "tl1";
  std::string catalog;
  std::string config;
  std::uint64_t seed = 1;
};

std::vector<ocs::ChillerSpec> catalog_from(const std::string& arg) {
  std::string path = arg;
  if (path.empty()) {
    if (const char* env = std::getenv("OCS_CATALOG")) path = env;
  }
  if (path.empty() || path == "fixture") return ocs::fixture_catalog();
  return ocs::load_catalog_file(path);
}

ocs::DispatchConfig config_from(const Inputs& in) {
  ocs::DispatchConfig cfg = in.config.empty() ? ocs::DispatchConfig{}
                                              : ocs::load_dispatch_config(in.config);
  cfg.spsa.rng_seed = in.seed;
  cfg.validate();
  return cfg;
}

ocs::OcsProblem problem_from(const Inputs& in) {
  auto chillers = catalog_from(in.catalog);
  auto scenario = ocs::load_scenario(in.scenario);
  scenario.validate_against(chillers);
  return ocs::OcsProblem(std::move(scenario), std::move(chillers));
}

void add_inputs(CLI::App* cmd, Inputs& in, bool with_seed) {
  cmd->add_option("--scenario", in.scenario, "Scenario file or fixture name (tl1, tl2, tl3)")
      ->capture_default_str();
  cmd->add_option("--catalog", in.catalog,
                  "Chiller catalog file; defaults to $OCS_CATALOG, else the built-in fixture");
  cmd->add_option("--config", in.config, "Solver configuration file");
  if (with_seed) cmd->add_option("--seed", in.seed, "RNG seed")->capture_default_str();
}

void print_report(const ocs::SolveReport& r) {
  std::cout << ocs::to_string(r.method) << " scenario=" << r.scenario
            << " E_kwh=" << ocs::format_double(r.energy_kwh) << " Nc=" << r.nc
            << " feasible=" << (r.eval.feasible ? "yes" : "no")
            << " AET_s=" << ocs::format_double(r.aet_s) << "\n";
}

int solve(const Inputs& in, const std::string& method_name, const std::string& out) {
  const auto method = ocs::parse_method(method_name);
  if (!method) throw CLI::ValidationError("--method", "expected m1, m2 or proportional");
  const auto problem = problem_from(in);
  const auto cfg = config_from(in);
  const auto report = ocs::run_method(*method, problem, cfg);
  const auto files = ocs::emit_report(report, problem, cfg, out);
  print_report(report);
  std::cout << "wrote " << files.trajectory.string() << "\n";
  if (!report.ok()) {
    std::cerr << "solver failed: " << report.diagnostics << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

int compare(const Inputs& in, int seeds, const std::string& out) {
  const auto problem = problem_from(in);
  const auto cfg = config_from(in);
  std::vector<std::uint64_t> seed_list(static_cast<std::size_t>(seeds));
  std::iota(seed_list.begin(), seed_list.end(), in.seed);

  std::vector<ocs::SolveReport> reports;
  reports.push_back(ocs::best_of_seeds(ocs::MethodId::M1, problem, cfg, seed_list));
  reports.push_back(ocs::best_of_seeds(ocs::MethodId::M2, problem, cfg, seed_list));
  reports.push_back(ocs::run_proportional(problem));
  for (const auto& r : reports) ocs::emit_report(r, problem, cfg, out);

  const auto table = ocs::compare(reports);
  ocs::write_text_file(fs::path(out) / "comparison.json", table.to_json().dump(2) + "\n");
  ocs::write_text_file(fs::path(out) / "comparison.txt", table.to_text());
  std::cout << table.to_text();
  for (const auto& r : reports) {
    if (!r.ok()) {
      std::cerr << ocs::to_string(r.method) << " failed: " << r.diagnostics << "\n";
      return kExitSolver;
    }
  }
  return kExitOk;
}

int restarts(const Inputs& in, const std::string& method_name, int n, const std::string& out) {
  const auto method = ocs::parse_method(method_name);
  if (!method || *method == ocs::MethodId::Proportional) {
    throw CLI::ValidationError("--method", "expected m1 or m2");
  }
  const auto problem = problem_from(in);
  const auto cfg = config_from(in);
  const auto summary = ocs::run_restarts(*method, problem, cfg, n, in.seed);
  ocs::write_text_file(fs::path(out) / "restarts.json", summary.to_json().dump(2) + "\n");
  std::cout << ocs::to_string(*method) << " scenario=" << summary.scenario
            << " restarts=" << summary.runs.size()
            << " min=" << ocs::format_double(summary.min_objective)
            << " median=" << ocs::format_double(summary.median_objective)
            << " max=" << ocs::format_double(summary.max_objective) << "\n";
  return kExitOk;
}

int validate(const Inputs& in) {
  const auto problem = problem_from(in);
  if (!in.config.empty()) config_from(in);
  std::cout << "ok: scenario " << problem.scenario().name << " (" << problem.scenario().steps()
            << " steps), " << problem.chillers().size() << " chillers\n";
  return kExitOk;
}

int export_fixtures(const std::string& out) {
  const fs::path root(out);
  ocs::write_text_file(root / "catalog" / "rtac_fixture.json",
                       ocs::catalog_to_json(ocs::fixture_catalog()).dump(2) + "\n");
  for (const auto& name : ocs::fixture_scenario_names()) {
    ocs::write_text_file(root / "scenarios" / (name + ".json"),
                         ocs::scenario_to_json(ocs::fixture_scenario(name)).dump(2) + "\n");
  }
  ocs::write_text_file(root / "config" / "default.json",
                       ocs::dispatch_config_to_json(ocs::DispatchConfig{}).dump(2) + "\n");
  std::cout << "wrote fixtures under " << root.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chiller plant sequencing with transient-aware SPSA"};
  app.require_subcommand(1);

  Inputs in;
  std::string method = "m1";
  std::string out = "out";
  int seeds = 1;
  int n = 10;

  auto* solve_cmd = app.add_subcommand("solve", "Optimize one scenario with one method");
  add_inputs(solve_cmd, in, true);
  solve_cmd->add_option("--method", method, "m1, m2 or proportional")->capture_default_str();
  solve_cmd->add_option("--out", out, "Output directory")->capture_default_str();

  auto* compare_cmd = app.add_subcommand("compare", "Run every method and tabulate E and Nc");
  add_inputs(compare_cmd, in, true);
  compare_cmd->add_option("--seeds", seeds, "Seeds per SPSA method, best kept")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  compare_cmd->add_option("--out", out, "Output directory")->capture_default_str();

  auto* restarts_cmd = app.add_subcommand("restarts", "Distribution of local minima over seeds");
  add_inputs(restarts_cmd, in, true);
  restarts_cmd->add_option("--method", method, "m1 or m2")->capture_default_str();
  restarts_cmd->add_option("--n", n, "Number of restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  restarts_cmd->add_option("--out", out, "Output directory")->capture_default_str();

  auto* validate_cmd = app.add_subcommand("validate", "Schema and consistency checks only");
  add_inputs(validate_cmd, in, false);

  auto* export_cmd = app.add_subcommand("export-fixtures", "Write the built-in fixtures as JSON");
  export_cmd->add_option("--out", out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return solve(in, method, out);
    if (*compare_cmd) return compare(in, seeds, out);
    if (*restarts_cmd) return restarts(in, method, n, out);
    if (*validate_cmd) return validate(in);
    if (*export_cmd) return export_fixtures(out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ocs::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ocs::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}
