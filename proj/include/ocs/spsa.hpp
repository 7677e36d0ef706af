#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace ocs {

/// Gain schedules a_j = a / (A + j)^alpha, c_j = c / j^gamma plus the
/// stopping rule and constraint handling knobs.
struct SpsaConfig {
  double a = 0.16;
  double A = 200.0;
  double alpha = 0.6;
  double c = 0.35;
  double gamma = 0.1;
  int j_min = 20;
  int j_max = 1000;
  double beta = 0.01;
  double penalty_weight = 1e6;
  std::uint64_t rng_seed = 1;
  int max_retries = 10;  // perturbation resamples per iteration
  // An iterate raising the objective by more than blocking * |f| is rejected
  // like an infeasible one. Negative disables the test.
  double blocking = -1.0;

  void validate(const std::string& path = "spsa") const;
  bool operator==(const SpsaConfig&) const = default;
};

struct Gains {
  double a;
  double c;
};

/// Throws ContractError for j < 1 (c_j is undefined at j = 0).
Gains gain_schedules(const SpsaConfig& config, int j);

/// Seeded generator for perturbation vectors. Signs are taken straight from
/// the engine bits so sequences are identical on every standard library.
class PerturbationSource {
 public:
  explicit PerturbationSource(std::uint64_t seed) : engine_(seed) {}
  std::vector<double> draw(std::size_t dim);

 private:
  std::mt19937_64 engine_;
  std::uint64_t bits_ = 0;
  int left_ = 0;
};

/// Bernoulli +/-1 vector of length dim (dim >= 1).
std::vector<double> perturbation(std::size_t dim, PerturbationSource& rng);

using Objective = std::function<double(std::span<const double>)>;

struct GradientEstimate {
  std::vector<double> g;
  double f_plus = 0.0;
  double f_minus = 0.0;
  bool ok = false;  // false: a probe was non-finite, resample the perturbation
};

/// Simultaneous-perturbation estimate from exactly two objective calls:
/// g_k = [f(x + c D) - f(x - c D)] / (2 c D_k).
GradientEstimate estimate_gradient(const Objective& objective, std::span<const double> x,
                                   double c_j, std::span<const double> delta);

/// x - a_j * g (no projection).
std::vector<double> update(std::span<const double> x, double a_j, std::span<const double> g);

struct IterationRecord {
  int j = 0;
  double objective = 0.0;       // at the accepted iterate
  double best_objective = 0.0;  // best feasible value seen so far
  double step_norm = 0.0;       // ||x_j - x_{j-1}||
  bool feasible = false;
  int retries = 0;
};

/// What the solver needs to know about the problem besides the objective.
struct SpsaProblem {
  Objective objective;
  /// Maps an updated iterate back into the admissible set (in place).
  std::function<void(std::span<double>)> project;
  /// Feasibility of an iterate; defaults to "objective is finite".
  std::function<bool(std::span<const double>)> feasible;
};

enum class StopReason { Converged, IterationLimit, NoFeasiblePoint };

const char* to_string(StopReason reason);

struct SpsaResult {
  std::vector<double> x;  // best feasible iterate (x0 if nothing better)
  double objective = 0.0;
  std::vector<IterationRecord> history;
  StopReason reason = StopReason::IterationLimit;
  long evaluations = 0;
  double wall_seconds = 0.0;
  std::string diagnostics;

  bool ok() const { return reason != StopReason::NoFeasiblePoint; }
};

/// Runs SPSA from x0.
///
/// Each iteration draws a perturbation, estimates the gradient, steps and
/// projects. The iteration goes back to a fresh perturbation, at most
/// `max_retries` times, when a probe is non-finite, when the new iterate is
/// infeasible while the current one is feasible, or when blocking rejects it.
/// If every draw fails the iterate stays put.
///
/// Stops at j_max, or once j >= j_min, an accepted step is shorter than
/// beta * ||x_1 - x_j|| and the best objective has not improved over the last
/// 5 * j_min iterations.
SpsaResult spsa_solve(std::span<const double> x0, const SpsaConfig& config,
                      const SpsaProblem& problem);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

}  // namespace ocs
