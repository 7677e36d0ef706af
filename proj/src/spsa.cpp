#include "ocs/spsa.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "ocs/errors.hpp"

namespace ocs {

void SpsaConfig::validate(const std::string& path) const {
  if (!(a > 0.0)) throw ValidationError(path + ".a", "must be > 0");
  if (!(A >= 0.0)) throw ValidationError(path + ".A", "must be >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError(path + ".alpha", "must lie in (0, 1]");
  if (!(c > 0.0)) throw ValidationError(path + ".c", "must be > 0");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ValidationError(path + ".gamma", "must lie in [0, 1)");
  if (j_min < 1) throw ValidationError(path + ".j_min", "must be >= 1");
  if (j_max < j_min) throw ValidationError(path + ".j_max", "must be >= j_min");
  if (!(beta > 0.0)) throw ValidationError(path + ".beta", "must be > 0");
  if (!(penalty_weight >= 0.0)) throw ValidationError(path + ".penalty_weight", "must be >= 0");
  if (max_retries < 0) throw ValidationError(path + ".max_retries", "must be >= 0");
}

Gains gain_schedules(const SpsaConfig& config, int j) {
  if (j < 1) throw ContractError("gain_schedules: iteration index starts at 1");
  return {config.a / std::pow(config.A + j, config.alpha),
          config.c / std::pow(static_cast<double>(j), config.gamma)};
}

std::vector<double> PerturbationSource::draw(std::size_t dim) {
  std::vector<double> d(dim);
  for (auto& v : d) {
    if (left_ == 0) {
      bits_ = engine_();
      left_ = 64;
    }
    v = (bits_ & 1u) ? 1.0 : -1.0;
    bits_ >>= 1;
    --left_;
  }
  return d;
}

std::vector<double> perturbation(std::size_t dim, PerturbationSource& rng) {
  if (dim == 0) throw ContractError("perturbation: dimension must be >= 1");
  return rng.draw(dim);
}

GradientEstimate estimate_gradient(const Objective& objective, std::span<const double> x,
                                   double c_j, std::span<const double> delta) {
  if (x.size() != delta.size()) throw ContractError("estimate_gradient: shape mismatch");
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t k = 0; k < x.size(); ++k) probe[k] = x[k] + c_j * delta[k];
  GradientEstimate est;
  est.f_plus = objective(probe);
  for (std::size_t k = 0; k < x.size(); ++k) probe[k] = x[k] - c_j * delta[k];
  est.f_minus = objective(probe);
  if (!std::isfinite(est.f_plus) || !std::isfinite(est.f_minus)) return est;

  const double diff = est.f_plus - est.f_minus;
  est.g.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) est.g[k] = diff / (2.0 * c_j * delta[k]);
  est.ok = true;
  return est;
}

std::vector<double> update(std::span<const double> x, double a_j, std::span<const double> g) {
  if (x.size() != g.size()) throw ContractError("update: shape mismatch");
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] - a_j * g[k];
  return out;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Converged: return "converged";
    case StopReason::IterationLimit: return "iteration_limit";
    case StopReason::NoFeasiblePoint: return "no_feasible_point";
  }
  return "unknown";
}

SpsaResult spsa_solve(std::span<const double> x0, const SpsaConfig& config,
                      const SpsaProblem& problem) {
  config.validate();
  if (x0.empty()) throw ContractError("spsa_solve: empty starting point");
  if (!problem.objective) throw ContractError("spsa_solve: objective required");

  const auto started = std::chrono::steady_clock::now();
  SpsaResult result;
  long evals = 0;
  const Objective counted = [&](std::span<const double> v) {
    ++evals;
    return problem.objective(v);
  };
  auto is_feasible = [&](std::span<const double> v, double f) {
    if (!std::isfinite(f)) return false;
    return problem.feasible ? problem.feasible(v) : true;
  };

  std::vector<double> x(x0.begin(), x0.end());
  if (problem.project) problem.project(x);
  double fx = counted(x);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  double best_f = kInf;
  std::vector<double> best_x;
  if (is_feasible(x, fx)) {
    best_f = fx;
    best_x = x;
  }
  int last_improvement = 0;

  PerturbationSource rng(config.rng_seed);
  std::vector<double> x_first;
  result.reason = StopReason::IterationLimit;

  for (int j = 1; j <= config.j_max; ++j) {
    const Gains gains = gain_schedules(config, j);
    IterationRecord rec;
    rec.j = j;

    const bool current_feasible = is_feasible(x, fx);
    std::vector<double> next;
    double f_next = kInf;
    bool accepted = false;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
      if (attempt > 0) ++rec.retries;
      const auto delta = perturbation(x.size(), rng);
      const auto est = estimate_gradient(counted, x, gains.c, delta);
      if (!est.ok) continue;
      next = update(x, gains.a, est.g);
      if (problem.project) problem.project(next);
      f_next = counted(next);
      // Once the walk is feasible it only moves to feasible points.
      const bool blocked = config.blocking >= 0.0 && current_feasible &&
                           f_next > fx + config.blocking * std::abs(fx);
      if (!blocked && (current_feasible ? is_feasible(next, f_next) : std::isfinite(f_next))) {
        accepted = true;
        break;
      }
    }

    if (accepted) {
      rec.step_norm = euclidean_distance(next, x);
      x = std::move(next);
      fx = f_next;
    }
    rec.objective = fx;
    rec.feasible = is_feasible(x, fx);
    if (rec.feasible && fx < best_f) {
      best_f = fx;
      best_x = x;
      last_improvement = j;
    }
    rec.best_objective = best_f;
    result.history.push_back(rec);

    if (j == 1) x_first = x;
    if (j >= config.j_min && j < config.j_max) {
      const double eps = config.beta * euclidean_distance(x_first, x);
      if (accepted && rec.step_norm < eps && j - last_improvement >= 5 * config.j_min) {
        result.reason = StopReason::Converged;
        break;
      }
    }
  }

  result.evaluations = evals;
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (best_x.empty()) {
    result.reason = StopReason::NoFeasiblePoint;
    result.x = x;
    result.objective = fx;
    std::ostringstream msg;
    msg << "no feasible iterate in " << result.history.size() << " iterations; last objective "
        << fx;
    result.diagnostics = msg.str();
  } else {
    result.x = std::move(best_x);
    result.objective = best_f;
  }
  return result;
}

}  // namespace ocs
