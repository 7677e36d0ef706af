#include "ocs/transient_model.hpp"

#include <cmath>

#include "ocs/errors.hpp"

namespace ocs {

TransientParams TransientParams::from(std::span<const ChillerSpec> chillers) {
  TransientParams p;
  for (const auto& c : chillers) p.tau_h.push_back(c.tau_h);
  return p;
}

CommutationTrace commutations(std::span<const StepDecision> trajectory,
                              const std::vector<bool>& initial_on) {
  CommutationTrace trace;
  if (trajectory.empty()) return trace;
  const std::size_t n = trajectory.front().m.size();
  if (!initial_on.empty() && initial_on.size() != n) {
    throw ContractError("commutations: initial state does not match the number of chillers");
  }
  trace.on.assign(n, std::vector<bool>(trajectory.size(), false));
  for (std::size_t i = 0; i < n; ++i) {
    bool prev = initial_on.empty() ? false : bool(initial_on[i]);
    for (std::size_t t = 0; t < trajectory.size(); ++t) {
      if (trajectory[t].m.size() != n) {
        throw ContractError("commutations: inconsistent chiller count in trajectory");
      }
      const bool now = trajectory[t].m[i] > 0.0;
      trace.on[i][t] = now;
      if (now != prev) {
        ++trace.nc;
        (now ? trace.startups : trace.shutdowns).push_back({int(i), int(t)});
      }
      prev = now;
    }
  }
  return trace;
}

double step_response(double tau_h, double t_h) {
  if (!(tau_h > 0.0)) throw DomainError("step_response: tau must be positive");
  if (!(t_h >= 0.0)) throw DomainError("step_response: time must be non-negative");
  return -std::expm1(-t_h / tau_h);
}

double startup_shortfall_wh(double steady_q_w, double tau_h, double sampling_h) {
  // integral_0^Ts q * exp(-u / tau) du
  return steady_q_w * tau_h * step_response(tau_h, sampling_h);
}

std::vector<double> extra_power(const CommutationTrace& trace,
                                const std::vector<std::vector<double>>& steady_q,
                                const std::vector<std::vector<double>>& cop,
                                const TransientParams& params, double sampling_h) {
  const std::size_t steps = trace.steps();
  if (steady_q.size() != steps || cop.size() != steps) {
    throw ContractError("extra_power: per-step inputs do not match the trace length");
  }
  if (params.tau_h.size() != trace.on.size()) {
    throw ContractError("extra_power: one time constant per chiller required");
  }
  if (!(sampling_h > 0.0)) throw ContractError("extra_power: sampling period must be positive");

  std::vector<double> p_e(steps, 0.0);
  for (const auto& ev : trace.startups) {
    const double q = steady_q[ev.step].at(ev.chiller);
    if (q <= 0.0) continue;  // nothing delivered, nothing to make up
    const double c = cop[ev.step].at(ev.chiller);
    if (!(c > 0.0)) {
      throw ContractError("extra_power: COP must be positive at a startup step");
    }
    p_e[ev.step] += startup_shortfall_wh(q, params.tau_h[ev.chiller], sampling_h) / (c * sampling_h);
  }
  return p_e;
}

std::vector<double> extra_power(const CommutationTrace& trace, std::span<const PlantStep> steps,
                                const TransientParams& params, double sampling_h) {
  std::vector<std::vector<double>> q, cop;
  q.reserve(steps.size());
  cop.reserve(steps.size());
  for (const auto& s : steps) {
    q.push_back(s.q);
    cop.push_back(s.cop);
  }
  return extra_power(trace, q, cop, params, sampling_h);
}

}  // namespace ocs
