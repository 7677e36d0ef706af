#include "ocs/plant_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ocs/errors.hpp"

namespace ocs {

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Unserved: return "unserved";
    case ViolationKind::NegativeBypass: return "negative_bypass";
    case ViolationKind::Overload: return "overload";
    case ViolationKind::ChillerDeltaTLow: return "chiller_dt_low";
    case ViolationKind::ChillerDeltaTHigh: return "chiller_dt_high";
    case ViolationKind::SecondaryDeltaT: return "secondary_dt";
    case ViolationKind::SetpointBounds: return "setpoint_bounds";
    case ViolationKind::FlowBounds: return "flow_bounds";
  }
  return "unknown";
}

void PlantParams::validate(const std::string& path) const {
  if (!(loss.ua_w_per_k >= 0.0)) throw ValidationError(path + ".loss.ua_w_per_k", "must be >= 0");
  if (!(pump.p_nom_w > 0.0)) throw ValidationError(path + ".pump.p_nom_w", "must be > 0");
  if (!(pump.m_nom > 0.0)) throw ValidationError(path + ".pump.m_nom", "must be > 0");
  if (!(cp > 0.0)) throw ValidationError(path + ".cp", "must be > 0");
  if (!(dt_chiller_max_k > 0.0)) throw ValidationError(path + ".dt_chiller_max_k", "must be > 0");
  if (!(dt_secondary_max_k > 0.0)) {
    throw ValidationError(path + ".dt_secondary_max_k", "must be > 0");
  }
  if (!(t_out_max_k > t_out_min_k) || !(t_out_min_k > 0.0)) {
    throw ValidationError(path + ".t_out_max_k", "setpoint range must be non-empty");
  }
  if (!(m_s_max > 0.0)) throw ValidationError(path + ".m_s_max", "must be > 0");
}

bool PlantStep::served() const {
  return std::none_of(violations.begin(), violations.end(),
                      [](const Violation& v) { return v.kind == ViolationKind::Unserved; });
}

double PlantStep::chiller_power() const { return std::accumulate(p.begin(), p.end(), 0.0); }

double pump_power(const PumpModel& pump, double m_s) {
  if (!(m_s >= 0.0)) throw DomainError("pump_power: flow must be non-negative");
  const double r = m_s / pump.m_nom;
  return pump.p_nom_w * r * r * r;
}

PlantStep solve_step(const StepDecision& d, const StepExogenous& exo,
                     std::span<const ChillerSpec> chillers, const PlantParams& params,
                     double prev_t_s_in) {
  const std::size_t n = chillers.size();
  if (d.m.size() != n || d.t_out.size() != n) {
    throw ContractError("solve_step: decision does not match the number of chillers");
  }
  if (!(d.m_s >= 0.0)) throw DomainError("solve_step: secondary flow must be non-negative");
  if (!(exo.q_occ >= 0.0)) throw DomainError("solve_step: occupancy load must be non-negative");

  PlantStep s;
  s.q_occ = exo.q_occ;
  s.q.assign(n, 0.0);
  s.plr.assign(n, 0.0);
  s.cop.assign(n, 0.0);
  s.p.assign(n, 0.0);
  // Round-off in the mixing equations must not read as a violation.
  constexpr double kTolerance = 1e-9;
  auto flag = [&](ViolationKind k, int i, double amount) {
    if (amount > kTolerance || k == ViolationKind::Unserved) s.violations.push_back({k, i, amount});
  };

  // Mixing of the running units (off units carry no flow and are ignored).
  double mt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = d.m[i];
    if (m < 0.0) throw DomainError("solve_step: chiller flow must be non-negative");
    s.m_p += m;
    mt += m * d.t_out[i];
    if (m > 0.0) {
      const auto& c = chillers[i];
      if (m < c.m_min) flag(ViolationKind::FlowBounds, int(i), (c.m_min - m) / c.m_max);
      if (m > c.m_max) flag(ViolationKind::FlowBounds, int(i), (m - c.m_max) / c.m_max);
      const double range = params.t_out_max_k - params.t_out_min_k;
      if (d.t_out[i] < params.t_out_min_k) {
        flag(ViolationKind::SetpointBounds, int(i), (params.t_out_min_k - d.t_out[i]) / range);
      }
      if (d.t_out[i] > params.t_out_max_k) {
        flag(ViolationKind::SetpointBounds, int(i), (d.t_out[i] - params.t_out_max_k) / range);
      }
    }
  }
  s.t_s_in = s.m_p > 0.0 ? mt / s.m_p : prev_t_s_in;
  s.m_b = s.m_p - d.m_s;
  s.p_s = pump_power(params.pump, d.m_s);
  if (d.m_s > params.m_s_max) {
    flag(ViolationKind::FlowBounds, -1, (d.m_s - params.m_s_max) / params.m_s_max);
  }

  // Losses only arise while the secondary circulates.
  if (d.m_s > 0.0) {
    s.q_loss = std::max(0.0, params.loss.ua_w_per_k * (exo.t_amb - s.t_s_in));
  }
  const double q_load = exo.q_occ + s.q_loss;

  if (q_load > 0.0 && (s.m_p <= 0.0 || d.m_s <= 0.0)) {
    flag(ViolationKind::Unserved, -1, 1.0);
    s.t_s_out = s.t_s_in;
    s.t_in = s.t_s_in;
    return s;
  }
  if (s.m_p <= 0.0) {
    // Idle plant: nothing flows through the chillers.
    s.t_s_out = s.t_s_in;
    s.t_in = s.t_s_in;
    if (d.m_s > 0.0) flag(ViolationKind::NegativeBypass, -1, 1.0);
    return s;
  }

  s.t_s_out = d.m_s > 0.0 ? s.t_s_in + q_load / (d.m_s * params.cp) : s.t_s_in;
  s.t_in = (s.m_b * s.t_s_in + d.m_s * s.t_s_out) / s.m_p;

  if (s.m_b < 0.0) flag(ViolationKind::NegativeBypass, -1, -s.m_b / d.m_s);
  const double dts = s.t_s_out - s.t_s_in;
  if (dts > params.dt_secondary_max_k) {
    flag(ViolationKind::SecondaryDeltaT, -1,
         (dts - params.dt_secondary_max_k) / params.dt_secondary_max_k);
  }

  const double t_co = exo.t_amb + params.co_approach_k;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = d.m[i];
    if (m <= 0.0) continue;
    const auto& c = chillers[i];
    const double dt = s.t_in - d.t_out[i];
    s.q[i] = m * params.cp * dt;
    s.plr[i] = s.q[i] / c.nominal_capacity_w;
    if (dt < 0.0) flag(ViolationKind::ChillerDeltaTLow, int(i), -dt / params.dt_chiller_max_k);
    if (dt > params.dt_chiller_max_k) {
      flag(ViolationKind::ChillerDeltaTHigh, int(i),
           (dt - params.dt_chiller_max_k) / params.dt_chiller_max_k);
    }
    if (s.plr[i] > 1.0) flag(ViolationKind::Overload, int(i), s.plr[i] - 1.0);
    s.p[i] = c.startup_idle_power_w;
    if (s.q[i] > 0.0) {
      s.cop[i] = c.cop.lookup(d.t_out[i] - params.ev_approach_k, t_co, s.plr[i]);
      s.p[i] += s.q[i] / s.cop[i];
    }
  }
  return s;
}

std::vector<double> total_power(std::span<const PlantStep> steps, std::span<const double> p_e) {
  if (steps.size() != p_e.size()) {
    throw ContractError("total_power: steps and extra power differ in length");
  }
  std::vector<double> out(steps.size());
  for (std::size_t t = 0; t < steps.size(); ++t) {
    out[t] = steps[t].chiller_power() + steps[t].p_s + p_e[t];
  }
  return out;
}

}  // namespace ocs
