#include "ocs/ocs_problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ocs/errors.hpp"

namespace ocs {

DecisionLayout::DecisionLayout(int chillers, int steps) : chillers_(chillers), steps_(steps) {
  if (chillers < 1 || steps < 1) throw ContractError("DecisionLayout: empty plant or horizon");
}

DecisionBounds make_bounds(const DecisionLayout& layout, std::span<const ChillerSpec> chillers,
                           const PlantParams& plant) {
  if (int(chillers.size()) != layout.chillers()) {
    throw ContractError("make_bounds: chiller count does not match layout");
  }
  DecisionBounds b;
  b.lo.assign(layout.size(), 0.0);
  b.hi.assign(layout.size(), 0.0);
  b.on_min.assign(layout.size(), 0.0);
  for (int t = 0; t < layout.steps(); ++t) {
    b.hi[layout.secondary_flow(t)] = plant.m_s_max;
    for (int i = 0; i < layout.chillers(); ++i) {
      const auto f = layout.flow(i, t);
      b.hi[f] = chillers[i].m_max;
      b.on_min[f] = chillers[i].m_min;
      const auto s = layout.setpoint(i, t);
      b.lo[s] = plant.t_out_min_k;
      b.hi[s] = plant.t_out_max_k;
    }
  }
  return b;
}

void project(std::span<double> x, const DecisionBounds& bounds) {
  if (x.size() != bounds.lo.size()) throw ContractError("project: layout mismatch");
  for (std::size_t k = 0; k < x.size(); ++k) {
    double v = std::clamp(x[k], bounds.lo[k], bounds.hi[k]);
    if (const double m_min = bounds.on_min[k]; m_min > 0.0) {
      if (v < 0.5 * m_min) {
        v = 0.0;
      } else if (v < m_min) {
        v = m_min;
      }
    }
    x[k] = v;
  }
}

std::vector<StepDecision> unpack(std::span<const double> x, const DecisionLayout& layout) {
  if (x.size() != layout.size()) throw ContractError("unpack: vector length does not match layout");
  std::vector<StepDecision> out(layout.steps());
  for (int t = 0; t < layout.steps(); ++t) {
    auto& d = out[t];
    d.m_s = x[layout.secondary_flow(t)];
    d.m.resize(layout.chillers());
    d.t_out.resize(layout.chillers());
    for (int i = 0; i < layout.chillers(); ++i) {
      d.m[i] = x[layout.flow(i, t)];
      d.t_out[i] = x[layout.setpoint(i, t)];
    }
  }
  return out;
}

std::vector<double> pack(std::span<const StepDecision> steps, const DecisionLayout& layout) {
  if (int(steps.size()) != layout.steps()) throw ContractError("pack: wrong number of steps");
  std::vector<double> x(layout.size());
  for (int t = 0; t < layout.steps(); ++t) {
    const auto& d = steps[t];
    if (int(d.m.size()) != layout.chillers() || int(d.t_out.size()) != layout.chillers()) {
      throw ContractError("pack: wrong number of chillers");
    }
    x[layout.secondary_flow(t)] = d.m_s;
    for (int i = 0; i < layout.chillers(); ++i) {
      x[layout.flow(i, t)] = d.m[i];
      x[layout.setpoint(i, t)] = d.t_out[i];
    }
  }
  return x;
}

OcsProblem::OcsProblem(Scenario scenario, std::vector<ChillerSpec> chillers)
    : scenario_(std::move(scenario)),
      chillers_(std::move(chillers)),
      layout_(int(chillers_.size()), int(scenario_.steps())),
      bounds_(make_bounds(layout_, chillers_, scenario_.plant)) {
  scenario_.validate();
  for (std::size_t i = 0; i < chillers_.size(); ++i) {
    chillers_[i].validate("chillers[" + std::to_string(i) + "]");
  }
  scenario_.validate_against(chillers_);
}

TrajectoryEvaluation OcsProblem::evaluate(std::span<const double> x) const {
  TrajectoryEvaluation ev;
  ev.decisions = unpack(x, layout_);
  ev.steps.reserve(ev.decisions.size());
  double prev_t_s_in = scenario_.t_amb_k.front();
  for (std::size_t t = 0; t < ev.decisions.size(); ++t) {
    ev.steps.push_back(solve_step(ev.decisions[t], scenario_.exogenous(t), chillers_,
                                  scenario_.plant, prev_t_s_in));
    const auto& s = ev.steps.back();
    prev_t_s_in = s.t_s_in;
    ev.served = ev.served && s.served();
    ev.feasible = ev.feasible && s.feasible();
    for (const auto& v : s.violations) {
      if (v.kind != ViolationKind::Unserved) ev.violation_sq += v.amount * v.amount;
    }
  }
  ev.trace = commutations(ev.decisions, scenario_.initial_on);
  ev.p_e = extra_power(ev.trace, ev.steps, transients(), scenario_.sampling_h);
  ev.p_total = total_power(ev.steps, ev.p_e);

  double e_wh = 0.0;
  double pe_wh = 0.0;
  for (std::size_t t = 0; t < ev.p_total.size(); ++t) {
    e_wh += ev.p_total[t] * scenario_.sampling_h;
    pe_wh += ev.p_e[t] * scenario_.sampling_h;
  }
  ev.energy_kwh = e_wh / 1000.0;
  ev.static_energy_kwh = (e_wh - pe_wh) / 1000.0;
  return ev;
}

double OcsProblem::penalized_objective(const TrajectoryEvaluation& ev, bool include_transients,
                                       double penalty_weight) {
  if (!ev.served) return std::numeric_limits<double>::infinity();
  const double e_wh = 1000.0 * (include_transients ? ev.energy_kwh : ev.static_energy_kwh);
  return e_wh + penalty_weight * ev.violation_sq;
}

double OcsProblem::penalized_objective(std::span<const double> x, bool include_transients,
                                       double penalty_weight) const {
  return penalized_objective(evaluate(x), include_transients, penalty_weight);
}

std::vector<double> OcsProblem::proportional_decision(double design_dt_k) const {
  const auto& plant = scenario_.plant;
  const double t_mid = 0.5 * (plant.t_out_min_k + plant.t_out_max_k);
  double capacity = 0.0;
  double k_min = 0.0;
  double k_max = std::numeric_limits<double>::infinity();
  for (const auto& c : chillers_) {
    capacity += c.nominal_capacity_w;
    k_min = std::max(k_min, c.m_min / c.nominal_capacity_w);
    k_max = std::min(k_max, c.m_max / c.nominal_capacity_w);
  }

  std::vector<double> x(layout_.size(), 0.0);
  for (int t = 0; t < layout_.steps(); ++t) {
    for (int i = 0; i < layout_.chillers(); ++i) x[layout_.setpoint(i, t)] = t_mid;
    const double q_occ = scenario_.q_occ_w[t];
    if (q_occ <= 0.0) continue;
    const double q_loss = std::max(0.0, plant.loss.ua_w_per_k * (scenario_.t_amb_k[t] - t_mid));
    // Flow per watt of nominal capacity, common to all units so that the
    // cooling shares follow the capacities exactly.
    double k = (q_occ + q_loss) / (capacity * plant.cp * design_dt_k);
    if (k_min <= k_max) k = std::clamp(k, k_min, k_max);
    double m_p = 0.0;
    for (int i = 0; i < layout_.chillers(); ++i) {
      const double m = k * chillers_[i].nominal_capacity_w;
      x[layout_.flow(i, t)] = m;
      m_p += m;
    }
    x[layout_.secondary_flow(t)] = std::min(m_p, plant.m_s_max);
  }
  return x;
}

}  // namespace ocs
