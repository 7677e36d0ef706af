#pragma once

#include <span>
#include <vector>

#include "ocs/chiller_catalog.hpp"
#include "ocs/plant_model.hpp"
#include "ocs/scenario.hpp"
#include "ocs/transient_model.hpp"

namespace ocs {

/// Index map of the flat trajectory vector
///   [m_s(1..T), m_1(1..T), t_out_1(1..T), ..., m_N(1..T), t_out_N(1..T)].
class DecisionLayout {
 public:
  DecisionLayout(int chillers, int steps);

  int chillers() const { return chillers_; }
  int steps() const { return steps_; }
  std::size_t size() const { return std::size_t(steps_) * (2 * chillers_ + 1); }

  std::size_t secondary_flow(int t) const { return std::size_t(t); }
  std::size_t flow(int i, int t) const { return std::size_t(steps_) * (1 + 2 * i) + t; }
  std::size_t setpoint(int i, int t) const { return std::size_t(steps_) * (2 + 2 * i) + t; }

 private:
  int chillers_;
  int steps_;
};

/// Per-component box plus, for chiller flows, the minimum running flow that
/// makes the domain {0} U [m_min, m_max].
struct DecisionBounds {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> on_min;  // > 0 only for chiller-flow components

  /// Length used to normalize each component: m_max for flows, the setpoint
  /// range for temperatures, m_s_max for the secondary flow.
  double scale(std::size_t k) const { return hi[k] - lo[k]; }
};

DecisionBounds make_bounds(const DecisionLayout& layout, std::span<const ChillerSpec> chillers,
                           const PlantParams& plant);

/// Clips temperatures and m_s to their boxes and snaps chiller flows:
/// v < m_min/2 -> 0 (off), m_min/2 <= v < m_min -> m_min, else clip to m_max.
void project(std::span<double> x, const DecisionBounds& bounds);

std::vector<StepDecision> unpack(std::span<const double> x, const DecisionLayout& layout);
std::vector<double> pack(std::span<const StepDecision> steps, const DecisionLayout& layout);

/// Fully solved trajectory.
struct TrajectoryEvaluation {
  std::vector<StepDecision> decisions;
  std::vector<PlantStep> steps;
  CommutationTrace trace;
  std::vector<double> p_e;      // W
  std::vector<double> p_total;  // W, including P_e
  double energy_kwh = 0.0;         // sum P * Ts, transients included
  double static_energy_kwh = 0.0;  // same with P_e = 0
  double violation_sq = 0.0;       // sum of squared normalized violations
  bool served = true;
  bool feasible = true;
};

/// A scenario bound to a chiller catalog.
class OcsProblem {
 public:
  OcsProblem(Scenario scenario, std::vector<ChillerSpec> chillers);

  const Scenario& scenario() const { return scenario_; }
  const std::vector<ChillerSpec>& chillers() const { return chillers_; }
  const DecisionLayout& layout() const { return layout_; }
  const DecisionBounds& bounds() const { return bounds_; }
  TransientParams transients() const { return TransientParams::from(chillers_); }

  TrajectoryEvaluation evaluate(std::span<const double> x) const;

  /// Energy in W h (with or without P_e) plus penalty_weight times the sum of
  /// squared normalized violations. Infinite when some step cannot be served.
  double penalized_objective(std::span<const double> x, bool include_transients,
                             double penalty_weight) const;
  static double penalized_objective(const TrajectoryEvaluation& eval, bool include_transients,
                                    double penalty_weight);

  /// Capacity-proportional loading: every unit on, common mid-range setpoint,
  /// m_s = m_p. Steps without load leave the plant idle.
  std::vector<double> proportional_decision(double design_dt_k = 5.0) const;

 private:
  Scenario scenario_;
  std::vector<ChillerSpec> chillers_;
  DecisionLayout layout_;
  DecisionBounds bounds_;
};

}  // namespace ocs
