#pragma once

#include <span>
#include <vector>

#include "ocs/plant_model.hpp"

namespace ocs {

struct SwitchEvent {
  int chiller = 0;
  int step = 0;  // 0-based time index
};

/// On/off history of every chiller over a trajectory.
struct CommutationTrace {
  std::vector<std::vector<bool>> on;  // [chiller][step]
  std::vector<SwitchEvent> startups;
  std::vector<SwitchEvent> shutdowns;
  int nc = 0;

  std::size_t steps() const { return on.empty() ? 0 : on.front().size(); }
};

/// First-order startup dynamics, one time constant per chiller.
struct TransientParams {
  std::vector<double> tau_h;
  int model_order = 1;

  static TransientParams from(std::span<const ChillerSpec> chillers);
};

/// A chiller is on at a step iff its flow is positive. `initial_on` is the
/// state before the first step; empty means every unit starts off.
CommutationTrace commutations(std::span<const StepDecision> trajectory,
                              const std::vector<bool>& initial_on = {});

/// Fraction of the steady-state value reached t hours after a unit step.
double step_response(double tau_h, double t_h);

/// Cooling energy (W h) missing during a startup step of length `sampling_h`
/// for a unit whose steady output is `steady_q_w`.
double startup_shortfall_wh(double steady_q_w, double tau_h, double sampling_h);

/// Extra electrical power P_e per step. Each startup adds its cooling
/// shortfall converted through the chiller's COP and spread over the step;
/// shutdowns add nothing by themselves.
///
/// `steady_q` and `cop` are indexed [step][chiller].
std::vector<double> extra_power(const CommutationTrace& trace,
                                const std::vector<std::vector<double>>& steady_q,
                                const std::vector<std::vector<double>>& cop,
                                const TransientParams& params, double sampling_h);

/// Convenience overload taking solved plant steps.
std::vector<double> extra_power(const CommutationTrace& trace, std::span<const PlantStep> steps,
                                const TransientParams& params, double sampling_h);

}  // namespace ocs
