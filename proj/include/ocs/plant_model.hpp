#pragma once

#include <span>
#include <string>
#include <vector>

#include "ocs/chiller_catalog.hpp"

namespace ocs {

inline constexpr double kWaterCp = 4186.0;  // J/(kg K)

/// Decision variables for one time step. A chiller flow of 0 means "off".
struct StepDecision {
  double m_s = 0.0;                // secondary mass flow, kg/s
  std::vector<double> m;           // per-chiller mass flow, kg/s
  std::vector<double> t_out;       // per-chiller output setpoint, K

  bool operator==(const StepDecision&) const = default;
};

struct StepExogenous {
  double t_amb = 0.0;  // K
  double q_occ = 0.0;  // W
};

/// Distribution losses Q_l = ua * (T_amb - T_s^i), never negative.
struct LossModel {
  double ua_w_per_k = 0.0;
  bool operator==(const LossModel&) const = default;
};

/// Secondary pump following the cube affinity law.
struct PumpModel {
  double p_nom_w = 1.0;
  double m_nom = 1.0;
  bool operator==(const PumpModel&) const = default;
};

/// Everything solve_step needs besides the decision and the exogenous inputs.
struct PlantParams {
  LossModel loss;
  PumpModel pump;
  double cp = kWaterCp;
  double ev_approach_k = 3.0;   // T_ev = t_out - approach
  double co_approach_k = 10.0;  // T_co = t_amb + approach
  double dt_chiller_max_k = 8.0;
  double dt_secondary_max_k = 8.0;
  double t_out_min_k = 278.15;
  double t_out_max_k = 284.15;
  double m_s_max = 232.0;

  void validate(const std::string& path = "plant") const;
  bool operator==(const PlantParams&) const = default;
};

enum class ViolationKind {
  Unserved,          // load present but no flow path through a running chiller
  NegativeBypass,    // m_s > m_p
  Overload,          // PLR > 1
  ChillerDeltaTLow,  // water heated across a running chiller
  ChillerDeltaTHigh,
  SecondaryDeltaT,
  SetpointBounds,
  FlowBounds,
};

const char* to_string(ViolationKind kind);

/// `amount` is dimensionless (normalized by the relevant limit); `chiller` is
/// -1 for plant-level violations.
struct Violation {
  ViolationKind kind;
  int chiller = -1;
  double amount = 0.0;
};

struct PlantStep {
  double t_s_in = 0.0;   // supply to the secondary, K
  double t_s_out = 0.0;  // return from the secondary, K
  double t_in = 0.0;     // chiller inlet (common to all units), K
  double m_p = 0.0;
  double m_b = 0.0;
  double q_loss = 0.0;
  double q_occ = 0.0;
  std::vector<double> q;    // cooling per chiller, W
  std::vector<double> plr;
  std::vector<double> cop;  // 0 when the chiller delivers no cooling
  std::vector<double> p;    // electrical power per chiller, W
  double p_s = 0.0;
  std::vector<Violation> violations;

  bool feasible() const { return violations.empty(); }
  bool served() const;
  double chiller_power() const;
};

/// Pump power p_nom * (m_s / m_nom)^3. Throws DomainError for m_s < 0.
double pump_power(const PumpModel& pump, double m_s);

/// Solves the primary/secondary loop for one time step.
///
/// `prev_t_s_in` is the supply temperature used when no chiller is running
/// (the flow-weighted mix is 0/0 then); pass the previous step's value, or
/// the ambient temperature for the first step.
PlantStep solve_step(const StepDecision& decision, const StepExogenous& exo,
                     std::span<const ChillerSpec> chillers, const PlantParams& params,
                     double prev_t_s_in);

/// P(t) = sum_i P_i(t) + P_s(t) + P_e(t).
std::vector<double> total_power(std::span<const PlantStep> steps, std::span<const double> p_e);

}  // namespace ocs
