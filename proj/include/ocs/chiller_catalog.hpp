#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ocs {

inline constexpr double kWattsPerRefrigerationTon = 3516.85;

/// Converts refrigeration tons to watts of thermal power.
double rt_to_watts(double capacity_rt);

/// Manufacturer COP surface f(T_ev, T_co, PLR) sampled on a rectilinear grid.
///
/// Values are stored flattened in (ev-major, co, plr) order, i.e. the PLR
/// index varies fastest. Temperatures are in kelvin.
class CopTable {
 public:
  CopTable() = default;
  CopTable(std::vector<double> ev_axis, std::vector<double> co_axis,
           std::vector<double> plr_axis, std::vector<double> values);

  const std::vector<double>& ev_axis() const { return ev_axis_; }
  const std::vector<double>& co_axis() const { return co_axis_; }
  const std::vector<double>& plr_axis() const { return plr_axis_; }
  const std::vector<double>& values() const { return values_; }

  double at(std::size_t ev, std::size_t co, std::size_t plr) const {
    return values_[(ev * co_axis_.size() + co) * plr_axis_.size() + plr];
  }

  /// Trilinear interpolation. Coordinates outside the grid are clamped to the
  /// nearest edge first. Throws DomainError for plr <= 0.
  double lookup(double t_ev, double t_co, double plr) const;

  /// Throws ValidationError (prefixed with `path`) if an invariant is broken.
  void validate(const std::string& path = "cop_table") const;

  bool operator==(const CopTable&) const = default;

 private:
  std::vector<double> ev_axis_;
  std::vector<double> co_axis_;
  std::vector<double> plr_axis_;
  std::vector<double> values_;
};

struct ChillerSpec {
  int id = 0;
  std::string model;
  double nominal_capacity_w = 0.0;
  double m_min = 0.0;  // kg/s
  double m_max = 0.0;  // kg/s
  CopTable cop;
  double tau_h = 0.2;  // first-order transient time constant
  double startup_idle_power_w = 0.0;

  void validate(const std::string& path = "chiller") const;
  bool operator==(const ChillerSpec&) const = default;
};

double cop_lookup(const ChillerSpec& spec, double t_ev, double t_co, double plr);

/// Parses and validates a catalog document. `origin` is used in error
/// messages (usually the file path).
std::vector<ChillerSpec> load_catalog(const nlohmann::json& doc,
                                      const std::string& origin = "catalog");
std::vector<ChillerSpec> load_catalog_text(const std::string& text,
                                           const std::string& origin = "catalog");
std::vector<ChillerSpec> load_catalog_file(const std::filesystem::path& path);

nlohmann::json catalog_to_json(const std::vector<ChillerSpec>& chillers);

/// Three air-cooled units (400, 300 and 250 RT) with synthetic COP surfaces
/// anchored at COP = 2.8 for full load at nominal conditions
/// (T_ev = 277.15 K, T_co = 318.15 K).
std::vector<ChillerSpec> fixture_catalog();

/// Grid node used as the nominal rating point of the fixture tables.
inline constexpr double kFixtureNominalEvK = 277.15;
inline constexpr double kFixtureNominalCoK = 318.15;

}  // namespace ocs
