#pragma once

#include <array>
#include <string>
#include <vector>

namespace roller::sim {

enum class Mode { Rolling, TransitionToFlying, TransitionToRolling, Flying };

const char* mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

struct BatteryParams {
  double capacity_mah = 2000.0;
  double voltage = 14.8;
};

// Full-charge electrical energy in joules.
double battery_energy_joules(const BatteryParams& battery);

struct ModeTotals {
  double time_s = 0.0;
  double distance_m = 0.0;
  double energy_j = 0.0;
};

// Per-mode accumulators of time, distance and electrical energy. All
// accumulators are non-negative and monotone over a run.
struct EnergyLedger {
  std::array<ModeTotals, 4> per_mode{};
  double vehicle_mass = 1.5;
  BatteryParams battery;
  double flight_power_per_kg = 657.8;  // W/kg, measured calibration point

  void add(Mode mode, double dt, double speed, double power_w);
  const ModeTotals& totals(Mode mode) const {
    return per_mode[static_cast<size_t>(mode)];
  }
  double total_time() const;
  double total_distance() const;
  double total_energy() const;
};

// One report line per active mode. Undefined ratios are quiet NaN markers,
// never division faults.
struct ReportRow {
  Mode mode;
  double time_s;
  double distance_m;
  double energy_j;
  double watts_per_kg;
  double joules_per_m_per_kg;
  double endurance_min_full_battery;
  double range_m_full_battery;
};

struct EnergyReport {
  std::vector<ReportRow> rows;
  // Rolling vs flying extrapolations; NaN when either side is undefined.
  double range_ratio;
  double endurance_ratio;
};

EnergyReport energy_report(const EnergyLedger& ledger);

// Cubic-in-speed electrical power model for one rotor, scaled so the four
// rotors at hover speed draw the measured flight power.
double rotor_power_coeff_from_hover(double flight_power_per_kg, double mass,
                                    double hover_omega);
double rotor_electrical_power(double omega, double coeff);

// Static comparison row (not simulated): the rolling-cage hybrid quadrotor
// the energy table benchmarks against.
struct ComparisonVehicle {
  const char* name;
  double time_s;
  double distance_m;
  double capacity_mah;
  double voltage;
  double mass_kg;
};
inline constexpr ComparisonVehicle kHytaqReference{"HyTAQ", 27.0 * 60.0, 2400.0, 1350.0,
                                                   11.1, 0.45};

}  // namespace roller::sim
