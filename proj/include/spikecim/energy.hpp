#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>

#include "spikecim/errors.hpp"

namespace spikecim {

// Share of total power per macro component. The OSG share is the design's
// reported value; the remaining split is an uncalibrated placeholder and
// is labelled as such in every rendered report.
struct PowerBreakdown {
  double osg = 0.726;
  double smu = 0.12;
  double array = 0.10;
  double control = 0.054;

  double sum() const { return osg + smu + array + control; }

  void validate() const {
    if (osg < 0 || smu < 0 || array < 0 || control < 0)
      throw ValidationError("breakdown: fractions must be >= 0");
    if (std::abs(sum() - 1.0) > 1e-9)
      throw ValidationError("breakdown: fractions must sum to 1.0");
  }
};

// e_mvm_j is the calibration constant tying the accounting to the design's
// reference efficiency: 32768 ops per 128x128 MVM at 243.6 TOPS/W gives
// 134.52 pJ. It is a fit, not a prediction, and can be overridden.
struct EnergyConfig {
  double e_mvm_j = 134.52e-12;
  PowerBreakdown breakdown;
  int ops_per_mac = 2;

  void validate() const {
    if (!(e_mvm_j > 0)) throw ValidationError("energy: e_mvm_j must be > 0");
    if (ops_per_mac != 1 && ops_per_mac != 2)
      throw ValidationError("energy: ops_per_mac must be 1 or 2");
    breakdown.validate();
  }
};

struct EnergyReport {
  std::size_t n_mvm = 0;
  std::uint64_t ops = 0;
  double total_energy_j = 0.0;
  double osg_j = 0.0;
  double smu_j = 0.0;
  double array_j = 0.0;
  double control_j = 0.0;
  double tops_per_watt = 0.0;
};

inline std::uint64_t ops_count(std::size_t rows, std::size_t cols, int ops_per_mac) {
  if (rows == 0 || cols == 0) throw ValidationError("ops_count: dimensions must be >= 1");
  if (ops_per_mac != 1 && ops_per_mac != 2)
    throw ValidationError("ops_count: ops_per_mac must be 1 or 2");
  return static_cast<std::uint64_t>(rows) * cols * static_cast<std::uint64_t>(ops_per_mac);
}

// TOPS/W == tera-ops per joule-per-second == ops per picojoule.
inline double efficiency_tops_per_watt(std::uint64_t ops, double total_energy_j) {
  if (!(total_energy_j > 0))
    throw ValidationError("efficiency: total energy must be > 0");
  return static_cast<double>(ops) / total_energy_j / 1e12;
}

inline EnergyReport energy_report(std::size_t n_mvm, const EnergyConfig& cfg,
                                  std::size_t rows, std::size_t cols) {
  cfg.validate();
  EnergyReport r;
  r.n_mvm = n_mvm;
  r.ops = static_cast<std::uint64_t>(n_mvm) * ops_count(rows, cols, cfg.ops_per_mac);
  r.total_energy_j = static_cast<double>(n_mvm) * cfg.e_mvm_j;
  r.osg_j = cfg.breakdown.osg * r.total_energy_j;
  r.smu_j = cfg.breakdown.smu * r.total_energy_j;
  r.array_j = cfg.breakdown.array * r.total_energy_j;
  r.control_j = cfg.breakdown.control * r.total_energy_j;
  r.tops_per_watt = n_mvm > 0 ? efficiency_tops_per_watt(r.ops, r.total_energy_j) : 0.0;
  return r;
}

inline std::string render_energy_text(const EnergyReport& r) {
  std::ostringstream os;
  os.precision(9);
  os << "n_mvm=" << r.n_mvm << "\n";
  os << "ops=" << r.ops << "\n";
  os << "total_energy_j=" << r.total_energy_j << "\n";
  os << "osg_energy_j=" << r.osg_j << "\n";
  os << "smu_energy_j=" << r.smu_j << "  # uncalibrated split\n";
  os << "array_energy_j=" << r.array_j << "  # uncalibrated split\n";
  os << "control_energy_j=" << r.control_j << "  # uncalibrated split\n";
  os << "tops_per_watt=" << r.tops_per_watt << "\n";
  return os.str();
}

inline std::string render_energy_csv(const EnergyReport& r) {
  std::ostringstream os;
  os.precision(9);
  os << "component,energy_j,calibrated\n";
  os << "osg," << r.osg_j << ",yes\n";
  os << "smu," << r.smu_j << ",no\n";
  os << "array," << r.array_j << ",no\n";
  os << "control," << r.control_j << ",no\n";
  os << "total," << r.total_energy_j << ",yes\n";
  return os.str();
}

}  // namespace spikecim
