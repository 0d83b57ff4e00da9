#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "spikecim/errors.hpp"
#include "spikecim/units.hpp"

namespace spikecim {

// Dual-spike input timing. One LSB of the digital input maps to dt_lsb_fs
// of inter-spike interval, so an 8-bit value spans 0..51 ns at the default
// 0.2 ns per LSB.
struct TimingConfig {
  Femtoseconds dt_lsb_fs = 200'000;  // 0.2 ns
  int input_bits = 8;

  int max_input() const { return (1 << input_bits) - 1; }

  void validate() const {
    if (dt_lsb_fs <= 0) throw ValidationError("timing: dt_lsb_fs must be > 0");
    if (input_bits < 1 || input_bits > 24)
      throw ValidationError("timing: input_bits must be in [1, 24]");
  }
};

// MTJ and array parameters. The low-resistance state of J1 is r_lrs_ohm;
// J2 is built with twice that resistance. variation_sigma applies a
// per-cell multiplicative lognormal factor to both junctions (0 = ideal).
struct DeviceConfig {
  double r_lrs_ohm = 1e6;
  double tmr = 1.0;  // (R_high - R_low) / R_low
  double variation_sigma = 0.0;
  std::uint64_t variation_seed = 0;

  void validate() const {
    if (!(r_lrs_ohm > 0)) throw ValidationError("device: r_lrs_ohm must be > 0");
    if (!(tmr >= 0)) throw ValidationError("device: tmr must be >= 0");
    if (!(variation_sigma >= 0))
      throw ValidationError("device: variation_sigma must be >= 0");
  }
};

// Readout model selector. Ideal uses the clamp + current-mirror path with
// strictly linear capacitor charging; Nonideal charges the result capacitor
// straight from the bit line, which droops exponentially toward v_read.
enum class SenseMode { Ideal, Nonideal };

inline const char* to_string(SenseMode m) {
  return m == SenseMode::Ideal ? "ideal" : "nonideal";
}

inline SenseMode sense_mode_from_string(const std::string& s) {
  if (s == "ideal") return SenseMode::Ideal;
  if (s == "nonideal") return SenseMode::Nonideal;
  throw ValidationError("mode must be \"ideal\" or \"nonideal\", got \"" + s + "\"");
}

// All circuit constants of one macro. Defaults model a 128x128 array with
// a 100 mV effective read voltage, 200 fF result/reference capacitors and
// a 20 uA comparison ramp, which puts the proportionality constant at
// 5000 ohm and the worst-case accumulated voltage at 1.088 V.
struct MacroConfig {
  std::size_t rows = 128;
  std::size_t cols = 128;

  double v_clamp_v = 0.4;     // bit-line clamp
  double v_in_clamp_v = 0.3;  // input clamp during an active spike interval
  double c_rt_f = 200e-15;    // result capacitor
  double c_com_f = 200e-15;   // reference ramp capacitor
  double k_mirror = 1.0;      // current-mirror gain
  double i_com_a = 20e-6;     // reference ramp current
  double vdd_v = 1.1;
  double sat_margin_v = 0.0;  // saturation is flagged above vdd - margin

  // Comparator hooks for sensitivity studies; zero keeps it ideal.
  double comparator_offset_v = 0.0;
  double comparator_delay_s = 0.0;

  TimingConfig timing;
  DeviceConfig device;

  double v_read_v() const { return v_clamp_v - v_in_clamp_v; }
  double saturation_limit_v() const { return vdd_v - sat_margin_v; }

  void validate() const {
    if (rows == 0 || cols == 0) throw ValidationError("macro: rows/cols must be >= 1");
    if (!(v_read_v() > 0))
      throw ValidationError("macro: v_clamp_v must exceed v_in_clamp_v");
    if (!(v_clamp_v <= vdd_v)) throw ValidationError("macro: v_clamp_v must be <= vdd_v");
    if (!(c_rt_f > 0)) throw ValidationError("macro: c_rt_f must be > 0");
    if (!(c_com_f > 0)) throw ValidationError("macro: c_com_f must be > 0");
    if (!(k_mirror > 0)) throw ValidationError("macro: k_mirror must be > 0");
    if (!(i_com_a > 0)) throw ValidationError("macro: i_com_a must be > 0");
    if (!(vdd_v > 0)) throw ValidationError("macro: vdd_v must be > 0");
    if (!(sat_margin_v >= 0)) throw ValidationError("macro: sat_margin_v must be >= 0");
    if (!(comparator_delay_s >= 0))
      throw ValidationError("macro: comparator_delay_s must be >= 0");
    timing.validate();
    device.validate();
  }
};

}  // namespace spikecim
