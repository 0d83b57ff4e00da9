#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "spikecim/config.hpp"
#include "spikecim/errors.hpp"
#include "spikecim/units.hpp"

namespace spikecim {

// Proportionality constant between the output interval and the weighted
// input-interval sum: T_out = alpha * sum(T_in,i * G_i). Derived from the
// charge balance k*V_read*sum(T*G) = C_rt*V_charge and V_charge =
// I_com*T_out/C_com, which puts the capacitor ratio C_com/C_rt in alpha.
// With equal capacitors this collapses to k*V_read/I_com.
inline double alpha(const MacroConfig& cfg) {
  return cfg.k_mirror * cfg.v_read_v() * cfg.c_com_f / (cfg.i_com_a * cfg.c_rt_f);
}

// Voltage accumulated on the result capacitor at the end of the charging
// window, with a flag for exceeding the supply headroom.
struct ChargeState {
  double v_charge_v = 0.0;
  bool saturated = false;
};

inline ChargeState make_charge_state(double v, const MacroConfig& cfg) {
  return ChargeState{v, v > cfg.saturation_limit_v()};
}

// Mirror-path accumulation: V_charge = (k * V_read / C_rt) * sum(T_i * G_i).
// Linear in every input interval and conductance.
inline ChargeState ideal_charge(std::span<const double> intervals_s,
                                std::span<const double> conductances_s,
                                const MacroConfig& cfg) {
  if (intervals_s.size() != conductances_s.size())
    throw DimensionError("ideal_charge: intervals and conductances differ in length");
  double sum_tg = 0.0;
  for (std::size_t i = 0; i < intervals_s.size(); ++i)
    sum_tg += intervals_s[i] * conductances_s[i];
  const double v = cfg.k_mirror * cfg.v_read_v() * sum_tg / cfg.c_rt_f;
  return make_charge_state(v, cfg);
}

// Time for the reference ramp to reach the accumulated voltage. The
// comparator hooks default to zero, making this exactly C_com * V / I_com.
inline double output_interval(double v_charge_v, const MacroConfig& cfg) {
  const double v_eff = std::max(v_charge_v + cfg.comparator_offset_v, 0.0);
  return cfg.c_com_f * v_eff / cfg.i_com_a + cfg.comparator_delay_s;
}

// One exponential segment of the direct bit-line charging path:
// dV/dt = G_tot * (V_read - V) / C_rt with G_tot constant over the segment.
inline double nonideal_segment_advance(double v, double g_total_s, double dt_s,
                                       const MacroConfig& cfg) {
  if (g_total_s <= 0.0 || dt_s <= 0.0) return v;
  const double step = -std::expm1(-g_total_s * dt_s / cfg.c_rt_f);
  return v + (cfg.v_read_v() - v) * step;
}

// Piecewise-constant total conductance: g_total_s applies from t_fs until
// the next step (or the end of the window).
struct ProfileStep {
  Femtoseconds t_fs = 0;
  double g_total_s = 0.0;
};

struct TraceSample {
  Femtoseconds t_fs = 0;
  double v_v = 0.0;
};

struct NonidealTrace {
  ChargeState final_state;
  std::vector<TraceSample> samples;
};

// Integrates the direct-charging response over [0, duration_fs] exactly,
// one closed-form exponential per profile segment. extra_samples > 0 adds
// a uniform grid on top of the segment-boundary samples.
inline NonidealTrace nonideal_charge_trace(std::span<const ProfileStep> profile,
                                           const MacroConfig& cfg,
                                           Femtoseconds duration_fs,
                                           std::size_t extra_samples = 0) {
  if (duration_fs <= 0)
    throw ValidationError("nonideal_charge_trace: duration must be > 0");
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i].g_total_s < 0)
      throw ValidationError("nonideal_charge_trace: conductance must be >= 0");
    if (profile[i].t_fs < 0 || (i > 0 && profile[i].t_fs < profile[i - 1].t_fs))
      throw ValidationError("nonideal_charge_trace: profile steps must be ordered");
  }

  // Merge segment boundaries with the optional uniform grid.
  std::vector<Femtoseconds> marks{0, duration_fs};
  for (const auto& step : profile)
    if (step.t_fs > 0 && step.t_fs < duration_fs) marks.push_back(step.t_fs);
  for (std::size_t i = 1; i < extra_samples; ++i)
    marks.push_back(static_cast<Femtoseconds>(
        static_cast<double>(duration_fs) * static_cast<double>(i) /
        static_cast<double>(extra_samples)));
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

  auto g_at = [&](Femtoseconds t) {
    double g = 0.0;
    for (const auto& step : profile) {
      if (step.t_fs <= t) g = step.g_total_s;
      else break;
    }
    return g;
  };

  NonidealTrace trace;
  double v = 0.0;
  trace.samples.push_back({0, 0.0});
  for (std::size_t i = 1; i < marks.size(); ++i) {
    const double dt_s = to_seconds(marks[i] - marks[i - 1]);
    v = nonideal_segment_advance(v, g_at(marks[i - 1]), dt_s, cfg);
    trace.samples.push_back({marks[i], v});
  }
  trace.final_state = make_charge_state(v, cfg);
  return trace;
}

// Fractional voltage loss of the direct-charging path vs the linear one.
inline double degradation(double nonideal_v, double ideal_v) {
  if (!(ideal_v > 0))
    throw ValidationError("degradation undefined: ideal voltage must be > 0");
  return std::clamp(1.0 - nonideal_v / ideal_v, 0.0, 1.0);
}

// Closed-form droop for a constant total conductance over a window of
// length t: 1 - (1 - e^-x)/x with x = G*t/C_rt.
inline double single_pole_degradation(double g_total_s, double t_s,
                                      const MacroConfig& cfg) {
  if (g_total_s < 0 || t_s < 0)
    throw ValidationError("single_pole_degradation: negative argument");
  const double x = g_total_s * t_s / cfg.c_rt_f;
  if (x == 0.0) return 0.0;
  return 1.0 + std::expm1(-x) / x;
}

// Solves single_pole_degradation(g, t) = target for g by bisection.
inline double calibrate_g_total(double target_fraction, double t_s,
                                const MacroConfig& cfg) {
  if (!(target_fraction > 0 && target_fraction < 1))
    throw ValidationError("calibrate_g_total: target fraction must be in (0, 1)");
  if (!(t_s > 0)) throw ValidationError("calibrate_g_total: time must be > 0");
  double lo = 0.0, hi = cfg.c_rt_f / t_s;
  while (single_pole_degradation(hi, t_s, cfg) < target_fraction) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (single_pole_degradation(mid, t_s, cfg) < target_fraction) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace spikecim
