#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "spikecim/analog.hpp"
#include "spikecim/config.hpp"
#include "spikecim/device.hpp"
#include "spikecim/engine.hpp"
#include "spikecim/errors.hpp"
#include "spikecim/rational.hpp"
#include "spikecim/spike.hpp"

namespace spikecim {

// Exact per-column MAC value in units of dt_lsb / r_lrs. Kept rational so
// the reference never shares a floating-point path with the engine.
struct ExactMacValue {
  Rational64 units;  // sum of d_i / (6 - w_i)

  double to_siemens_seconds(const MacroConfig& cfg) const {
    return units.to_double() * to_seconds(cfg.timing.dt_lsb_fs) / cfg.device.r_lrs_ohm;
  }
};

// Reference MAC for one column: sum(d_i * dt_lsb / (r_lrs * (6 - w_i))),
// evaluated in integer arithmetic over a fixed denominator of 60 (the lcm
// of the four read-path levels 3..6). Requires the tmr = 1 device, where
// resistance is affine in the weight code.
inline ExactMacValue exact_mac_column(std::span<const int> digital_inputs,
                                      std::span<const std::uint8_t> weights,
                                      const MacroConfig& cfg) {
  if (digital_inputs.size() != weights.size())
    throw DimensionError("exact_mac_column: inputs and weights differ in length");
  if (cfg.device.tmr != 1.0)
    throw ValidationError("exact oracle requires tmr = 1.0");
  if (cfg.device.variation_sigma != 0.0)
    throw ValidationError("exact oracle requires variation_sigma = 0");
  std::int64_t sum60 = 0;  // value * 60
  for (std::size_t i = 0; i < digital_inputs.size(); ++i) {
    const int d = digital_inputs[i];
    if (d < 0 || d > cfg.timing.max_input())
      throw EncodingError("exact_mac_column: input out of range");
    const int w = weights[i];
    if (w > WeightCode::max_value) throw EncodingError("exact_mac_column: weight out of range");
    sum60 += static_cast<std::int64_t>(d) * (60 / (6 - w));
  }
  return ExactMacValue{Rational64(sum60, 60)};
}

inline std::vector<ExactMacValue> exact_mac_oracle(std::span<const int> digital_inputs,
                                                   const WeightMatrix& weights,
                                                   const MacroConfig& cfg) {
  if (digital_inputs.size() != weights.rows)
    throw DimensionError("exact_mac_oracle: input length does not match weight rows");
  std::vector<ExactMacValue> out;
  out.reserve(weights.cols);
  std::vector<std::uint8_t> column(weights.rows);
  for (std::size_t c = 0; c < weights.cols; ++c) {
    for (std::size_t r = 0; r < weights.rows; ++r) column[r] = weights.at(r, c);
    out.push_back(exact_mac_column(digital_inputs, column, cfg));
  }
  return out;
}

// Least-squares line fit with centered sums. Zero x-variance is reported
// through the degenerate flag instead of dividing by it.
struct LineFit {
  std::size_t n = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  bool degenerate = false;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("fit_line: x and y differ in length");
  LineFit fit;
  fit.n = x.size();
  if (fit.n < 2) {
    fit.degenerate = true;
    return fit;
  }
  long double mean_x = 0.0L, mean_y = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<long double>(fit.n);
  mean_y /= static_cast<long double>(fit.n);

  long double sxx = 0.0L, sxy = 0.0L, syy = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double dx = x[i] - mean_x;
    const long double dy = y[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0L) {
    fit.degenerate = true;
    return fit;
  }
  const long double slope = sxy / sxx;
  fit.slope = static_cast<double>(slope);
  fit.intercept = static_cast<double>(mean_y - slope * mean_x);

  // Residual route: robust when the fit is many digits better than the
  // spread of y, where the product-moment form of r^2 cancels away.
  long double ss_res = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double r = y[i] - (slope * (x[i] - mean_x) + mean_y);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0L ? static_cast<double>(1.0L - ss_res / syy) : 1.0;
  return fit;
}

struct SweepPoint {
  std::size_t case_id = 0;
  double sum_tg_ss = 0.0;  // exact oracle value, siemens-seconds
  double t_out_s = 0.0;    // engine output interval
};

struct SweepReport {
  std::size_t n_cases = 0;
  std::size_t n_points = 0;
  double max_rel_error = 0.0;  // decoded engine output vs exact oracle
  double r_squared = 0.0;
  double slope = 0.0;      // ideal mode: alpha(cfg)
  double intercept = 0.0;  // ideal mode: 0
  bool degenerate = false;
};

namespace detail {

// Bounded draws via masking; both ranges are powers of two, so this is
// uniform and independent of any library distribution implementation.
inline int draw_masked(std::mt19937_64& rng, int mask) {
  return static_cast<int>(rng() & static_cast<std::uint64_t>(mask));
}

}  // namespace detail

// Seeded uniform random (input, weight) cases on a rows x cols array, run
// through the event engine and regressed against the exact oracle. One
// point per column per case.
inline SweepReport linearity_sweep(std::size_t n_cases, std::uint64_t seed,
                                   const MacroConfig& cfg, SenseMode mode,
                                   std::vector<SweepPoint>* scatter = nullptr) {
  if (n_cases < 2) throw ValidationError("linearity_sweep: need at least 2 cases");
  cfg.validate();

  std::mt19937_64 rng(seed);
  const int d_mask = cfg.timing.max_input();

  std::vector<double> xs, ys;
  xs.reserve(n_cases * cfg.cols);
  ys.reserve(n_cases * cfg.cols);
  double max_rel = 0.0;

  WeightMatrix weights{cfg.rows, cfg.cols, std::vector<std::uint8_t>(cfg.rows * cfg.cols)};
  std::vector<int> digits(cfg.rows);

  for (std::size_t id = 0; id < n_cases; ++id) {
    for (auto& w : weights.values)
      w = static_cast<std::uint8_t>(detail::draw_masked(rng, WeightCode::max_value));
    for (auto& d : digits) d = detail::draw_masked(rng, d_mask);

    const CrossbarArray array = program_array(weights, cfg);
    const InputVector inputs = encode_vector(digits, cfg.timing);
    const MvmResult result = run_mvm(array, inputs, cfg, mode);
    const std::vector<ExactMacValue> oracle = exact_mac_oracle(digits, weights, cfg);
    const double a = alpha(cfg);

    for (std::size_t c = 0; c < cfg.cols; ++c) {
      const double x = oracle[c].to_siemens_seconds(cfg);
      const double y = result.t_out_s[c];
      xs.push_back(x);
      ys.push_back(y);
      if (scatter) scatter->push_back({id, x, y});
      const double decoded = decode_interval(y, a);
      const double rel = x != 0.0 ? std::abs(decoded - x) / x
                                  : (decoded == 0.0 ? 0.0
                                                    : std::numeric_limits<double>::infinity());
      if (rel > max_rel) max_rel = rel;
    }
  }

  const LineFit fit = fit_line(xs, ys);
  SweepReport report;
  report.n_cases = n_cases;
  report.n_points = xs.size();
  report.max_rel_error = max_rel;
  report.r_squared = fit.r_squared;
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  report.degenerate = fit.degenerate;
  return report;
}

// One row of the with/without clamp + current mirror comparison.
struct NonidealRow {
  double t_s = 0.0;
  double v_ideal_v = 0.0;
  double v_nonideal_v = 0.0;
  double degradation = 0.0;
};

// Charging comparison at a constant total conductance. The ideal column is
// the mirror-path linear ramp; the nonideal column is the direct-charging
// exponential, so the gap is exactly the single-pole droop at k = 1.
inline std::vector<NonidealRow> nonideal_comparison(std::span<const double> durations_s,
                                                    double g_total_s,
                                                    const MacroConfig& cfg) {
  if (durations_s.empty()) throw ValidationError("nonideal_comparison: no durations");
  if (g_total_s < 0) throw ValidationError("nonideal_comparison: conductance must be >= 0");
  std::vector<NonidealRow> rows;
  rows.reserve(durations_s.size());
  for (double t : durations_s) {
    if (!(t > 0)) throw ValidationError("nonideal_comparison: durations must be > 0");
    NonidealRow row;
    row.t_s = t;
    row.v_ideal_v = cfg.k_mirror * cfg.v_read_v() * g_total_s * t / cfg.c_rt_f;
    const double x = g_total_s * t / cfg.c_rt_f;
    row.v_nonideal_v = cfg.v_read_v() * -std::expm1(-x);
    row.degradation = row.v_ideal_v > 0 ? degradation(row.v_nonideal_v, row.v_ideal_v) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

// Row/column partition of an oversized matrix into engine-sized tiles.
struct TilePlan {
  struct Range {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
  };
  std::vector<Range> row_tiles;
  std::vector<Range> col_tiles;
};

inline TilePlan make_tile_plan(std::size_t rows, std::size_t cols, std::size_t max_rows,
                               std::size_t max_cols) {
  if (rows == 0 || cols == 0) throw DimensionError("make_tile_plan: empty matrix");
  if (max_rows == 0 || max_cols == 0)
    throw ValidationError("make_tile_plan: tile dimensions must be >= 1");
  TilePlan plan;
  for (std::size_t r = 0; r < rows; r += max_rows)
    plan.row_tiles.push_back({r, std::min(r + max_rows, rows)});
  for (std::size_t c = 0; c < cols; c += max_cols)
    plan.col_tiles.push_back({c, std::min(c + max_cols, cols)});
  return plan;
}

// MVM over a matrix larger than one macro: each tile runs through the
// engine, outputs are decoded to siemens-seconds and summed per column in
// ascending tile order. Decoding is linear, so tile boundaries must not
// change the result.
inline std::vector<double> tile_matrix(const WeightMatrix& weights,
                                       std::span<const int> digital_inputs,
                                       const MacroConfig& cfg,
                                       SenseMode mode = SenseMode::Ideal,
                                       const TilePlan* plan = nullptr) {
  if (weights.rows == 0 || weights.cols == 0) throw DimensionError("tile_matrix: empty matrix");
  if (digital_inputs.size() != weights.rows)
    throw DimensionError("tile_matrix: input length does not match matrix rows");

  TilePlan default_plan;
  if (!plan) {
    default_plan = make_tile_plan(weights.rows, weights.cols, cfg.rows, cfg.cols);
    plan = &default_plan;
  }
  const double a = alpha(cfg);

  std::vector<double> decoded(weights.cols, 0.0);
  for (const auto& rt : plan->row_tiles) {
    for (const auto& ct : plan->col_tiles) {
      const std::size_t tr = rt.end - rt.begin;
      const std::size_t tc = ct.end - ct.begin;
      if (tr > cfg.rows || tc > cfg.cols)
        throw ValidationError("tile_matrix: plan tile exceeds configured array size");
      WeightMatrix tile{tr, tc, std::vector<std::uint8_t>(tr * tc)};
      for (std::size_t r = 0; r < tr; ++r)
        for (std::size_t c = 0; c < tc; ++c)
          tile.at(r, c) = weights.at(rt.begin + r, ct.begin + c);
      std::vector<int> tile_inputs(digital_inputs.begin() + rt.begin,
                                   digital_inputs.begin() + rt.end);

      const CrossbarArray array = program_array(tile, cfg);
      const InputVector inputs = encode_vector(tile_inputs, cfg.timing);
      const MvmResult result = run_mvm(array, inputs, cfg, mode);
      for (std::size_t c = 0; c < tc; ++c)
        decoded[ct.begin + c] += decode_interval(result.t_out_s[c], a);
    }
  }
  return decoded;
}

// Removes the floor conductance of the all-high-resistance state: returns
// sum(T_i * (G(w_i) - G(0))) so an all-zero weight column decodes to zero.
inline std::vector<double> baseline_correct(std::span<const double> decoded_ss,
                                            const InputVector& inputs,
                                            const MacroConfig& cfg) {
  const double g_floor = 1.0 / (cfg.device.r_lrs_ohm * (3.0 + 3.0 * cfg.device.tmr));
  double sum_t_s = 0.0;
  for (const SpikePair& p : inputs.entries) sum_t_s += to_seconds(interval(p));
  std::vector<double> corrected(decoded_ss.begin(), decoded_ss.end());
  for (double& v : corrected) v -= g_floor * sum_t_s;
  return corrected;
}

}  // namespace spikecim
