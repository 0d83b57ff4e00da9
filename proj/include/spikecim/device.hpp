#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "spikecim/config.hpp"
#include "spikecim/errors.hpp"

namespace spikecim {

enum class MtjState { LowRes, HighRes };

struct MtjDevice {
  double r_low_ohm = 1e6;
  double tmr = 1.0;
  MtjState state = MtjState::HighRes;
};

inline double mtj_resistance(const MtjDevice& d) {
  return d.state == MtjState::LowRes ? d.r_low_ohm : d.r_low_ohm * (1.0 + d.tmr);
}

// Read path of one 3T-2MTJ cell: the two junctions in series, with the
// access transistors off. J2 carries twice the base resistance of J1 so
// the four state combinations give four distinct levels.
struct Cell3T2J {
  MtjDevice j1;
  MtjDevice j2;
};

inline double cell_resistance(const Cell3T2J& c) {
  return mtj_resistance(c.j1) + mtj_resistance(c.j2);
}

inline double cell_conductance(const Cell3T2J& c) {
  return 1.0 / cell_resistance(c);
}

// 2-bit weight. Bit 0 drives J1, bit 1 drives J2; a set bit selects the
// low-resistance state, so read-path resistance is base_r * (6 - w) at
// tmr = 1 and cell conductance is strictly increasing in the code value.
class WeightCode {
 public:
  static constexpr int max_value = 3;

  explicit WeightCode(int v) : value_(v) {
    if (v < 0 || v > max_value)
      throw EncodingError("weight code " + std::to_string(v) + " outside [0, 3]");
  }

  int value() const { return value_; }
  bool j1_low() const { return (value_ & 1) != 0; }
  bool j2_low() const { return (value_ & 2) != 0; }

  friend bool operator==(WeightCode a, WeightCode b) { return a.value_ == b.value_; }

 private:
  int value_;
};

inline Cell3T2J program_cell(WeightCode w, double base_r_ohm, double tmr = 1.0) {
  if (!(base_r_ohm > 0)) throw ValidationError("program_cell: base_r_ohm must be > 0");
  if (!(tmr >= 0)) throw ValidationError("program_cell: tmr must be >= 0");
  Cell3T2J cell;
  cell.j1 = {base_r_ohm, tmr, w.j1_low() ? MtjState::LowRes : MtjState::HighRes};
  cell.j2 = {2.0 * base_r_ohm, tmr, w.j2_low() ? MtjState::LowRes : MtjState::HighRes};
  return cell;
}

// Inverse of program_cell. Matches the measured read-path resistance
// against the four nominal levels derived from j1; anything else (drifted
// junctions, a J2 that is not twice J1) is reported as corruption.
inline WeightCode read_weight(const Cell3T2J& cell) {
  const double r = cell_resistance(cell);
  const double base = cell.j1.r_low_ohm;
  const double tmr = cell.j1.tmr;
  for (int w = 0; w <= WeightCode::max_value; ++w) {
    const double r1 = (w & 1) ? base : base * (1.0 + tmr);
    const double r2 = (w & 2) ? 2.0 * base : 2.0 * base * (1.0 + tmr);
    const double expected = r1 + r2;
    if (std::abs(r - expected) <= 1e-9 * expected) return WeightCode(w);
  }
  throw CorruptionError("cell resistance " + std::to_string(r) +
                        " ohm matches none of the four programmable states");
}

// Row-major matrix of 2-bit weight values.
struct WeightMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> values;  // each in [0, 3]

  static WeightMatrix filled(std::size_t r, std::size_t c, std::uint8_t v) {
    return WeightMatrix{r, c, std::vector<std::uint8_t>(r * c, v)};
  }

  std::uint8_t at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::uint8_t& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
};

// Programmed crossbar. Immutable after construction; conductances are the
// per-cell read-path values used as MVM weights.
class CrossbarArray {
 public:
  CrossbarArray(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), cells_(rows * cols), g_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const Cell3T2J& cell(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }
  Cell3T2J& cell(std::size_t r, std::size_t c) { return cells_[r * cols_ + c]; }

  double conductance(std::size_t r, std::size_t c) const { return g_[r * cols_ + c]; }
  void set_conductance(std::size_t r, std::size_t c, double g) { g_[r * cols_ + c] = g; }

  std::span<const double> conductance_row(std::size_t r) const {
    return {g_.data() + r * cols_, cols_};
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Cell3T2J> cells_;
  std::vector<double> g_;
};

inline CrossbarArray program_array(const WeightMatrix& weights, const MacroConfig& cfg) {
  if (weights.rows == 0 || weights.cols == 0)
    throw DimensionError("program_array: empty weight matrix");
  if (weights.rows > cfg.rows || weights.cols > cfg.cols)
    throw DimensionError("program_array: " + std::to_string(weights.rows) + "x" +
                         std::to_string(weights.cols) + " exceeds configured array " +
                         std::to_string(cfg.rows) + "x" + std::to_string(cfg.cols));
  if (weights.values.size() != weights.rows * weights.cols)
    throw DimensionError("program_array: value count does not match rows*cols");

  std::mt19937_64 rng(cfg.device.variation_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const bool vary = cfg.device.variation_sigma > 0.0;

  CrossbarArray array(weights.rows, weights.cols);
  for (std::size_t r = 0; r < weights.rows; ++r) {
    for (std::size_t c = 0; c < weights.cols; ++c) {
      const std::uint8_t v = weights.at(r, c);
      if (v > WeightCode::max_value)
        throw EncodingError("program_array: weight " + std::to_string(int(v)) +
                            " at row " + std::to_string(r) + ", col " + std::to_string(c) +
                            " outside [0, 3]");
      // One multiplicative factor per cell keeps the J2 = 2*J1 ratio, so a
      // varied cell still reads back as its programmed code.
      const double factor = vary ? std::exp(cfg.device.variation_sigma * gauss(rng)) : 1.0;
      Cell3T2J cell = program_cell(WeightCode(v), cfg.device.r_lrs_ohm * factor,
                                   cfg.device.tmr);
      array.cell(r, c) = cell;
      array.set_conductance(r, c, cell_conductance(cell));
    }
  }
  return array;
}

}  // namespace spikecim
