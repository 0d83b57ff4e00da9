#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spikecim/config.hpp"
#include "spikecim/errors.hpp"
#include "spikecim/units.hpp"

namespace spikecim {

// One dual-spike input: the digital magnitude lives entirely in the
// interval between the two spike times, never in their absolute position.
struct SpikePair {
  Femtoseconds t_first_fs = 0;
  Femtoseconds t_second_fs = 0;
};

inline Femtoseconds interval(const SpikePair& p) { return p.t_second_fs - p.t_first_fs; }

// Per-row spike pairs for one MVM; entries.size() must equal the array rows.
struct InputVector {
  std::vector<SpikePair> entries;

  std::size_t size() const { return entries.size(); }
};

inline SpikePair encode(int digital, Femtoseconds t0, const TimingConfig& cfg) {
  if (digital < 0 || digital > cfg.max_input())
    throw EncodingError("input value " + std::to_string(digital) + " outside [0, " +
                        std::to_string(cfg.max_input()) + "]");
  if (t0 < 0) throw EncodingError("spike start time must be >= 0");
  return SpikePair{t0, t0 + static_cast<Femtoseconds>(digital) * cfg.dt_lsb_fs};
}

inline InputVector encode_vector(std::span<const int> digits, const TimingConfig& cfg,
                                 Femtoseconds t0 = 0) {
  InputVector v;
  v.entries.reserve(digits.size());
  for (int d : digits) v.entries.push_back(encode(d, t0, cfg));
  return v;
}

// Per-row start offsets; results are interval-coded, so offsets must not
// change any decoded value.
inline InputVector encode_vector(std::span<const int> digits,
                                 std::span<const Femtoseconds> t0s,
                                 const TimingConfig& cfg) {
  if (digits.size() != t0s.size())
    throw DimensionError("encode_vector: digits and offsets differ in length");
  InputVector v;
  v.entries.reserve(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i)
    v.entries.push_back(encode(digits[i], t0s[i], cfg));
  return v;
}

// Maps an output spike interval back to the MAC value sum(T_in,i * G_i)
// in siemens-seconds.
inline double decode_interval(double t_out_s, double alpha_ohm) {
  if (!(alpha_ohm > 0)) throw ValidationError("decode_interval: alpha must be > 0");
  return t_out_s / alpha_ohm;
}

}  // namespace spikecim
