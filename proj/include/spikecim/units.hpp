#pragma once

#include <cmath>
#include <cstdint>

namespace spikecim {

// Event times are integer femtoseconds so that spike schedules and their
// ordering are exact. All configured timing constants (0.2 ns per LSB and
// everything derived from it) are representable without rounding.
using Femtoseconds = std::int64_t;

inline constexpr double fs_per_second = 1e15;
inline constexpr Femtoseconds fs_per_ps = 1'000;
inline constexpr Femtoseconds fs_per_ns = 1'000'000;

constexpr double to_seconds(Femtoseconds t) {
  return static_cast<double>(t) / fs_per_second;
}

// For file output only; analysis paths keep durations in double seconds
// because comparator crossings are not fs-aligned in general.
inline Femtoseconds to_femtoseconds(double seconds) {
  return static_cast<Femtoseconds>(std::llround(seconds * fs_per_second));
}

}  // namespace spikecim
