#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "spikecim/analog.hpp"
#include "spikecim/config.hpp"
#include "spikecim/device.hpp"
#include "spikecim/errors.hpp"
#include "spikecim/spike.hpp"
#include "spikecim/units.hpp"

namespace spikecim {

// Enumerator order doubles as the tie-break rank for simultaneous events:
// a row ending exactly when another starts must release its conductance
// first, and the global flag falls only after the last row has ended.
enum class EventKind : int {
  SpikeFall = 0,
  SpikeRise = 1,
  GlobalFlagFall = 2,
  ComparatorCross = 3,
};

struct Event {
  Femtoseconds t_fs = 0;
  EventKind kind = EventKind::SpikeRise;
  std::size_t index = 0;  // row for spike events, column for crossings

  friend bool operator<(const Event& a, const Event& b) {
    return std::tie(a.t_fs, a.kind, a.index) < std::tie(b.t_fs, b.kind, b.index);
  }
  friend bool operator==(const Event& a, const Event& b) {
    return a.t_fs == b.t_fs && a.kind == b.kind && a.index == b.index;
  }
};

enum class Phase { Idle, Accumulating, Comparing, Done };

// Live state of one macro during an MVM. row_flags mirror the per-row
// Event_flag_i pulses; global_flag is their OR while input events are
// pending.
struct MacroState {
  std::vector<std::uint8_t> row_flags;
  bool global_flag = false;
  std::vector<ChargeState> column_charge;
  Phase phase = Phase::Idle;
};

struct TraceRow {
  Femtoseconds t_fs = 0;
  std::string signal;
  double value = 0.0;
};

struct MvmResult {
  Femtoseconds t_first_out_fs = 0;      // global flag fall = first output spike
  std::vector<double> t_out_s;          // per-column output spike interval
  std::vector<double> v_charge_v;       // per-column final capacitor voltage
  std::vector<std::uint8_t> saturated;  // per-column headroom flag
  std::size_t event_count = 0;
  std::optional<std::vector<TraceRow>> trace;
};

// Expands an input vector into the sorted spike event queue. Rows with a
// zero-length interval contribute nothing, which is what keeps the engine's
// work proportional to the number of active rows.
inline std::vector<Event> schedule_inputs(const InputVector& inputs) {
  std::vector<Event> queue;
  queue.reserve(2 * inputs.size());
  for (std::size_t row = 0; row < inputs.entries.size(); ++row) {
    const SpikePair& p = inputs.entries[row];
    if (p.t_first_fs < 0) throw ValidationError("schedule_inputs: negative spike time");
    if (p.t_second_fs < p.t_first_fs)
      throw ValidationError("schedule_inputs: spike pair out of order");
    if (interval(p) == 0) continue;
    queue.push_back({p.t_first_fs, EventKind::SpikeRise, row});
    queue.push_back({p.t_second_fs, EventKind::SpikeFall, row});
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

// Runs one matrix-vector multiplication through the event loop. Between
// consecutive events each column sees a constant driving conductance, so
// the charge update per segment is closed-form: linear for the ideal
// mirror path, a single exponential for direct bit-line charging. The
// comparator phase is pure arithmetic - the ramp crossing needs no events.
inline MvmResult run_mvm(const CrossbarArray& array, const InputVector& inputs,
                         const MacroConfig& cfg, SenseMode mode,
                         bool capture_trace = false) {
  if (inputs.size() != array.rows())
    throw DimensionError("run_mvm: input vector length " + std::to_string(inputs.size()) +
                         " does not match array rows " + std::to_string(array.rows()));

  const std::size_t cols = array.cols();
  const std::vector<Event> queue = schedule_inputs(inputs);

  MacroState state;
  state.row_flags.assign(array.rows(), 0);
  state.column_charge.assign(cols, ChargeState{});
  state.phase = Phase::Accumulating;

  MvmResult result;
  result.t_out_s.assign(cols, 0.0);
  result.v_charge_v.assign(cols, 0.0);
  result.saturated.assign(cols, 0);
  if (capture_trace) result.trace.emplace();

  auto trace_put = [&](Femtoseconds t, const std::string& signal, double value) {
    if (result.trace) result.trace->push_back({t, signal, value});
  };

  std::vector<double> g_active(cols, 0.0);
  std::vector<double>& v = result.v_charge_v;
  const double limit = cfg.saturation_limit_v();
  const double ideal_coef = cfg.k_mirror * cfg.v_read_v() / cfg.c_rt_f;

  auto advance = [&](Femtoseconds from, Femtoseconds to) {
    if (to <= from) return;
    const double dt_s = to_seconds(to - from);
    if (mode == SenseMode::Ideal) {
      for (std::size_t c = 0; c < cols; ++c) v[c] += ideal_coef * g_active[c] * dt_s;
    } else {
      for (std::size_t c = 0; c < cols; ++c)
        v[c] = nonideal_segment_advance(v[c], g_active[c], dt_s, cfg);
    }
    for (std::size_t c = 0; c < cols; ++c)
      if (v[c] > limit) result.saturated[c] = 1;
    if (result.trace)
      for (std::size_t c = 0; c < cols; ++c)
        trace_put(to, "v_charge_" + std::to_string(c), v[c]);
  };

  // The global flag falls with the last spike of the schedule; the queue
  // is sorted, so that is simply the final entry.
  const Femtoseconds flag_fall_fs = queue.empty() ? 0 : queue.back().t_fs;

  Femtoseconds cursor = 0;
  for (const Event& e : queue) {
    advance(cursor, e.t_fs);
    cursor = e.t_fs;
    const std::size_t row = e.index;
    if (e.kind == EventKind::SpikeRise) {
      if (!state.global_flag) {
        state.global_flag = true;
        trace_put(cursor, "event_flag", 1.0);
      }
      state.row_flags[row] = 1;
      trace_put(cursor, "row_flag_" + std::to_string(row), 1.0);
      const auto g_row = array.conductance_row(row);
      for (std::size_t c = 0; c < cols; ++c) g_active[c] += g_row[c];
    } else {
      state.row_flags[row] = 0;
      trace_put(cursor, "row_flag_" + std::to_string(row), 0.0);
      const auto g_row = array.conductance_row(row);
      for (std::size_t c = 0; c < cols; ++c) g_active[c] -= g_row[c];
    }
    ++result.event_count;
  }

  // Global flag fall: charging stops, the first output spike fires and the
  // reference ramp starts.
  if (!queue.empty()) {
    state.global_flag = false;
    ++result.event_count;
    trace_put(flag_fall_fs, "event_flag", 0.0);
  }
  result.t_first_out_fs = flag_fall_fs;
  state.phase = Phase::Comparing;

  for (std::size_t c = 0; c < cols; ++c) {
    state.column_charge[c] = ChargeState{v[c], result.saturated[c] != 0};
    result.t_out_s[c] = output_interval(v[c], cfg);
    ++result.event_count;
    trace_put(flag_fall_fs + to_femtoseconds(result.t_out_s[c]),
              "comparator_cross_" + std::to_string(c), v[c]);
  }
  state.phase = Phase::Done;
  if (result.trace)
    std::stable_sort(result.trace->begin(), result.trace->end(),
                     [](const TraceRow& a, const TraceRow& b) { return a.t_fs < b.t_fs; });
  return result;
}

inline std::vector<MvmResult> run_mvm_batch(const CrossbarArray& array,
                                            const std::vector<InputVector>& batch,
                                            const MacroConfig& cfg, SenseMode mode) {
  std::vector<MvmResult> results;
  results.reserve(batch.size());
  for (const InputVector& inputs : batch)
    results.push_back(run_mvm(array, inputs, cfg, mode));
  return results;
}

}  // namespace spikecim
