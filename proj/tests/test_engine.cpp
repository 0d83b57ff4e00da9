#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "spikecim/engine.hpp"

using namespace spikecim;
using Catch::Matchers::WithinRel;

namespace {

MacroConfig defaults() { return MacroConfig{}; }

WeightMatrix random_weights(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  WeightMatrix w{rows, cols, std::vector<std::uint8_t>(rows * cols)};
  for (auto& v : w.values) v = static_cast<std::uint8_t>(rng() & 3);
  return w;
}

std::vector<int> random_digits(std::size_t rows, std::mt19937_64& rng) {
  std::vector<int> d(rows);
  for (auto& v : d) v = static_cast<int>(rng() & 0xFF);
  return d;
}

}  // namespace

TEST_CASE("schedule_inputs expands nonzero rows only") {
  const TimingConfig timing;

  SECTION("all-zero vector gives an empty queue") {
    const InputVector inputs = encode_vector(std::vector<int>{0, 0, 0}, timing);
    CHECK(schedule_inputs(inputs).empty());
  }

  SECTION("one active row contributes a rise and a fall") {
    const InputVector inputs = encode_vector(std::vector<int>{100}, timing);
    const auto queue = schedule_inputs(inputs);
    REQUIRE(queue.size() == 2);
    CHECK(queue[0] == Event{0, EventKind::SpikeRise, 0});
    CHECK(queue[1] == Event{20 * fs_per_ns, EventKind::SpikeFall, 0});
  }

  SECTION("the last fall marks the global flag window") {
    const InputVector inputs = encode_vector(std::vector<int>{100, 255}, timing);
    const auto queue = schedule_inputs(inputs);
    REQUIRE(queue.size() == 4);
    CHECK(queue.back().t_fs == 51 * fs_per_ns);
    CHECK(queue.back().kind == EventKind::SpikeFall);
  }

  SECTION("negative and inverted pairs are rejected") {
    InputVector bad;
    bad.entries.push_back({-1, 5});
    CHECK_THROWS_AS(schedule_inputs(bad), ValidationError);
    bad.entries[0] = {10, 5};
    CHECK_THROWS_AS(schedule_inputs(bad), ValidationError);
  }
}

TEST_CASE("simultaneous events order fall, rise, flag-fall, then index") {
  std::vector<Event> events{
      {100, EventKind::GlobalFlagFall, 0},
      {100, EventKind::SpikeRise, 2},
      {100, EventKind::SpikeFall, 1},
      {100, EventKind::SpikeRise, 0},
      {50, EventKind::SpikeRise, 9},
  };
  std::sort(events.begin(), events.end());
  CHECK(events[0].index == 9);
  CHECK(events[1].kind == EventKind::SpikeFall);
  CHECK(events[2] == Event{100, EventKind::SpikeRise, 0});
  CHECK(events[3] == Event{100, EventKind::SpikeRise, 2});
  CHECK(events[4].kind == EventKind::GlobalFlagFall);
}

TEST_CASE("run_mvm on an all-zero input is a zero window") {
  const MacroConfig cfg = defaults();
  const auto array = program_array(WeightMatrix::filled(8, 4, 3), cfg);
  const InputVector inputs = encode_vector(std::vector<int>(8, 0), cfg.timing);
  const MvmResult r = run_mvm(array, inputs, cfg, SenseMode::Ideal);
  CHECK(r.t_first_out_fs == 0);
  for (double t : r.t_out_s) CHECK(t == 0.0);
  for (double v : r.v_charge_v) CHECK(v == 0.0);
  // No spike events at all; only the per-column crossings are processed.
  CHECK(r.event_count == 4);
}

TEST_CASE("run_mvm reproduces the single-cell example chain") {
  const MacroConfig cfg = defaults();
  const auto array = program_array(WeightMatrix::filled(1, 1, 3), cfg);
  const InputVector inputs = encode_vector(std::vector<int>{100}, cfg.timing);
  const MvmResult r = run_mvm(array, inputs, cfg, SenseMode::Ideal);
  CHECK(r.t_first_out_fs == 20 * fs_per_ns);
  CHECK_THAT(r.t_out_s[0], WithinRel(33.333333333e-12, 1e-9));
  CHECK_THAT(r.v_charge_v[0], WithinRel(3.3333333333e-3, 1e-9));
  CHECK_FALSE(r.saturated[0]);
}

TEST_CASE("run_mvm worst case hits 10.88 ns on every column") {
  const MacroConfig cfg = defaults();
  const auto array = program_array(WeightMatrix::filled(128, 128, 3), cfg);
  const InputVector inputs = encode_vector(std::vector<int>(128, 255), cfg.timing);
  const MvmResult r = run_mvm(array, inputs, cfg, SenseMode::Ideal);
  CHECK(r.t_first_out_fs == 51 * fs_per_ns);
  for (std::size_t c = 0; c < 128; ++c) {
    CHECK_THAT(r.t_out_s[c], WithinRel(10.88e-9, 1e-9));
    CHECK_THAT(r.v_charge_v[c], WithinRel(1.088, 1e-9));
    CHECK_FALSE(r.saturated[c]);
  }
  CHECK(r.event_count == 2 * 128 + 1 + 128);
}

TEST_CASE("run_mvm validates dimensions") {
  const MacroConfig cfg = defaults();
  const auto array = program_array(WeightMatrix::filled(4, 4, 1), cfg);
  const InputVector inputs = encode_vector(std::vector<int>{1, 2}, cfg.timing);
  CHECK_THROWS_AS(run_mvm(array, inputs, cfg, SenseMode::Ideal), DimensionError);
}

TEST_CASE("event count stays within the event-driven budget") {
  const MacroConfig cfg = defaults();
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t rows = 1 + rng() % 64;
    const std::size_t cols = 1 + rng() % 32;
    const auto weights = random_weights(rows, cols, rng);
    auto digits = random_digits(rows, rng);
    // Force some zero rows.
    for (auto& d : digits)
      if (rng() % 3 == 0) d = 0;
    const std::size_t nonzero =
        static_cast<std::size_t>(std::count_if(digits.begin(), digits.end(),
                                               [](int d) { return d != 0; }));
    const auto array = program_array(weights, cfg);
    const MvmResult r = run_mvm(array, encode_vector(digits, cfg.timing), cfg, SenseMode::Ideal);
    CHECK(r.event_count <= 2 * nonzero + 1 + cols);
  }
}

TEST_CASE("event path matches the closed-form readout on random cases") {
  const MacroConfig cfg = defaults();
  std::mt19937_64 rng(4242);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t rows = 1 + rng() % 32;
    const std::size_t cols = 1 + rng() % 8;
    const auto weights = random_weights(rows, cols, rng);
    const auto digits = random_digits(rows, rng);
    // Stagger row start times; interval coding must not notice.
    std::vector<Femtoseconds> t0s(rows);
    for (auto& t : t0s) t = static_cast<Femtoseconds>(rng() % 5) * fs_per_ns;

    const auto array = program_array(weights, cfg);
    const MvmResult r =
        run_mvm(array, encode_vector(digits, t0s, cfg.timing), cfg, SenseMode::Ideal);

    for (std::size_t c = 0; c < cols; ++c) {
      std::vector<double> t_s(rows), g(rows);
      for (std::size_t row = 0; row < rows; ++row) {
        t_s[row] = static_cast<double>(digits[row]) * 0.2e-9;
        g[row] = array.conductance(row, c);
      }
      const double expected = output_interval(ideal_charge(t_s, g, cfg).v_charge_v, cfg);
      const double rel = expected != 0.0 ? std::abs(r.t_out_s[c] - expected) / expected : 0.0;
      worst = std::max(worst, rel);
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("row permutation leaves every column unchanged") {
  const MacroConfig cfg = defaults();
  std::mt19937_64 rng(77);
  const std::size_t rows = 24, cols = 6;
  const auto weights = random_weights(rows, cols, rng);
  const auto digits = random_digits(rows, rng);

  std::vector<std::size_t> perm(rows);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  WeightMatrix permuted{rows, cols, std::vector<std::uint8_t>(rows * cols)};
  std::vector<int> permuted_digits(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    permuted_digits[r] = digits[perm[r]];
    for (std::size_t c = 0; c < cols; ++c) permuted.at(r, c) = weights.at(perm[r], c);
  }

  const MvmResult a = run_mvm(program_array(weights, cfg), encode_vector(digits, cfg.timing),
                              cfg, SenseMode::Ideal);
  const MvmResult b = run_mvm(program_array(permuted, cfg),
                              encode_vector(permuted_digits, cfg.timing), cfg, SenseMode::Ideal);
  for (std::size_t c = 0; c < cols; ++c)
    CHECK_THAT(b.t_out_s[c], WithinRel(a.t_out_s[c], 1e-12));
}

TEST_CASE("disjoint row sets superpose") {
  const MacroConfig cfg = defaults();
  std::mt19937_64 rng(123);
  const std::size_t rows = 32, cols = 8;
  const auto weights = random_weights(rows, cols, rng);
  const auto digits = random_digits(rows, rng);
  const auto array = program_array(weights, cfg);

  // Split rows into two disjoint activations: A keeps even rows, B odd.
  std::vector<int> a_digits(rows, 0), b_digits(rows, 0);
  for (std::size_t r = 0; r < rows; ++r) (r % 2 == 0 ? a_digits : b_digits)[r] = digits[r];

  const MvmResult full =
      run_mvm(array, encode_vector(digits, cfg.timing), cfg, SenseMode::Ideal);
  const MvmResult a = run_mvm(array, encode_vector(a_digits, cfg.timing), cfg, SenseMode::Ideal);
  const MvmResult b = run_mvm(array, encode_vector(b_digits, cfg.timing), cfg, SenseMode::Ideal);
  for (std::size_t c = 0; c < cols; ++c)
    CHECK_THAT(full.t_out_s[c], WithinRel(a.t_out_s[c] + b.t_out_s[c], 1e-12));
}

TEST_CASE("identical runs are bit-identical") {
  const MacroConfig cfg = defaults();
  std::mt19937_64 rng(5);
  const auto weights = random_weights(16, 16, rng);
  const auto digits = random_digits(16, rng);
  const auto array = program_array(weights, cfg);
  const InputVector inputs = encode_vector(digits, cfg.timing);

  const MvmResult a = run_mvm(array, inputs, cfg, SenseMode::Ideal);
  const MvmResult b = run_mvm(array, inputs, cfg, SenseMode::Ideal);
  CHECK(a.t_first_out_fs == b.t_first_out_fs);
  CHECK(a.event_count == b.event_count);
  for (std::size_t c = 0; c < 16; ++c) {
    CHECK(a.t_out_s[c] == b.t_out_s[c]);
    CHECK(a.v_charge_v[c] == b.v_charge_v[c]);
  }
}

TEST_CASE("batch runs preserve per-vector results") {
  const MacroConfig cfg = defaults();
  std::mt19937_64 rng(9);
  const auto array = program_array(random_weights(8, 8, rng), cfg);

  CHECK(run_mvm_batch(array, {}, cfg, SenseMode::Ideal).empty());

  const InputVector v1 = encode_vector(random_digits(8, rng), cfg.timing);
  const InputVector v2 = encode_vector(random_digits(8, rng), cfg.timing);
  const auto batch = run_mvm_batch(array, {v1, v2, v1}, cfg, SenseMode::Ideal);
  REQUIRE(batch.size() == 3);
  for (std::size_t c = 0; c < 8; ++c) {
    CHECK(batch[0].t_out_s[c] == batch[2].t_out_s[c]);
    CHECK(batch[0].t_out_s[c] == run_mvm(array, v1, cfg, SenseMode::Ideal).t_out_s[c]);
  }
}

TEST_CASE("nonideal engine matches the profile integrator") {
  const MacroConfig cfg = defaults();
  // One row active over [0, 20 ns] against a single column: the engine's
  // per-segment exponential must agree with the standalone trace.
  const auto array = program_array(WeightMatrix::filled(1, 1, 3), cfg);
  const InputVector inputs = encode_vector(std::vector<int>{100}, cfg.timing);
  const MvmResult r = run_mvm(array, inputs, cfg, SenseMode::Nonideal);

  const std::vector<ProfileStep> profile{{0, array.conductance(0, 0)}};
  const NonidealTrace trace = nonideal_charge_trace(profile, cfg, 20 * fs_per_ns);
  CHECK_THAT(r.v_charge_v[0], WithinRel(trace.final_state.v_charge_v, 1e-12));

  // Droop: nonideal charge stays below the ideal path at k = 1.
  const MvmResult ideal = run_mvm(array, inputs, cfg, SenseMode::Ideal);
  CHECK(r.v_charge_v[0] < ideal.v_charge_v[0]);
}

TEST_CASE("nonideal engine integrates overlapping rows segment-exactly") {
  const MacroConfig cfg = defaults();
  const auto array = program_array(WeightMatrix::filled(2, 1, 3), cfg);
  // Row 0 active [0, 20 ns], row 1 active [10 ns, 30.2 ns].
  const std::vector<int> digits{100, 101};
  const std::vector<Femtoseconds> t0s{0, 10 * fs_per_ns};
  const MvmResult r = run_mvm(array, encode_vector(digits, t0s, cfg.timing), cfg,
                              SenseMode::Nonideal);

  const double g = array.conductance(0, 0);
  const std::vector<ProfileStep> profile{
      {0, g}, {10 * fs_per_ns, 2 * g}, {20 * fs_per_ns, g}};
  const NonidealTrace trace =
      nonideal_charge_trace(profile, cfg, r.t_first_out_fs);
  CHECK(r.t_first_out_fs == 30 * fs_per_ns + 200'000);
  CHECK_THAT(r.v_charge_v[0], WithinRel(trace.final_state.v_charge_v, 1e-12));
}

TEST_CASE("saturation is reported per column, not fatal") {
  MacroConfig cfg = defaults();
  cfg.k_mirror = 4.0;  // push the worst case well past the supply
  const auto array = program_array(WeightMatrix::filled(128, 2, 3), cfg);
  const InputVector inputs = encode_vector(std::vector<int>(128, 255), cfg.timing);
  const MvmResult r = run_mvm(array, inputs, cfg, SenseMode::Ideal);
  CHECK(r.saturated[0]);
  CHECK(r.saturated[1]);
  CHECK(r.v_charge_v[0] > cfg.vdd_v);
}

TEST_CASE("trace capture records flags, charge and crossings") {
  const MacroConfig cfg = defaults();
  const auto array = program_array(WeightMatrix::filled(2, 1, 3), cfg);
  const InputVector inputs = encode_vector(std::vector<int>{10, 20}, cfg.timing);
  const MvmResult r = run_mvm(array, inputs, cfg, SenseMode::Ideal, true);
  REQUIRE(r.trace.has_value());
  const auto& rows = *r.trace;
  CHECK(std::any_of(rows.begin(), rows.end(), [](const TraceRow& t) {
    return t.signal == "event_flag" && t.value == 1.0;
  }));
  CHECK(std::any_of(rows.begin(), rows.end(), [](const TraceRow& t) {
    return t.signal == "event_flag" && t.value == 0.0;
  }));
  CHECK(std::any_of(rows.begin(), rows.end(), [](const TraceRow& t) {
    return t.signal == "comparator_cross_0";
  }));
  CHECK(std::is_sorted(rows.begin(), rows.end(),
                       [](const TraceRow& a, const TraceRow& b) { return a.t_fs < b.t_fs; }));

  // Traces are opt-in.
  CHECK_FALSE(run_mvm(array, inputs, cfg, SenseMode::Ideal).trace.has_value());
}
