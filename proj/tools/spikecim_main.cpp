// Command-line front end: simulation, experiment drivers and reports.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spikecim/spikecim.hpp"

namespace {

using namespace spikecim;

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_io = 2;

bool log_enabled() {
  const char* lvl = std::getenv("SPIKECIM_LOG");
  if (!lvl) return false;
  const std::string s(lvl);
  return s == "info" || s == "debug" || s == "1";
}

void log_info(const std::string& msg) {
  if (log_enabled()) std::cerr << "[spikecim] " << msg << "\n";
}

RunConfig load_config_or_defaults(const std::string& path) {
  if (path.empty()) {
    RunConfig cfg;
    cfg.validate();
    return cfg;
  }
  log_info("loading config " + path);
  return load_run_config(path);
}

// Durations like "5ns", "0.2us", "1e-9" (bare numbers are seconds).
double parse_duration_s(const std::string& token) {
  static const std::vector<std::pair<std::string, double>> suffixes = {
      {"fs", 1e-15}, {"ps", 1e-12}, {"ns", 1e-9}, {"us", 1e-6}, {"ms", 1e-3}, {"s", 1.0}};
  std::string text = token;
  double scale = 1.0;
  for (const auto& [suffix, factor] : suffixes) {
    if (text.size() > suffix.size() &&
        text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0) {
      text = text.substr(0, text.size() - suffix.size());
      scale = factor;
      break;
    }
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse duration \"" + token + "\"");
  }
  if (used != text.size()) throw ValidationError("cannot parse duration \"" + token + "\"");
  return value * scale;
}

std::vector<double> parse_time_list(const std::string& csv) {
  std::vector<double> times;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ','))
    if (!token.empty()) times.push_back(parse_duration_s(token));
  if (times.empty()) throw ValidationError("--times: no durations given");
  return times;
}

std::string format_sig(double value, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << value;
  return os.str();
}

int cmd_simulate(const std::string& config_path, const std::string& weights_path,
                 const std::string& inputs_path, const std::string& mode_override,
                 const std::string& out_path, const std::string& trace_path) {
  RunConfig cfg = load_config_or_defaults(config_path);
  if (!mode_override.empty()) cfg.mode = sense_mode_from_string(mode_override);

  const WeightMatrix weights = load_weight_csv(weights_path);
  const std::vector<int> digits = load_input_csv(inputs_path, cfg.macro.timing.max_input());
  if (digits.size() != weights.rows)
    throw DimensionError("input vector length " + std::to_string(digits.size()) +
                         " does not match weight rows " + std::to_string(weights.rows));

  const CrossbarArray array = program_array(weights, cfg.macro);
  const InputVector inputs = encode_vector(digits, cfg.macro.timing);
  log_info("running " + std::to_string(weights.rows) + "x" + std::to_string(weights.cols) +
           " mvm in " + std::string(to_string(cfg.mode)) + " mode");
  const MvmResult result = run_mvm(array, inputs, cfg.macro, cfg.mode, !trace_path.empty());

  const double a = alpha(cfg.macro);
  std::ostringstream os;
  os << "col,t_out_fs,v_charge_v,decoded_ss,saturated\n";
  for (std::size_t c = 0; c < array.cols(); ++c) {
    os << c << "," << to_femtoseconds(result.t_out_s[c]) << ","
       << format_sig(result.v_charge_v[c], 9) << ","
       << format_sig(decode_interval(result.t_out_s[c], a), 12) << ","
       << int(result.saturated[c]) << "\n";
  }
  write_text_file(out_path, os.str());

  if (!trace_path.empty() && result.trace) {
    std::ostringstream ts;
    ts << "time_fs,signal_name,value\n";
    for (const TraceRow& row : *result.trace)
      ts << row.t_fs << "," << row.signal << "," << format_sig(row.value, 9) << "\n";
    write_text_file(trace_path, ts.str());
  }
  return exit_ok;
}

int cmd_sweep_linearity(const std::string& config_path, std::size_t n,
                        std::optional<std::uint64_t> seed_opt, const std::string& out_path,
                        const std::string& summary_path) {
  const RunConfig cfg = load_config_or_defaults(config_path);
  const std::uint64_t seed = seed_opt.value_or(cfg.seed);

  std::vector<SweepPoint> scatter;
  const SweepReport report = linearity_sweep(n, seed, cfg.macro, cfg.mode, &scatter);

  std::ostringstream os;
  os << "case_id,sum_tg,t_out\n";
  for (const SweepPoint& p : scatter)
    os << p.case_id << "," << format_sig(p.sum_tg_ss, 12) << "," << format_sig(p.t_out_s, 12)
       << "\n";
  write_text_file(out_path, os.str());

  std::ostringstream summary;
  summary << "n_cases=" << report.n_cases << "\n";
  summary << "n_points=" << report.n_points << "\n";
  summary << "mode=" << to_string(cfg.mode) << "\n";
  summary << "seed=" << seed << "\n";
  summary << "slope_ohm=" << format_sig(report.slope, 12) << "\n";
  summary << "intercept_s=" << format_sig(report.intercept, 12) << "\n";
  summary << "r_squared=" << format_sig(report.r_squared, 12) << "\n";
  summary << "max_rel_error=" << format_sig(report.max_rel_error, 12) << "\n";
  summary << "alpha_ohm=" << format_sig(alpha(cfg.macro), 12) << "\n";
  summary << "degenerate=" << (report.degenerate ? 1 : 0) << "\n";
  std::cout << summary.str();
  if (!summary_path.empty()) write_text_file(summary_path, summary.str());
  return exit_ok;
}

int cmd_nonideal_compare(const std::string& config_path, double g_total,
                         const std::string& times_csv, const std::string& out_path) {
  const RunConfig cfg = load_config_or_defaults(config_path);
  const std::vector<double> times = parse_time_list(times_csv);
  const std::vector<NonidealRow> rows = nonideal_comparison(times, g_total, cfg.macro);

  const auto reference_for = [](double t_s) -> std::string {
    if (std::abs(t_s - 5e-9) < 1e-15) return format_sig(reference::charge_degradation_5ns, 9);
    if (std::abs(t_s - 10e-9) < 1e-15) return format_sig(reference::charge_degradation_10ns, 9);
    return "";
  };

  std::ostringstream os;
  os << "t_s,v_ideal_v,v_nonideal_v,degradation,reference_degradation\n";
  for (const NonidealRow& row : rows) {
    os << format_sig(row.t_s, 9) << "," << format_sig(row.v_ideal_v, 9) << ","
       << format_sig(row.v_nonideal_v, 9) << "," << format_sig(row.degradation, 9) << ","
       << reference_for(row.t_s) << "\n";
  }
  write_text_file(out_path, os.str());

  for (const NonidealRow& row : rows) {
    const std::string ref = reference_for(row.t_s);
    if (!ref.empty())
      std::cout << "t=" << format_sig(row.t_s, 3) << "s model=" << format_sig(row.degradation, 3)
                << " reference=" << ref << "\n";
  }
  return exit_ok;
}

int cmd_energy_report(const std::string& config_path, std::size_t mvms,
                      const std::string& out_path, const std::string& csv_path) {
  const RunConfig cfg = load_config_or_defaults(config_path);
  const EnergyReport report = energy_report(mvms, cfg.energy, cfg.macro.rows, cfg.macro.cols);
  const std::string text = render_energy_text(report);
  if (out_path.empty()) std::cout << text;
  else write_text_file(out_path, text);
  if (!csv_path.empty()) write_text_file(csv_path, render_energy_csv(report));
  return exit_ok;
}

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

SuiteResult selftest_oracle_exhaustion(const RunConfig& cfg) {
  SuiteResult suite{"oracle-exhaustion"};
  const double a = alpha(cfg.macro);
  double worst = 0.0;
  for (int w = 0; w <= 3 && suite.passed; ++w) {
    const CrossbarArray array =
        program_array(WeightMatrix::filled(1, 1, static_cast<std::uint8_t>(w)), cfg.macro);
    for (int d = 0; d <= cfg.macro.timing.max_input(); ++d) {
      const std::vector<int> digits{d};
      const std::vector<std::uint8_t> weights{static_cast<std::uint8_t>(w)};
      const MvmResult r =
          run_mvm(array, encode_vector(digits, cfg.macro.timing), cfg.macro, SenseMode::Ideal);
      const double decoded = decode_interval(r.t_out_s[0], a);
      const double exact = exact_mac_column(digits, weights, cfg.macro).to_siemens_seconds(cfg.macro);
      const double rel =
          exact != 0.0 ? std::abs(decoded - exact) / exact : std::abs(decoded);
      worst = std::max(worst, rel);
    }
  }
  suite.passed = worst <= 1e-12;
  suite.detail = "max_rel_error=" + format_sig(worst, 3);
  return suite;
}

SuiteResult selftest_superposition(const RunConfig& cfg) {
  SuiteResult suite{"superposition"};
  std::mt19937_64 rng(cfg.seed);
  const std::size_t rows = std::min<std::size_t>(cfg.macro.rows, 32);
  const std::size_t cols = std::min<std::size_t>(cfg.macro.cols, 8);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    WeightMatrix w{rows, cols, std::vector<std::uint8_t>(rows * cols)};
    for (auto& v : w.values) v = static_cast<std::uint8_t>(rng() & 3);
    std::vector<int> full(rows), even(rows, 0), odd(rows, 0);
    for (std::size_t r = 0; r < rows; ++r) {
      full[r] = static_cast<int>(rng()) & cfg.macro.timing.max_input();
      (r % 2 == 0 ? even : odd)[r] = full[r];
    }
    const CrossbarArray array = program_array(w, cfg.macro);
    const MvmResult rf =
        run_mvm(array, encode_vector(full, cfg.macro.timing), cfg.macro, SenseMode::Ideal);
    const MvmResult re =
        run_mvm(array, encode_vector(even, cfg.macro.timing), cfg.macro, SenseMode::Ideal);
    const MvmResult ro =
        run_mvm(array, encode_vector(odd, cfg.macro.timing), cfg.macro, SenseMode::Ideal);
    for (std::size_t c = 0; c < cols; ++c) {
      const double sum = re.t_out_s[c] + ro.t_out_s[c];
      if (rf.t_out_s[c] != 0.0)
        worst = std::max(worst, std::abs(rf.t_out_s[c] - sum) / rf.t_out_s[c]);
    }
  }
  suite.passed = worst <= 1e-12;
  suite.detail = "max_rel_error=" + format_sig(worst, 3);
  return suite;
}

SuiteResult selftest_calibration(const RunConfig& cfg) {
  SuiteResult suite{"calibration-identities"};
  std::ostringstream detail;

  // Event path vs closed form at the configured design point.
  const CrossbarArray array =
      program_array(WeightMatrix::filled(cfg.macro.rows, 1, 3), cfg.macro);
  const std::vector<int> digits(cfg.macro.rows, cfg.macro.timing.max_input());
  const MvmResult r =
      run_mvm(array, encode_vector(digits, cfg.macro.timing), cfg.macro, SenseMode::Ideal);
  std::vector<double> t_s(cfg.macro.rows), g(cfg.macro.rows);
  for (std::size_t row = 0; row < cfg.macro.rows; ++row) {
    t_s[row] = static_cast<double>(digits[row]) * to_seconds(cfg.macro.timing.dt_lsb_fs);
    g[row] = array.conductance(row, 0);
  }
  const double v_closed = ideal_charge(t_s, g, cfg.macro).v_charge_v;
  const double t_closed = output_interval(v_closed, cfg.macro);
  if (std::abs(r.v_charge_v[0] - v_closed) > 1e-12 * v_closed ||
      std::abs(r.t_out_s[0] - t_closed) > 1e-12 * t_closed) {
    suite.passed = false;
    detail << "event path diverges from closed form; ";
  }

  // Energy accounting identity: efficiency == ops / e_mvm.
  const EnergyReport er = energy_report(1, cfg.energy, cfg.macro.rows, cfg.macro.cols);
  const double expected_tops =
      static_cast<double>(er.ops) / cfg.energy.e_mvm_j / 1e12;
  if (std::abs(er.tops_per_watt - expected_tops) > 1e-9 * expected_tops) {
    suite.passed = false;
    detail << "efficiency identity broken; ";
  }

  // Droop calibration is invertible at the 5 ns point.
  const double g_cal = calibrate_g_total(0.193, 5e-9, cfg.macro);
  const double back = single_pole_degradation(g_cal, 5e-9, cfg.macro);
  if (std::abs(back - 0.193) > 1e-6) {
    suite.passed = false;
    detail << "droop calibration not invertible; ";
  }

  detail << "v_charge=" << format_sig(r.v_charge_v[0], 9)
         << "V t_out=" << format_sig(r.t_out_s[0], 9)
         << "s tops_per_watt=" << format_sig(er.tops_per_watt, 6);
  suite.detail = detail.str();
  return suite;
}

SuiteResult selftest_design_point(const RunConfig& cfg) {
  SuiteResult suite{"default-design-point"};
  const RunConfig defaults;
  if (to_json(cfg) != to_json(defaults)) {
    suite.detail = "skipped (non-default config)";
    return suite;
  }
  std::ostringstream detail;
  const double a = alpha(cfg.macro);
  if (std::abs(a - 5000.0) > 1e-9 * 5000.0) {
    suite.passed = false;
    detail << "alpha=" << format_sig(a, 12) << " expected 5000; ";
  }
  const CrossbarArray array =
      program_array(WeightMatrix::filled(128, 1, 3), cfg.macro);
  const std::vector<int> digits(128, 255);
  const MvmResult r =
      run_mvm(array, encode_vector(digits, cfg.macro.timing), cfg.macro, SenseMode::Ideal);
  if (std::abs(r.v_charge_v[0] - 1.088) > 1e-9 * 1.088 || r.saturated[0]) {
    suite.passed = false;
    detail << "worst-case v_charge=" << format_sig(r.v_charge_v[0], 12) << "; ";
  }
  if (to_femtoseconds(r.t_out_s[0]) != 10'880'000) {
    suite.passed = false;
    detail << "worst-case t_out_fs=" << to_femtoseconds(r.t_out_s[0]) << "; ";
  }
  const EnergyReport er = energy_report(1, cfg.energy, 128, 128);
  if (std::abs(er.tops_per_watt - reference::tops_per_watt) > 0.005 * reference::tops_per_watt) {
    suite.passed = false;
    detail << "tops_per_watt=" << format_sig(er.tops_per_watt, 6) << "; ";
  }
  if (suite.passed) detail << "alpha=5000 v_charge=1.088V t_out=10.88ns tops_per_watt ok";
  suite.detail = detail.str();
  return suite;
}

int cmd_selftest(const std::string& config_path) {
  const RunConfig cfg = load_config_or_defaults(config_path);

  const SuiteResult suites[] = {
      selftest_oracle_exhaustion(cfg),
      selftest_superposition(cfg),
      selftest_calibration(cfg),
      selftest_design_point(cfg),
  };
  bool all_passed = true;
  for (const SuiteResult& s : suites) {
    std::cout << (s.passed ? "[PASS] " : "[FAIL] ") << s.name;
    if (!s.detail.empty()) std::cout << "  (" << s.detail << ")";
    std::cout << "\n";
    all_passed = all_passed && s.passed;
  }
  return all_passed ? exit_ok : exit_validation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-driven simulator of a dual-spike SOT-MRAM compute-in-memory macro"};
  app.require_subcommand(0, 1);

  std::string top_config;
  bool print_config = false;
  app.add_option("--config", top_config, "Config JSON used with --print-config");
  app.add_flag("--print-config", print_config, "Print the effective configuration and exit");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run one MVM from weight/input CSV files");
  std::string sim_config, sim_weights, sim_inputs, sim_mode, sim_out, sim_trace;
  sim->add_option("--config", sim_config, "Config JSON (defaults when omitted)");
  sim->add_option("--weights", sim_weights, "Weight CSV, integers 0-3")->required();
  sim->add_option("--inputs", sim_inputs, "Input CSV, one value per array row")->required();
  sim->add_option("--mode", sim_mode, "ideal|nonideal (overrides config)");
  sim->add_option("--out", sim_out, "Per-column result CSV")->required();
  sim->add_option("--trace", sim_trace, "Optional waveform CSV (time_fs,signal_name,value)");

  // sweep-linearity
  auto* sweep = app.add_subcommand("sweep-linearity", "Random input/weight linearity sweep");
  std::string sw_config, sw_out, sw_summary;
  std::size_t sw_n = 0;
  std::optional<std::uint64_t> sw_seed;
  sweep->add_option("--config", sw_config, "Config JSON (defaults when omitted)");
  sweep->add_option("--n", sw_n, "Number of random cases (>= 2)")->required();
  sweep->add_option("--seed", sw_seed, "RNG seed (defaults to config seed)");
  sweep->add_option("--out", sw_out, "Scatter CSV (case_id,sum_tg,t_out)")->required();
  sweep->add_option("--summary", sw_summary, "Also write the key=value summary here");

  // nonideal-compare
  auto* cmp = app.add_subcommand("nonideal-compare",
                                 "Charging with vs without the clamp + current mirror");
  std::string cm_config, cm_times, cm_out;
  double cm_gtotal = 0.0;
  cmp->add_option("--config", cm_config, "Config JSON (defaults when omitted)");
  cmp->add_option("--gtotal", cm_gtotal, "Total bit-line conductance in siemens")->required();
  cmp->add_option("--times", cm_times, "Comma-separated durations, e.g. 5ns,10ns")->required();
  cmp->add_option("--out", cm_out, "Comparison table CSV")->required();

  // energy-report
  auto* energy = app.add_subcommand("energy-report", "Energy and efficiency accounting");
  std::string en_config, en_out, en_csv;
  std::size_t en_mvms = 1;
  energy->add_option("--config", en_config, "Config JSON (defaults when omitted)");
  energy->add_option("--mvms", en_mvms, "Number of full-array MVM windows");
  energy->add_option("--out", en_out, "Report text file (stdout when omitted)");
  energy->add_option("--csv", en_csv, "Optional per-component CSV");

  // selftest
  auto* self = app.add_subcommand("selftest", "Built-in consistency suites");
  std::string st_config;
  self->add_option("--config", st_config, "Config JSON (defaults when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_validation;
  }

  try {
    if (print_config) {
      const RunConfig cfg = load_config_or_defaults(top_config);
      std::cout << to_json(cfg).dump(2) << "\n";
      return exit_ok;
    }
    if (sim->parsed())
      return cmd_simulate(sim_config, sim_weights, sim_inputs, sim_mode, sim_out, sim_trace);
    if (sweep->parsed()) return cmd_sweep_linearity(sw_config, sw_n, sw_seed, sw_out, sw_summary);
    if (cmp->parsed()) return cmd_nonideal_compare(cm_config, cm_gtotal, cm_times, cm_out);
    if (energy->parsed()) return cmd_energy_report(en_config, en_mvms, en_out, en_csv);
    if (self->parsed()) return cmd_selftest(st_config);
    std::cout << app.help();
    return exit_ok;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return exit_io;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return exit_validation;
  }
}
