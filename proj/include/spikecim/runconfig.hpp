#pragma once

#include <cstdint>
#include <fstream>
#include <string>

#include <json.hpp>

#include "spikecim/config.hpp"
#include "spikecim/energy.hpp"
#include "spikecim/errors.hpp"

namespace spikecim {

// Full simulator configuration as loaded from a JSON document. Every field
// has a default, unknown keys are rejected, and the loaded result is
// validated before use.
struct RunConfig {
  MacroConfig macro;
  EnergyConfig energy;
  SenseMode mode = SenseMode::Ideal;
  std::uint64_t seed = 1;

  void validate() const {
    macro.validate();
    energy.validate();
  }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj,
                                std::initializer_list<const char*> allowed,
                                const std::string& context) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw ValidationError("config: unknown key \"" + item.key() + "\" in " + context);
  }
}

template <typename T>
void get_if_present(const nlohmann::json& obj, const char* key, T& out,
                    const std::string& context) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config: bad value for \"" + context + "." + key + "\": " + e.what());
  }
}

}  // namespace detail

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config: top level must be an object");
  detail::reject_unknown_keys(
      j, {"array", "device", "timing", "analog", "energy", "mode", "seed"}, "top level");

  RunConfig cfg;

  if (j.contains("array")) {
    const auto& a = j.at("array");
    detail::reject_unknown_keys(a, {"rows", "cols"}, "array");
    detail::get_if_present(a, "rows", cfg.macro.rows, "array");
    detail::get_if_present(a, "cols", cfg.macro.cols, "array");
  }
  if (j.contains("device")) {
    const auto& d = j.at("device");
    detail::reject_unknown_keys(
        d, {"r_lrs_ohm", "tmr", "variation_sigma", "variation_seed"}, "device");
    detail::get_if_present(d, "r_lrs_ohm", cfg.macro.device.r_lrs_ohm, "device");
    detail::get_if_present(d, "tmr", cfg.macro.device.tmr, "device");
    detail::get_if_present(d, "variation_sigma", cfg.macro.device.variation_sigma, "device");
    detail::get_if_present(d, "variation_seed", cfg.macro.device.variation_seed, "device");
  }
  if (j.contains("timing")) {
    const auto& t = j.at("timing");
    detail::reject_unknown_keys(t, {"dt_lsb_fs", "input_bits"}, "timing");
    detail::get_if_present(t, "dt_lsb_fs", cfg.macro.timing.dt_lsb_fs, "timing");
    detail::get_if_present(t, "input_bits", cfg.macro.timing.input_bits, "timing");
  }
  if (j.contains("analog")) {
    const auto& a = j.at("analog");
    detail::reject_unknown_keys(a,
                                {"v_clamp_v", "v_in_clamp_v", "c_rt_f", "c_com_f", "k_mirror",
                                 "i_com_a", "vdd_v", "sat_margin_v", "comparator_offset_v",
                                 "comparator_delay_s"},
                                "analog");
    detail::get_if_present(a, "v_clamp_v", cfg.macro.v_clamp_v, "analog");
    detail::get_if_present(a, "v_in_clamp_v", cfg.macro.v_in_clamp_v, "analog");
    detail::get_if_present(a, "c_rt_f", cfg.macro.c_rt_f, "analog");
    detail::get_if_present(a, "c_com_f", cfg.macro.c_com_f, "analog");
    detail::get_if_present(a, "k_mirror", cfg.macro.k_mirror, "analog");
    detail::get_if_present(a, "i_com_a", cfg.macro.i_com_a, "analog");
    detail::get_if_present(a, "vdd_v", cfg.macro.vdd_v, "analog");
    detail::get_if_present(a, "sat_margin_v", cfg.macro.sat_margin_v, "analog");
    detail::get_if_present(a, "comparator_offset_v", cfg.macro.comparator_offset_v, "analog");
    detail::get_if_present(a, "comparator_delay_s", cfg.macro.comparator_delay_s, "analog");
  }
  if (j.contains("energy")) {
    const auto& e = j.at("energy");
    detail::reject_unknown_keys(e, {"e_mvm_j", "ops_per_mac", "breakdown"}, "energy");
    detail::get_if_present(e, "e_mvm_j", cfg.energy.e_mvm_j, "energy");
    detail::get_if_present(e, "ops_per_mac", cfg.energy.ops_per_mac, "energy");
    if (e.contains("breakdown")) {
      const auto& b = e.at("breakdown");
      detail::reject_unknown_keys(b, {"osg", "smu", "array", "control"}, "energy.breakdown");
      detail::get_if_present(b, "osg", cfg.energy.breakdown.osg, "energy.breakdown");
      detail::get_if_present(b, "smu", cfg.energy.breakdown.smu, "energy.breakdown");
      detail::get_if_present(b, "array", cfg.energy.breakdown.array, "energy.breakdown");
      detail::get_if_present(b, "control", cfg.energy.breakdown.control, "energy.breakdown");
    }
  }
  if (j.contains("mode")) {
    std::string mode;
    detail::get_if_present(j, "mode", mode, "top level");
    cfg.mode = sense_mode_from_string(mode);
  }
  detail::get_if_present(j, "seed", cfg.seed, "top level");

  cfg.validate();
  return cfg;
}

inline nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["array"] = {{"rows", cfg.macro.rows}, {"cols", cfg.macro.cols}};
  j["device"] = {{"r_lrs_ohm", cfg.macro.device.r_lrs_ohm},
                 {"tmr", cfg.macro.device.tmr},
                 {"variation_sigma", cfg.macro.device.variation_sigma},
                 {"variation_seed", cfg.macro.device.variation_seed}};
  j["timing"] = {{"dt_lsb_fs", cfg.macro.timing.dt_lsb_fs},
                 {"input_bits", cfg.macro.timing.input_bits}};
  j["analog"] = {{"v_clamp_v", cfg.macro.v_clamp_v},
                 {"v_in_clamp_v", cfg.macro.v_in_clamp_v},
                 {"c_rt_f", cfg.macro.c_rt_f},
                 {"c_com_f", cfg.macro.c_com_f},
                 {"k_mirror", cfg.macro.k_mirror},
                 {"i_com_a", cfg.macro.i_com_a},
                 {"vdd_v", cfg.macro.vdd_v},
                 {"sat_margin_v", cfg.macro.sat_margin_v},
                 {"comparator_offset_v", cfg.macro.comparator_offset_v},
                 {"comparator_delay_s", cfg.macro.comparator_delay_s}};
  j["energy"] = {{"e_mvm_j", cfg.energy.e_mvm_j},
                 {"ops_per_mac", cfg.energy.ops_per_mac},
                 {"breakdown",
                  {{"osg", cfg.energy.breakdown.osg},
                   {"smu", cfg.energy.breakdown.smu},
                   {"array", cfg.energy.breakdown.array},
                   {"control", cfg.energy.breakdown.control}}}};
  j["mode"] = to_string(cfg.mode);
  j["seed"] = cfg.seed;
  return j;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path + ": " + e.what());
  }
  return run_config_from_json(j);
}

}  // namespace spikecim
