#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "spikecim/csv.hpp"
#include "spikecim/runconfig.hpp"

using namespace spikecim;
using Catch::Matchers::WithinRel;

namespace {

std::filesystem::path scratch_file(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "spikecim_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("defaults pass validation and expose the derived read voltage") {
  const RunConfig cfg;
  cfg.validate();
  CHECK(cfg.macro.rows == 128);
  CHECK_THAT(cfg.macro.v_read_v(), WithinRel(0.1, 1e-12));
  CHECK_THAT(cfg.macro.saturation_limit_v(), WithinRel(1.1, 1e-12));
}

TEST_CASE("json config overrides individual fields") {
  const auto j = nlohmann::json::parse(R"({
    "array": {"rows": 64},
    "analog": {"k_mirror": 2.0},
    "mode": "nonideal",
    "seed": 42
  })");
  const RunConfig cfg = run_config_from_json(j);
  CHECK(cfg.macro.rows == 64);
  CHECK(cfg.macro.cols == 128);
  CHECK(cfg.macro.k_mirror == 2.0);
  CHECK(cfg.mode == SenseMode::Nonideal);
  CHECK(cfg.seed == 42);
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"arrray": {}})")),
                  ValidationError);
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"array": {"rowz": 4}})")),
                  ValidationError);
  CHECK_THROWS_AS(
      run_config_from_json(nlohmann::json::parse(R"({"energy": {"breakdown": {"dac": 1.0}}})")),
      ValidationError);
}

TEST_CASE("invalid values fail validation on load") {
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"analog": {"i_com_a": 0}})")),
                  ValidationError);
  CHECK_THROWS_AS(
      run_config_from_json(nlohmann::json::parse(R"({"analog": {"c_rt_f": -1e-13}})")),
      ValidationError);
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"mode": "fuzzy"})")),
                  ValidationError);
  CHECK_THROWS_AS(
      run_config_from_json(nlohmann::json::parse(R"({"energy": {"breakdown": {"osg": 0.5}}})")),
      ValidationError);
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"seed": "abc"})")),
                  ValidationError);
}

TEST_CASE("config round-trips idempotently") {
  const RunConfig defaults;
  const nlohmann::json j1 = to_json(defaults);
  const RunConfig reloaded = run_config_from_json(j1);
  const nlohmann::json j2 = to_json(reloaded);
  CHECK(j1 == j2);

  // A modified config round-trips too.
  RunConfig custom;
  custom.macro.k_mirror = 1.5;
  custom.macro.timing.input_bits = 6;
  custom.energy.e_mvm_j = 1e-10;
  custom.mode = SenseMode::Nonideal;
  const nlohmann::json c1 = to_json(custom);
  CHECK(to_json(run_config_from_json(c1)) == c1);
}

TEST_CASE("load_run_config reports io and parse errors distinctly") {
  CHECK_THROWS_AS(load_run_config("/nonexistent/cfg.json"), IoError);
  const auto bad = scratch_file("bad.json", "{ not json");
  CHECK_THROWS_AS(load_run_config(bad.string()), ValidationError);
  const auto good = scratch_file("good.json", R"({"seed": 7})");
  CHECK(load_run_config(good.string()).seed == 7);
}

TEST_CASE("weight csv loads a matrix with range checks") {
  const auto path = scratch_file("w.csv", "0,1,2\n3,2,1\n");
  const WeightMatrix w = load_weight_csv(path.string());
  REQUIRE(w.rows == 2);
  REQUIRE(w.cols == 3);
  CHECK(w.at(0, 0) == 0);
  CHECK(w.at(1, 0) == 3);

  const auto bad_value = scratch_file("w_bad.csv", "0,1\n2,5\n");
  CHECK_THROWS_WITH(load_weight_csv(bad_value.string()),
                    Catch::Matchers::ContainsSubstring(":2") &&
                        Catch::Matchers::ContainsSubstring("weight 5"));

  const auto bad_cell = scratch_file("w_nan.csv", "0,x\n");
  CHECK_THROWS_WITH(load_weight_csv(bad_cell.string()),
                    Catch::Matchers::ContainsSubstring("expected an integer"));

  const auto ragged = scratch_file("w_ragged.csv", "0,1\n2\n");
  CHECK_THROWS_AS(load_weight_csv(ragged.string()), ValidationError);

  CHECK_THROWS_AS(load_weight_csv("/nonexistent/w.csv"), IoError);
}

TEST_CASE("input csv accepts a single row or column") {
  const auto col = scratch_file("in_col.csv", "0\n100\n255\n");
  CHECK(load_input_csv(col.string(), 255) == std::vector<int>{0, 100, 255});

  const auto row = scratch_file("in_row.csv", "0,100,255\n");
  CHECK(load_input_csv(row.string(), 255) == std::vector<int>{0, 100, 255});

  const auto matrix = scratch_file("in_mat.csv", "0,1\n2,3\n");
  CHECK_THROWS_AS(load_input_csv(matrix.string(), 255), ValidationError);

  const auto oob = scratch_file("in_oob.csv", "256\n");
  CHECK_THROWS_AS(load_input_csv(oob.string(), 255), ValidationError);

  const auto empty = scratch_file("in_empty.csv", "\n\n");
  CHECK_THROWS_AS(load_input_csv(empty.string(), 255), ValidationError);
}
