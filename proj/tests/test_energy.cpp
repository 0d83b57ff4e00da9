#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "spikecim/energy.hpp"
#include "spikecim/reference.hpp"

using namespace spikecim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("ops_count follows the 2-ops-per-MAC convention") {
  CHECK(ops_count(128, 128, 2) == 32768);
  CHECK(ops_count(1, 1, 2) == 2);
  CHECK(ops_count(128, 128, 1) == 16384);
  CHECK_THROWS_AS(ops_count(0, 128, 2), ValidationError);
  CHECK_THROWS_AS(ops_count(128, 128, 3), ValidationError);
}

TEST_CASE("efficiency converts ops per joule to TOPS/W") {
  CHECK_THAT(efficiency_tops_per_watt(32768, 134.5e-12), WithinRel(243.6, 0.003));
  CHECK_THAT(efficiency_tops_per_watt(32768, 269.0e-12), WithinRel(121.8, 0.003));
  CHECK_THAT(efficiency_tops_per_watt(2, 134.5e-12), WithinRel(0.01487, 0.003));
  CHECK_THROWS_AS(efficiency_tops_per_watt(10, 0.0), ValidationError);
}

TEST_CASE("default calibration lands on the design efficiency") {
  const EnergyConfig cfg;
  const EnergyReport r = energy_report(1, cfg, 128, 128);
  CHECK_THAT(r.tops_per_watt, WithinRel(reference::tops_per_watt, 0.005));
  CHECK(cfg.breakdown.osg == reference::osg_power_fraction);
  CHECK_THAT(r.osg_j, WithinRel(0.726 * 134.52e-12, 1e-12));
  CHECK_THAT(r.osg_j, WithinRel(97.65e-12, 1e-3));
}

TEST_CASE("report scales linearly and components sum to the total") {
  const EnergyConfig cfg;

  SECTION("zero MVMs produce a zero report") {
    const EnergyReport r = energy_report(0, cfg, 128, 128);
    CHECK(r.total_energy_j == 0.0);
    CHECK(r.ops == 0);
    CHECK(r.tops_per_watt == 0.0);
  }

  SECTION("1000 MVMs") {
    const EnergyReport r = energy_report(1000, cfg, 128, 128);
    CHECK_THAT(r.total_energy_j, WithinRel(134.52e-9, 1e-9));
    CHECK_THAT(r.tops_per_watt, WithinRel(243.6, 0.005));
    CHECK_THAT(r.osg_j + r.smu_j + r.array_j + r.control_j, WithinRel(r.total_energy_j, 1e-12));
  }

  SECTION("efficiency does not depend on the MVM count") {
    const double e1 = energy_report(1, cfg, 128, 128).tops_per_watt;
    const double e7 = energy_report(7, cfg, 128, 128).tops_per_watt;
    const double e999 = energy_report(999, cfg, 128, 128).tops_per_watt;
    CHECK_THAT(e7, WithinRel(e1, 1e-12));
    CHECK_THAT(e999, WithinRel(e1, 1e-12));
  }
}

TEST_CASE("breakdown fractions are validated") {
  PowerBreakdown b;
  CHECK_THAT(b.sum(), WithinAbs(1.0, 1e-9));
  b.validate();

  b.smu = 0.2;
  CHECK_THROWS_AS(b.validate(), ValidationError);
  b = PowerBreakdown{};
  b.osg = -0.1;
  CHECK_THROWS_AS(b.validate(), ValidationError);

  EnergyConfig cfg;
  cfg.e_mvm_j = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = EnergyConfig{};
  cfg.ops_per_mac = 3;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("rendered reports carry the uncalibrated marker") {
  const EnergyReport r = energy_report(1, EnergyConfig{}, 128, 128);
  const std::string text = render_energy_text(r);
  CHECK(text.find("tops_per_watt=") != std::string::npos);
  CHECK(text.find("uncalibrated") != std::string::npos);

  const std::string csv = render_energy_csv(r);
  CHECK(csv.find("component,energy_j,calibrated") != std::string::npos);
  CHECK(csv.find("smu,") != std::string::npos);
  CHECK(csv.find(",no") != std::string::npos);
}
