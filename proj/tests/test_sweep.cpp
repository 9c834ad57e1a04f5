#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "hapticbar/error.hpp"
#include "hapticbar/output.hpp"
#include "hapticbar/sweep.hpp"
#include "support.hpp"

using namespace hapticbar;
using testing_support::Gen;

namespace {

constexpr double kInch = 0.0254;

SweepSpec reference_spec(int elements = 30) {
  SweepSpec spec;
  spec.base = testing_support::reference_bar("aluminum", elements);
  spec.actuator = reference_actuator();
  return spec;
}

// One single-record case per peak value, all at x = 0.
SampleSet synthetic(const std::vector<double>& peaks) {
  SampleSet s;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    SweepCase c;
    c.id = static_cast<int>(i);
    c.positions = {0.0};
    c.frequencies_hz = {200.0};
    s.cases.push_back(c);
    s.records.push_back({static_cast<int>(i), 0.0, peaks[i]});
    s.records.push_back({static_cast<int>(i), 1.0, 100.0});
  }
  return s;
}

PeakAccelerationField field_of(std::vector<double> x, std::vector<double> y) {
  return {std::move(x), std::move(y)};
}

std::string samples_csv(const SampleSet& s) {
  std::ostringstream out;
  write_samples_csv(out, s);
  return out.str();
}

PeakAccelerationField single_actuator_field(double frequency) {
  StudyConfig cfg = testing_support::reference_bar();
  cfg.attachments = {testing_support::actuator_at("a", 0.16 * cfg.geometry.length)};
  cfg.excitations = {ExcitationCommand::actuator("a", frequency)};
  const AssembledSystem sys = build_system(cfg);
  return peak_acceleration_field(sys, steady_state(sys, build_excitations(cfg, sys)));
}

bool has_zone_within(const std::vector<Interval>& zones, double lo, double hi) {
  for (const auto& z : zones) {
    if (z.end >= lo && z.begin <= hi) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("preset configurations") {
  const double L = 0.3048;
  const auto dual = preset_configurations(PresetCase::Dual, L);
  REQUIRE(dual.size() == 5);
  CHECK(dual[2] == std::vector<double>{0.16 * L, 0.84 * L});
  CHECK(dual[0] == std::vector<double>{0.0, L});
  const auto triple = preset_configurations(PresetCase::Triple, L);
  CHECK(triple[0] == std::vector<double>{0.0, 0.49 * L, L});
  const auto single = preset_fractions(PresetCase::Single);
  CHECK(std::find(single.begin(), single.end(), std::vector<double>{0.16}) != single.end());
  CHECK(parse_preset_case("Dual") == PresetCase::Dual);
  CHECK_THROWS_AS(parse_preset_case("quad"), Error);
}

TEST_CASE("default frequency grid") {
  const SweepSpec spec;
  REQUIRE(spec.frequency_grid_hz.size() == 21);
  CHECK(spec.frequency_grid_hz.front() == 150.0);
  CHECK(spec.frequency_grid_hz.back() == 250.0);
  CHECK(frequency_grid(150, 250, 5)[7] == 185.0);
}

TEST_CASE("one case on a 31-node mesh gives 31 records") {
  SweepSpec spec = reference_spec(29);
  const double L = spec.base.geometry.length;
  spec.position_sets = {{0.16 * L}};
  spec.frequency_grid_hz = {205.0};
  const SampleSet s = run_sweep(spec);
  CHECK(s.cases.size() == 1);
  CHECK(s.records.size() == 31);
  CHECK(s.skipped.empty());
}

TEST_CASE("matched tuple replay at 0.03L / 0.97L for every material") {
  for (const auto& name : material_names()) {
    SweepSpec spec = reference_spec();
    spec.base.material = material_catalog(name);
    const double L = spec.base.geometry.length;
    spec.position_sets = {{0.03 * L, 0.97 * L}};
    spec.frequency_tuples = {{179.0, 157.0}};
    const SampleSet s = run_sweep(spec);
    REQUIRE(s.cases.size() == 1);
    CHECK(s.cases[0].frequencies_hz == std::vector<double>{179.0, 157.0});
    const PeakAccelerationField direct = evaluate_case(spec, s.cases[0]);
    REQUIRE(direct.peaks_g.size() == s.records.size());
    for (std::size_t k = 0; k < s.records.size(); ++k) CHECK(s.records[k].peak_g == direct.peaks_g[k]);
  }
}

TEST_CASE("empty grid gives an empty sample set") {
  SweepSpec spec = reference_spec();
  spec.position_sets = {{0.1}};
  spec.frequency_grid_hz.clear();
  const SampleSet s = run_sweep(spec);
  CHECK(s.cases.empty());
  CHECK(s.records.empty());
}

TEST_CASE("case enumeration order and cross product") {
  SweepSpec spec = reference_spec(8);
  const double L = spec.base.geometry.length;
  spec.position_sets = {{0.1 * L, 0.9 * L}, {0.2 * L, 0.8 * L}};
  spec.frequency_grid_hz = {160.0, 170.0, 180.0};
  spec.stiffness_values = {1e4, 2e4};
  const SampleSet cross = run_sweep(spec);
  REQUIRE(cross.cases.size() == 2 * 2 * 9);
  CHECK(cross.cases[1].frequencies_hz == std::vector<double>{160.0, 170.0});
  CHECK(cross.cases[3].frequencies_hz == std::vector<double>{170.0, 160.0});
  CHECK(cross.cases[9].stiffness == 2e4);
  CHECK(cross.cases[18].position_set == 1);
  for (std::size_t i = 0; i < cross.cases.size(); ++i) CHECK(cross.cases[i].id == static_cast<int>(i));

  spec.cross_product = false;
  const SampleSet matched = run_sweep(spec);
  REQUIRE(matched.cases.size() == 2 * 2 * 3);
  CHECK(matched.cases[2].frequencies_hz == std::vector<double>{180.0, 180.0});
}

TEST_CASE("sweep records agree bit for bit with the direct evaluation") {
  Gen gen(61);
  SweepSpec spec = reference_spec(12);
  const double L = spec.base.geometry.length;
  for (int i = 0; i < 3; ++i) {
    spec.position_sets.push_back({gen.uniform(0, 0.5 * L), gen.uniform(0.5 * L, L)});
  }
  spec.frequency_grid_hz = frequency_grid(150, 250, 25);
  spec.stiffness_values = {12e3, 20e3};
  spec.workers = 3;
  const SampleSet s = run_sweep(spec);
  CHECK(s.records.size() == (s.cases.size() - s.skipped.size()) * 15);
  std::size_t r = 0;
  for (const auto& c : s.cases) {
    const PeakAccelerationField f = evaluate_case(spec, c);
    for (std::size_t k = 0; k < f.peaks_g.size(); ++k, ++r) {
      REQUIRE(s.records[r].case_index == c.id);
      CHECK(std::memcmp(&s.records[r].peak_g, &f.peaks_g[k], sizeof(double)) == 0);
      CHECK(s.records[r].position == f.positions[k]);
      CHECK(s.records[r].peak_g >= 0.0);
    }
  }
}

TEST_CASE("sweep output does not depend on the worker count") {
  SweepSpec spec = reference_spec(10);
  spec.position_sets = preset_configurations(PresetCase::Dual, spec.base.geometry.length);
  spec.frequency_grid_hz = frequency_grid(150, 250, 20);
  spec.workers = 1;
  const std::string one = samples_csv(run_sweep(spec));
  for (int w : {2, 3, 8}) {
    spec.workers = w;
    CHECK(samples_csv(run_sweep(spec)) == one);
  }
}

TEST_CASE("undamped resonances are skipped, not fatal") {
  // An inert actuator on an undamped pinned bar, driven at the fundamental.
  SweepSpec spec = reference_spec(6);
  spec.actuator.damping = DampingCoefficient{0.0};
  spec.actuator.bolt_mass = 0.0;
  spec.actuator.stiffness = 0.0;
  spec.base.pinned_positions = {0.0, spec.base.geometry.length};
  spec.position_sets = {{0.5 * spec.base.geometry.length}};
  const double f1 = natural_frequencies(build_system(spec.base))[0];
  spec.frequency_grid_hz = {0.5 * f1, f1};
  const SampleSet s = run_sweep(spec);
  CHECK(s.cases.size() == 2);
  REQUIRE(s.skipped.size() == 1);
  CHECK(s.skipped[0].case_id == 1);
  CHECK(s.skipped[0].reason.find("resonance") != std::string::npos);
  CHECK(s.records.size() == 7);
}

TEST_CASE("quantiles") {
  QuantileSummary s = summarize({5, 1, 4, 2, 3});
  CHECK(s.median == 3.0);
  CHECK(s.q1 == 2.0);
  CHECK(s.q3 == 4.0);
  CHECK(s.min == 1.0);
  CHECK(s.max == 5.0);
  CHECK(s.mean == 3.0);
  s = summarize({2, 2, 2});
  CHECK((s.min == 2.0 && s.q1 == 2.0 && s.median == 2.0 && s.q3 == 2.0 && s.max == 2.0));
  CHECK(summarize({1, 2, 3, 4}).q1 == 1.75);
  try {
    summarize({});
    FAIL("empty group accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyGroup);
  }
}

TEST_CASE("bucket fractions") {
  BucketSummary b = bucket_fractions(synthetic({0.5, 3, 7}), 0.0);
  CHECK(b.below_1g == doctest::Approx(1.0 / 3.0));
  CHECK(b.between_1_and_5g == doctest::Approx(1.0 / 3.0));
  CHECK(b.above_5g == doctest::Approx(1.0 / 3.0));

  b = bucket_fractions(synthetic({0, 0, 0, 0}), 0.0);
  CHECK(b.below_1g == 1.0);
  CHECK(b.between_1_and_5g == 0.0);
  CHECK(b.above_5g == 0.0);

  b = bucket_fractions(synthetic({1.0, 5.0}), 0.0);
  CHECK(b.count_below == 1);
  CHECK(b.count_between == 1);

  try {
    bucket_fractions(synthetic({1.0}), 2.0);
    FAIL("no samples accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoSamplesAtPosition);
  }

  Gen gen(62);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> peaks(gen.integer(1, 40));
    for (double& p : peaks) p = gen.uniform(0.0, 8.0);
    const BucketSummary r = bucket_fractions(synthetic(peaks), 0.0);
    CHECK(std::abs(r.below_1g + r.between_1_and_5g + r.above_5g - 1.0) <= 1e-12);
  }
}

TEST_CASE("dead zone examples") {
  CHECK(dead_zones(field_of({0, 0.5, 1}, {2, 2, 2})).empty());

  std::vector<double> x, y;
  for (int i = 0; i <= 100; ++i) {
    x.push_back(i / 100.0);
    y.push_back(i >= 40 && i <= 45 ? 0.5 : 2.0);
  }
  const auto zones = dead_zones(field_of(x, y));
  REQUIRE(zones.size() == 1);
  CHECK(zones[0].begin == doctest::Approx(0.40).epsilon(0.01));
  CHECK(zones[0].end == doctest::Approx(0.45).epsilon(0.01));
}

TEST_CASE("dead zones are sorted, disjoint and inside the bar") {
  Gen gen(63);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen.integer(2, 40);
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = static_cast<double>(i) / (n - 1);
      y[i] = gen.uniform(0.0, 2.5);
    }
    const auto zones = dead_zones(field_of(x, y));
    for (std::size_t i = 0; i < zones.size(); ++i) {
      CHECK(zones[i].begin >= 0.0);
      CHECK(zones[i].end <= 1.0);
      CHECK(zones[i].begin <= zones[i].end);
      if (i > 0) CHECK(zones[i].begin > zones[i - 1].end);
    }
  }
}

TEST_CASE("nullification examples") {
  const std::vector<double> x{0, 0.25, 0.5, 0.75, 1};
  const auto a = field_of(x, {0.5, 0.5, 2, 2, 2});
  const auto b = field_of(x, {2, 2, 2, 0.5, 0.5});
  CHECK(nullification_union({a, b}, 1.0).empty());

  const auto same = nullification_union({a, a}, 1.0);
  const auto alone = dead_zones(a, 1.0);
  REQUIRE(same.size() == alone.size());
  CHECK(same[0].begin == alone[0].begin);
  CHECK(same[0].end == alone[0].end);

  try {
    nullification_union({a, field_of({0, 1}, {1, 1})}, 1.0);
    FAIL("grid mismatch accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
}

TEST_CASE("single actuator dead zones move with frequency") {
  const auto low = dead_zones(single_actuator_field(150.0));
  const auto high = dead_zones(single_actuator_field(250.0));
  const double L = 12 * kInch;
  CHECK(has_zone_within(low, 0.4 * L, 0.6 * L));
  CHECK(has_zone_within(low, 10 * kInch, 11 * kInch));
  CHECK_FALSE(has_zone_within(high, 0.4 * L, 0.6 * L));
  CHECK(has_zone_within(high, 10 * kInch, 11 * kInch));
}

TEST_CASE("spatial mean peak grows with actuator stiffness") {
  SweepSpec spec = reference_spec();
  const double L = spec.base.geometry.length;
  spec.position_sets = {{0.16 * L, 0.84 * L}};
  spec.stiffness_values = {10e3, 16.18e3, 25e3};
  const auto groups = quantile_summary(run_sweep(spec), GroupBy::Stiffness);
  REQUIRE(groups.size() == 3);
  CHECK(groups[1].stats.mean >= groups[0].stats.mean);
  CHECK(groups[2].stats.mean >= groups[1].stats.mean);
}
