#include <doctest.h>

#include <charconv>
#include <cstring>

#include "hapticbar/config.hpp"
#include "hapticbar/error.hpp"
#include "hapticbar/units.hpp"
#include "support.hpp"

using namespace hapticbar;
using units::Dimension;

TEST_CASE("inch round trip is exact") {
  const double x = units::parse_quantity("12 in", Dimension::Length);
  CHECK(x == 0.3048);
  CHECK(units::format_quantity(x, "m") == "0.3048 m");
}

TEST_CASE("unit table") {
  CHECK(units::parse_quantity("70 GPa", Dimension::Pressure) == 70e9);
  CHECK(units::parse_quantity("16.18 kN/m", Dimension::Stiffness) == doctest::Approx(16180.0));
  CHECK(units::parse_quantity("0.04125 mm", Dimension::Length) == doctest::Approx(4.125e-5));
  CHECK(units::parse_quantity("5 g", Dimension::Mass) == doctest::Approx(0.005));
  CHECK(units::parse_quantity("2700 kg/m3", Dimension::Density) == 2700.0);
  CHECK(units::parse_quantity("0.36 N*s/m", Dimension::Damping) == 0.36);
  CHECK(units::parse_quantity("205 Hz", Dimension::Frequency) == 205.0);
  CHECK(units::parse_quantity("2 N", Dimension::Force) == 2.0);
  CHECK(units::parse_quantity("9.81 m/s^2", Dimension::Acceleration) == 9.81);
}

TEST_CASE("unit errors") {
  for (const char* bad : {"12", "12 furlongs", "12 GPa", "in", ""}) {
    CAPTURE(bad);
    try {
      units::parse_quantity(bad, Dimension::Length);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnitParse);
    }
  }
}

TEST_CASE("relative positions") {
  const double L = 0.3048;
  CHECK(parse_position("0.16 L", L) == 0.16 * L);
  CHECK(parse_position("1 L", L) == L);
  CHECK(parse_position("3 in", L) == doctest::Approx(0.0762));
}

TEST_CASE("17 digit formatting round-trips") {
  testing_support::Gen gen(21);
  for (int i = 0; i < 500; ++i) {
    const double v = gen.uniform(-1.0, 1.0) * std::pow(10.0, gen.integer(-20, 20));
    const std::string s = units::format_17g(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(std::memcmp(&v, &back, sizeof v) == 0);
    CHECK(s.find(',') == std::string::npos);
  }
}
