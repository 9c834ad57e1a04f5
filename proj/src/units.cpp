#include "hapticbar/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <system_error>

#include "hapticbar/error.hpp"

namespace hapticbar::units {

namespace {

// SI value = value * num / den. Keeping the factor as a ratio makes
// conversions such as inch -> m correctly rounded (12 in -> 0.3048 m).
struct UnitDef {
  std::string_view symbol;
  Dimension dim;
  double num;
  double den;
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr std::array kUnits{
    UnitDef{"m", Dimension::Length, 1.0, 1.0},
    UnitDef{"mm", Dimension::Length, 1.0, 1000.0},
    UnitDef{"cm", Dimension::Length, 1.0, 100.0},
    UnitDef{"in", Dimension::Length, 254.0, 10000.0},
    UnitDef{"Pa", Dimension::Pressure, 1.0, 1.0},
    UnitDef{"kPa", Dimension::Pressure, 1e3, 1.0},
    UnitDef{"MPa", Dimension::Pressure, 1e6, 1.0},
    UnitDef{"GPa", Dimension::Pressure, 1e9, 1.0},
    UnitDef{"kg/m3", Dimension::Density, 1.0, 1.0},
    UnitDef{"kg/m^3", Dimension::Density, 1.0, 1.0},
    UnitDef{"g/cm3", Dimension::Density, 1000.0, 1.0},
    UnitDef{"g/cm^3", Dimension::Density, 1000.0, 1.0},
    UnitDef{"N/m", Dimension::Stiffness, 1.0, 1.0},
    UnitDef{"kN/m", Dimension::Stiffness, 1e3, 1.0},
    UnitDef{"N/mm", Dimension::Stiffness, 1e3, 1.0},
    UnitDef{"kg", Dimension::Mass, 1.0, 1.0},
    UnitDef{"g", Dimension::Mass, 1.0, 1000.0},
    UnitDef{"N*s/m", Dimension::Damping, 1.0, 1.0},
    UnitDef{"N.s/m", Dimension::Damping, 1.0, 1.0},
    UnitDef{"Ns/m", Dimension::Damping, 1.0, 1.0},
    UnitDef{"kg/s", Dimension::Damping, 1.0, 1.0},
    UnitDef{"Hz", Dimension::Frequency, 1.0, 1.0},
    UnitDef{"kHz", Dimension::Frequency, 1e3, 1.0},
    UnitDef{"rad/s", Dimension::Frequency, 1.0, kTwoPi},
    UnitDef{"N", Dimension::Force, 1.0, 1.0},
    UnitDef{"kN", Dimension::Force, 1e3, 1.0},
    UnitDef{"m/s2", Dimension::Acceleration, 1.0, 1.0},
    UnitDef{"m/s^2", Dimension::Acceleration, 1.0, 1.0},
};

const UnitDef* find_unit(std::string_view symbol) {
  for (const auto& u : kUnits) {
    if (u.symbol == symbol) return &u;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string_view dimension_name(Dimension dim) {
  switch (dim) {
    case Dimension::Length: return "length";
    case Dimension::Pressure: return "pressure";
    case Dimension::Density: return "density";
    case Dimension::Stiffness: return "stiffness";
    case Dimension::Mass: return "mass";
    case Dimension::Damping: return "damping";
    case Dimension::Frequency: return "frequency";
    case Dimension::Force: return "force";
    case Dimension::Acceleration: return "acceleration";
  }
  return "?";
}

}  // namespace

double parse_quantity(std::string_view text, Dimension dim) {
  const std::string_view s = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{}) {
    throw Error(ErrorCode::UnitParse, "no numeric value in '" + std::string(text) + "'");
  }
  const std::string_view symbol = trim(std::string_view(ptr, s.data() + s.size() - ptr));
  if (symbol.empty()) {
    throw Error(ErrorCode::UnitParse, "missing unit in '" + std::string(text) + "'");
  }
  const UnitDef* unit = find_unit(symbol);
  if (unit == nullptr) {
    throw Error(ErrorCode::UnitParse, "unknown unit '" + std::string(symbol) + "'");
  }
  if (unit->dim != dim) {
    throw Error(ErrorCode::UnitParse, "unit '" + std::string(symbol) + "' is not a " +
                                          std::string(dimension_name(dim)) + " unit");
  }
  if (unit->num == 1.0 && unit->den == 1.0) return value;
  return value * unit->num / unit->den;
}

std::string format_shortest(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string format_17g(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

std::string format_quantity(double si_value, std::string_view unit) {
  const UnitDef* def = find_unit(unit);
  if (def == nullptr) {
    throw Error(ErrorCode::UnitParse, "unknown unit '" + std::string(unit) + "'");
  }
  const double v =
      (def->num == 1.0 && def->den == 1.0) ? si_value : si_value * def->den / def->num;
  return format_shortest(v) + " " + std::string(unit);
}

}  // namespace hapticbar::units
