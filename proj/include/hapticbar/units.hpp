#pragma once

#include <string>
#include <string_view>

namespace hapticbar::units {

/// Physical dimension a quantity string is expected to carry.
enum class Dimension {
  Length,
  Pressure,
  Density,
  Stiffness,
  Mass,
  Damping,
  Frequency,
  Force,
  Acceleration,
};

inline constexpr double kStandardGravity = 9.80665;  // m/s^2
inline constexpr double kInch = 0.0254;              // m

/// Parses "<number> <unit>" (space optional) into SI. Throws Error(UnitParse)
/// when the unit is missing, unknown, or of the wrong dimension.
double parse_quantity(std::string_view text, Dimension dim);

/// Formats an SI value in the requested unit using the shortest decimal
/// string that round-trips, e.g. format_quantity(0.3048, "m") == "0.3048 m".
std::string format_quantity(double si_value, std::string_view unit);

/// Shortest round-trip decimal representation, locale independent.
std::string format_shortest(double value);

/// Fixed 17 significant digit representation, locale independent.
std::string format_17g(double value);

}  // namespace hapticbar::units
