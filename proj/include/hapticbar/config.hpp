#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hapticbar/model.hpp"

namespace hapticbar {

/// A scenario document: the study plus optional alternative excitation sets
/// (used to study dead-zone nullification by switching frequencies).
struct Scenario {
  StudyConfig study;
  std::vector<std::vector<ExcitationCommand>> excitation_sets;
  std::string raw;  // exact bytes the scenario was read from
};

/// Parses a position such as "0.16 L" (fraction of the bar length) or any
/// length quantity ("3 in", "0.05 m").
double parse_position(std::string_view text, double length);

/// Builds and validates a scenario from JSON. Dimensional fields must be
/// strings with an explicit unit. Throws Error(ConfigParse) or a validation
/// Error.
Scenario parse_scenario(const nlohmann::json& doc);

/// Reads a scenario file. Throws Error(ConfigParse) naming the path when the
/// file is missing or malformed.
Scenario load_scenario(const std::filesystem::path& path);

/// The reference bar: 12 in x 0.984 in x 0.03937 in, 30 elements.
BeamGeometry reference_geometry();

/// Reference actuator: k_b = 16.18 kN/m, zeta = 0.02, m_b = 5 g,
/// a = 0.04125 mm. The bolt mass is an assumption, not a measured value.
ActuatorAttachment reference_actuator();

}  // namespace hapticbar
