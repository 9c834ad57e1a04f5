#include "hapticbar/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hapticbar/error.hpp"
#include "hapticbar/units.hpp"

namespace hapticbar {

namespace {

using nlohmann::json;
using units::Dimension;

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCode::ConfigParse, message); }

const json& require_key(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where + ": missing '" + key + "'");
  return obj.at(key);
}

double quantity(const json& value, Dimension dim, const std::string& where) {
  if (!value.is_string()) fail(where + ": expected a string with a unit, e.g. \"12 in\"");
  try {
    return units::parse_quantity(value.get<std::string>(), dim);
  } catch (const Error& e) {
    fail(where + ": " + e.what());
  }
}

double position(const json& value, double length, const std::string& where) {
  if (!value.is_string()) fail(where + ": expected a position string, e.g. \"0.16 L\"");
  try {
    return parse_position(value.get<std::string>(), length);
  } catch (const Error& e) {
    fail(where + ": " + e.what());
  }
}

Material parse_material(const json& node) {
  if (node.is_string()) return material_catalog(node.get<std::string>());
  Material m;
  m.name = node.value("name", std::string("custom"));
  m.elastic_modulus =
      quantity(require_key(node, "elastic_modulus", "material"), Dimension::Pressure,
               "material.elastic_modulus");
  m.density = quantity(require_key(node, "density", "material"), Dimension::Density,
                       "material.density");
  return m;
}

ActuatorAttachment parse_attachment(const json& node, double length, std::size_t index) {
  const std::string where = "attachments[" + std::to_string(index) + "]";
  ActuatorAttachment a;
  a.id = node.value("id", "actuator" + std::to_string(index + 1));
  a.position = position(require_key(node, "position", where), length, where + ".position");
  a.stiffness =
      quantity(require_key(node, "stiffness", where), Dimension::Stiffness, where + ".stiffness");
  a.bolt_mass =
      quantity(require_key(node, "bolt_mass", where), Dimension::Mass, where + ".bolt_mass");
  const bool has_ratio = node.contains("damping_ratio");
  const bool has_coeff = node.contains("damping_coefficient");
  if (has_ratio == has_coeff) {
    fail(where + ": give exactly one of 'damping_ratio' or 'damping_coefficient'");
  }
  if (has_ratio) {
    if (!node.at("damping_ratio").is_number()) fail(where + ".damping_ratio: expected a number");
    a.damping = DampingRatio{node.at("damping_ratio").get<double>()};
  } else {
    a.damping = DampingCoefficient{quantity(node.at("damping_coefficient"), Dimension::Damping,
                                            where + ".damping_coefficient")};
  }
  a.base_amplitude = node.contains("base_amplitude")
                         ? quantity(node.at("base_amplitude"), Dimension::Length,
                                    where + ".base_amplitude")
                         : 0.0;
  return a;
}

ExcitationCommand parse_excitation(const json& node, double length, const std::string& where) {
  const double f =
      quantity(require_key(node, "frequency", where), Dimension::Frequency, where + ".frequency");
  if (node.contains("actuator")) {
    if (!node.at("actuator").is_string()) fail(where + ".actuator: expected an attachment id");
    return ExcitationCommand::actuator(node.at("actuator").get<std::string>(), f);
  }
  if (node.contains("force")) {
    const double amplitude = quantity(node.at("force"), Dimension::Force, where + ".force");
    const double x = position(require_key(node, "position", where), length, where + ".position");
    return ExcitationCommand::direct_force(x, amplitude, f);
  }
  fail(where + ": needs either 'actuator' or 'force'");
}

std::vector<ExcitationCommand> parse_excitation_list(const json& node, double length,
                                                     const std::string& where) {
  if (!node.is_array()) fail(where + ": expected an array");
  std::vector<ExcitationCommand> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(parse_excitation(node[i], length, where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

double parse_position(std::string_view text, double length) {
  std::string_view s = text;
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.back() == 'L') {
    s.remove_suffix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    double fraction = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), fraction);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::UnitParse, "bad relative position '" + std::string(text) + "'");
    }
    return fraction == 1.0 ? length : fraction * length;
  }
  return units::parse_quantity(text, Dimension::Length);
}

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) fail("top level must be an object");
  Scenario sc;
  StudyConfig& cfg = sc.study;
  cfg.material = parse_material(require_key(doc, "material", "config"));

  const json& geo = require_key(doc, "geometry", "config");
  cfg.geometry.length =
      quantity(require_key(geo, "length", "geometry"), Dimension::Length, "geometry.length");
  cfg.geometry.width =
      quantity(require_key(geo, "width", "geometry"), Dimension::Length, "geometry.width");
  cfg.geometry.thickness = quantity(require_key(geo, "thickness", "geometry"), Dimension::Length,
                                    "geometry.thickness");
  const double length = cfg.geometry.length;

  if (doc.contains("mesh")) {
    const json& mesh = doc.at("mesh");
    if (!mesh.contains("elements") || !mesh.at("elements").is_number_integer()) {
      fail("mesh.elements: expected an integer");
    }
    cfg.element_count = mesh.at("elements").get<int>();
  }
  if (doc.contains("gravity")) {
    cfg.gravity = quantity(doc.at("gravity"), Dimension::Acceleration, "gravity");
  }
  if (doc.contains("supports")) {
    const json& supports = doc.at("supports");
    if (supports.contains("pinned")) {
      const json& pinned = supports.at("pinned");
      if (!pinned.is_array()) fail("supports.pinned: expected an array");
      for (std::size_t i = 0; i < pinned.size(); ++i) {
        cfg.pinned_positions.push_back(
            position(pinned[i], length, "supports.pinned[" + std::to_string(i) + "]"));
      }
    }
  }
  if (doc.contains("attachments")) {
    const json& list = doc.at("attachments");
    if (!list.is_array()) fail("attachments: expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      cfg.attachments.push_back(parse_attachment(list[i], length, i));
    }
  }
  if (doc.contains("excitations")) {
    cfg.excitations = parse_excitation_list(doc.at("excitations"), length, "excitations");
  }
  if (doc.contains("excitation_sets")) {
    const json& sets = doc.at("excitation_sets");
    if (!sets.is_array()) fail("excitation_sets: expected an array");
    for (std::size_t i = 0; i < sets.size(); ++i) {
      sc.excitation_sets.push_back(
          parse_excitation_list(sets[i], length, "excitation_sets[" + std::to_string(i) + "]"));
    }
  }

  validate(cfg);
  for (const auto& set : sc.excitation_sets) {
    StudyConfig probe = cfg;
    probe.excitations = set;
    validate(probe);
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string raw = buf.str();
  json doc;
  try {
    doc = json::parse(raw);
  } catch (const json::parse_error& e) {
    fail("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  Scenario sc = parse_scenario(doc);
  sc.raw = std::move(raw);
  return sc;
}

BeamGeometry reference_geometry() {
  return {units::parse_quantity("12 in", Dimension::Length),
          units::parse_quantity("0.984 in", Dimension::Length),
          units::parse_quantity("0.03937 in", Dimension::Length)};
}

ActuatorAttachment reference_actuator() {
  ActuatorAttachment a;
  a.id = "actuator";
  a.stiffness = 16180.0;
  a.bolt_mass = 0.005;
  a.damping = DampingRatio{0.02};
  a.base_amplitude = 0.04125e-3;
  return a;
}

}  // namespace hapticbar
