#include "hapticbar/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

#include "hapticbar/error.hpp"

namespace hapticbar {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

struct CatalogEntry {
  const char* label;
  double modulus_gpa;
  double density;
};

constexpr CatalogEntry kCatalog[] = {
    {"aluminum", 70.0, 2700.0},
    {"dragontrail", 74.0, 2480.0},
    {"copper", 130.0, 8960.0},
};

void require(bool ok, ErrorCode code, const std::string& message) {
  if (!ok) throw Error(code, message);
}

}  // namespace

ExcitationCommand ExcitationCommand::direct_force(double position, double amplitude,
                                                  double frequency_hz) {
  ExcitationCommand cmd;
  cmd.kind = ExcitationKind::DirectForce;
  cmd.position = position;
  cmd.force_amplitude = amplitude;
  cmd.frequency_hz = frequency_hz;
  return cmd;
}

ExcitationCommand ExcitationCommand::actuator(std::string attachment_id, double frequency_hz) {
  ExcitationCommand cmd;
  cmd.kind = ExcitationKind::ActuatorBase;
  cmd.attachment_id = std::move(attachment_id);
  cmd.frequency_hz = frequency_hz;
  return cmd;
}

Material material_catalog(std::string_view name) {
  std::string key = lowercase(name);
  if (key == "dragontrail glass" || key == "dragontrail_glass") key = "dragontrail";
  if (key == "aluminium") key = "aluminum";
  for (const auto& entry : kCatalog) {
    if (key == entry.label) {
      return Material{entry.label, entry.modulus_gpa * 1e9, entry.density};
    }
  }
  throw Error(ErrorCode::UnknownMaterial, "'" + std::string(name) + "' is not in the catalog");
}

std::vector<std::string> material_names() {
  std::vector<std::string> names;
  for (const auto& entry : kCatalog) names.emplace_back(entry.label);
  return names;
}

SectionProperties derived_section(const BeamGeometry& geometry) {
  validate(geometry);
  const double b = geometry.width;
  const double h = geometry.thickness;
  return {b * h, b * h * h * h / 12.0};
}

double resolve_damping(const ActuatorAttachment& attachment) {
  if (const auto* c = std::get_if<DampingCoefficient>(&attachment.damping)) {
    require(c->value >= 0.0, ErrorCode::InvalidArgument,
            "damping coefficient of '" + attachment.id + "' is negative");
    return c->value;
  }
  const double zeta = std::get<DampingRatio>(attachment.damping).value;
  require(zeta >= 0.0, ErrorCode::InvalidArgument,
          "damping ratio of '" + attachment.id + "' is negative");
  require(attachment.bolt_mass > 0.0, ErrorCode::MissingMass,
          "damping ratio on '" + attachment.id + "' needs a positive bolt mass");
  require(attachment.stiffness >= 0.0, ErrorCode::InvalidArgument,
          "stiffness of '" + attachment.id + "' is negative");
  return 2.0 * zeta * std::sqrt(attachment.stiffness * attachment.bolt_mass);
}

void validate(const Material& material) {
  require(material.elastic_modulus > 0.0, ErrorCode::InvalidArgument,
          "elastic modulus must be positive");
  require(material.density > 0.0, ErrorCode::InvalidArgument, "density must be positive");
}

void validate(const BeamGeometry& geometry) {
  require(geometry.length > 0.0 && geometry.width > 0.0 && geometry.thickness > 0.0,
          ErrorCode::InvalidArgument, "beam length, width and thickness must be positive");
}

bool exceeds_thin_beam_ratio(const BeamGeometry& geometry) {
  return geometry.thickness / geometry.length > kThinBeamRatioLimit;
}

void validate(const ActuatorAttachment& attachment, const BeamGeometry& geometry) {
  require(attachment.position >= 0.0 && attachment.position <= geometry.length,
          ErrorCode::PositionOutOfRange,
          "attachment '" + attachment.id + "' lies outside [0, L]");
  require(attachment.stiffness >= 0.0, ErrorCode::InvalidArgument,
          "stiffness of '" + attachment.id + "' is negative");
  require(attachment.bolt_mass >= 0.0, ErrorCode::InvalidArgument,
          "bolt mass of '" + attachment.id + "' is negative");
  require(attachment.base_amplitude >= 0.0, ErrorCode::InvalidArgument,
          "base amplitude of '" + attachment.id + "' is negative");
  resolve_damping(attachment);
}

void validate(const ExcitationCommand& excitation, const BeamGeometry& geometry) {
  require(excitation.frequency_hz > 0.0, ErrorCode::InvalidArgument,
          "excitation frequency must be positive");
  if (excitation.kind == ExcitationKind::DirectForce) {
    require(excitation.position >= 0.0 && excitation.position <= geometry.length,
            ErrorCode::PositionOutOfRange, "force position lies outside [0, L]");
    require(excitation.force_amplitude >= 0.0, ErrorCode::InvalidArgument,
            "force amplitude is negative");
  }
}

void validate(const StudyConfig& config) {
  validate(config.material);
  validate(config.geometry);
  require(config.element_count >= 2, ErrorCode::InvalidArgument,
          "element count must be at least 2");
  require(config.gravity > 0.0, ErrorCode::InvalidArgument, "gravity constant must be positive");
  std::unordered_set<std::string> ids;
  for (const auto& a : config.attachments) {
    validate(a, config.geometry);
    require(ids.insert(a.id).second, ErrorCode::InvalidArgument,
            "duplicate attachment id '" + a.id + "'");
  }
  for (const auto& e : config.excitations) {
    validate(e, config.geometry);
    if (e.kind == ExcitationKind::ActuatorBase) {
      require(ids.count(e.attachment_id) == 1, ErrorCode::UnknownAttachment,
              "excitation references unknown attachment '" + e.attachment_id + "'");
    }
  }
  for (double x : config.pinned_positions) {
    require(x >= 0.0 && x <= config.geometry.length, ErrorCode::PositionOutOfRange,
            "pinned support lies outside [0, L]");
  }
}

const ActuatorAttachment* find_attachment(const StudyConfig& config, std::string_view id) {
  for (const auto& a : config.attachments) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

}  // namespace hapticbar
