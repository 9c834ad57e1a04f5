#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hapticbar/units.hpp"

namespace hapticbar {

struct Material {
  std::string name;
  double elastic_modulus = 0.0;  // Pa
  double density = 0.0;          // kg/m^3
};

struct BeamGeometry {
  double length = 0.0;     // m
  double width = 0.0;      // m
  double thickness = 0.0;  // m
};

struct SectionProperties {
  double area = 0.0;           // m^2
  double second_moment = 0.0;  // m^4
};

struct DampingRatio {
  double value = 0.0;
};

struct DampingCoefficient {
  double value = 0.0;  // N*s/m
};

using DampingSpec = std::variant<DampingRatio, DampingCoefficient>;

/// One actuator bolted to the bar: a grounded spring-damper with the bolt
/// mass lumped at the attachment point, driven by a sinusoidal base motion.
struct ActuatorAttachment {
  std::string id;
  double position = 0.0;        // m from the left end
  double stiffness = 0.0;       // N/m
  double bolt_mass = 0.0;       // kg
  DampingSpec damping = DampingCoefficient{0.0};
  double base_amplitude = 0.0;  // m, peak of the base sinusoid
};

enum class ExcitationKind { DirectForce, ActuatorBase };

struct ExcitationCommand {
  ExcitationKind kind = ExcitationKind::ActuatorBase;
  double frequency_hz = 0.0;
  // DirectForce only
  double position = 0.0;         // m
  double force_amplitude = 0.0;  // N
  // ActuatorBase only
  std::string attachment_id;

  static ExcitationCommand direct_force(double position, double amplitude, double frequency_hz);
  static ExcitationCommand actuator(std::string attachment_id, double frequency_hz);
};

struct StudyConfig {
  Material material;
  BeamGeometry geometry;
  std::vector<ActuatorAttachment> attachments;
  std::vector<ExcitationCommand> excitations;
  int element_count = 30;
  double gravity = units::kStandardGravity;
  /// Positions whose translation is eliminated (pinned supports).
  std::vector<double> pinned_positions;
};

/// Case-insensitive lookup of the built-in material table; also accepts
/// "dragontrail glass". Throws Error(UnknownMaterial).
Material material_catalog(std::string_view name);

/// Labels accepted by material_catalog, in table order.
std::vector<std::string> material_names();

SectionProperties derived_section(const BeamGeometry& geometry);

/// c if given directly, otherwise 2*zeta*sqrt(k_b*m_b). Throws
/// Error(MissingMass) when a damping ratio comes without a bolt mass.
double resolve_damping(const ActuatorAttachment& attachment);

// Validation. Each throws Error(InvalidArgument / PositionOutOfRange /
// MissingMass / UnknownAttachment) describing the first violated invariant.
void validate(const Material& material);
void validate(const BeamGeometry& geometry);
void validate(const ActuatorAttachment& attachment, const BeamGeometry& geometry);
void validate(const ExcitationCommand& excitation, const BeamGeometry& geometry);
void validate(const StudyConfig& config);

/// Thickness-to-length ratio above which the thin-beam assumption is
/// questionable; not an error.
inline constexpr double kThinBeamRatioLimit = 0.05;
bool exceeds_thin_beam_ratio(const BeamGeometry& geometry);

const ActuatorAttachment* find_attachment(const StudyConfig& config, std::string_view id);

}  // namespace hapticbar
