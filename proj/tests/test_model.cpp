#include <doctest.h>

#include <cmath>

#include "hapticbar/error.hpp"
#include "hapticbar/model.hpp"
#include "hapticbar/units.hpp"
#include "support.hpp"

using namespace hapticbar;
using testing_support::Gen;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

ActuatorAttachment attachment(double k, double mb, DampingSpec damping) {
  ActuatorAttachment a;
  a.id = "a";
  a.stiffness = k;
  a.bolt_mass = mb;
  a.damping = damping;
  return a;
}

}  // namespace

TEST_CASE("material catalog values") {
  const Material al = material_catalog("aluminum");
  CHECK(al.elastic_modulus == 70e9);
  CHECK(al.density == 2700.0);
  const Material dt = material_catalog("dragontrail");
  CHECK(dt.elastic_modulus == 74e9);
  CHECK(dt.density == 2480.0);
  const Material cu = material_catalog("copper");
  CHECK(cu.elastic_modulus == 130e9);
  CHECK(cu.density == 8960.0);
}

TEST_CASE("material catalog is case-insensitive and rejects unknown names") {
  CHECK(material_catalog("AlUmInUm").density == 2700.0);
  CHECK(material_catalog("Dragontrail Glass").elastic_modulus == 74e9);
  CHECK(code_of([] { material_catalog("steel"); }) == ErrorCode::UnknownMaterial);
  CHECK(material_names().size() == 3);
}

TEST_CASE("derived section") {
  auto s = derived_section({1.0, 0.024, 0.001});
  CHECK(s.area == doctest::Approx(2.4e-5).epsilon(1e-14));
  CHECK(s.second_moment == doctest::Approx(2.0e-12).epsilon(1e-14));

  s = derived_section({1.0, 1.0, 1.0});
  CHECK(s.area == 1.0);
  CHECK(s.second_moment == doctest::Approx(1.0 / 12.0).epsilon(1e-15));

  s = derived_section({0.3048, 0.0249936, 0.00099998});
  CHECK(s.area == doctest::Approx(2.4993e-5).epsilon(1e-4));
  CHECK(s.second_moment == doctest::Approx(2.0827e-12).epsilon(1e-4));
}

TEST_CASE("derived section scales as h and h^3") {
  Gen gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const BeamGeometry g{gen.uniform(0.1, 1.0), gen.uniform(0.005, 0.05), gen.uniform(1e-4, 5e-3)};
    const double s = gen.uniform(0.2, 5.0);
    BeamGeometry scaled = g;
    scaled.thickness *= s;
    const auto a = derived_section(g);
    const auto b = derived_section(scaled);
    CHECK(b.area / a.area == doctest::Approx(s).epsilon(1e-13));
    CHECK(b.second_moment / a.second_moment == doctest::Approx(s * s * s).epsilon(1e-13));
  }
}

TEST_CASE("resolve damping") {
  CHECK(resolve_damping(attachment(1000.0, 0.0, DampingCoefficient{0.5})) == 0.5);
  CHECK(resolve_damping(attachment(1234.0, 0.3, DampingRatio{0.0})) == 0.0);
  // 2 * 0.02 * sqrt(16180 * 0.005)
  CHECK(resolve_damping(attachment(16180.0, 0.005, DampingRatio{0.02})) ==
        doctest::Approx(0.35977).epsilon(1e-4));
  CHECK(code_of([] { resolve_damping(attachment(16180.0, 0.0, DampingRatio{0.02})); }) ==
        ErrorCode::MissingMass);
}

TEST_CASE("resolve damping is monotone in zeta, k_b and m_b") {
  Gen gen(12);
  for (int trial = 0; trial < 100; ++trial) {
    const double z = gen.uniform(0.0, 0.2);
    const double k = gen.log_uniform(1e2, 1e6);
    const double m = gen.log_uniform(1e-4, 1e-1);
    const double base = resolve_damping(attachment(k, m, DampingRatio{z}));
    CHECK(resolve_damping(attachment(k, m, DampingRatio{z * gen.uniform(1.0, 3.0)})) >= base);
    CHECK(resolve_damping(attachment(k * gen.uniform(1.0, 3.0), m, DampingRatio{z})) >= base);
    CHECK(resolve_damping(attachment(k, m * gen.uniform(1.0, 3.0), DampingRatio{z})) >= base);
  }
}

TEST_CASE("validation rejects out-of-range records") {
  CHECK(code_of([] { validate(Material{"x", 0.0, 1.0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { validate(BeamGeometry{1.0, -1.0, 0.1}); }) == ErrorCode::InvalidArgument);

  const BeamGeometry g{0.3, 0.02, 0.001};
  ActuatorAttachment a = attachment(100.0, 0.01, DampingRatio{0.02});
  a.position = 0.31;
  CHECK(code_of([&] { validate(a, g); }) == ErrorCode::PositionOutOfRange);
  a.position = 0.1;
  a.stiffness = -1.0;
  CHECK(code_of([&] { validate(a, g); }) == ErrorCode::InvalidArgument);

  CHECK(code_of([&] { validate(ExcitationCommand::direct_force(0.1, 1.0, 0.0), g); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { validate(ExcitationCommand::direct_force(0.4, 1.0, 100.0), g); }) ==
        ErrorCode::PositionOutOfRange);

  StudyConfig cfg;
  cfg.material = material_catalog("copper");
  cfg.geometry = g;
  cfg.excitations = {ExcitationCommand::actuator("ghost", 200.0)};
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::UnknownAttachment);
  cfg.excitations.clear();
  cfg.element_count = 1;
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("thin beam ratio is a warning threshold only") {
  CHECK_FALSE(exceeds_thin_beam_ratio({0.3048, 0.025, 0.001}));
  CHECK(exceeds_thin_beam_ratio({0.1, 0.025, 0.01}));
  CHECK_NOTHROW(validate(BeamGeometry{0.1, 0.025, 0.01}));
}
