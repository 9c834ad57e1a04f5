#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hapticbar/error.hpp"
#include "hapticbar/modal.hpp"
#include "support.hpp"

using namespace hapticbar;
using testing_support::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

// Free bar on two to three randomized actuators.
StudyConfig random_mounted(Gen& gen) {
  StudyConfig cfg = testing_support::reference_bar(material_names()[gen.integer(0, 2)],
                                                   gen.integer(4, 16));
  const double L = cfg.geometry.length;
  const int count = gen.integer(2, 3);
  for (int i = 0; i < count; ++i) {
    ActuatorAttachment a = testing_support::actuator_at("a" + std::to_string(i),
                                                        gen.uniform(0.0, L));
    a.stiffness = gen.log_uniform(5e3, 5e4);
    a.bolt_mass = gen.uniform(0.001, 0.02);
    a.damping = DampingRatio{gen.uniform(0.0, 0.1)};
    cfg.attachments.push_back(a);
  }
  return cfg;
}

double max_abs(const Eigen::VectorXcd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("state matrix of single-DOF systems") {
  Eigen::Matrix2d expected;
  expected << 0, 1, -4, 0;
  CHECK(state_matrix(testing_support::sdof(1, 0, 4)) == expected);
  expected << 0, 1, -2, -0.4;
  CHECK((state_matrix(testing_support::sdof(2, 0.8, 4)) - expected).cwiseAbs().maxCoeff() <
        1e-15);
}

TEST_CASE("state matrix block structure") {
  const AssembledSystem sys = build_system(testing_support::pinned_bar("copper", 6));
  const int n = sys.size();
  const Eigen::MatrixXd a = state_matrix(sys);
  CHECK(a.rows() == 2 * n);
  CHECK(a.topRightCorner(n, n) == Eigen::MatrixXd::Identity(n, n));
  CHECK(a.topLeftCorner(n, n).isZero(0.0));
  const Eigen::MatrixXd mk = sys.mass * a.bottomLeftCorner(n, n);
  CHECK((mk + sys.stiffness).norm() <= 1e-12 * sys.stiffness.norm());
}

TEST_CASE("singular mass is reported") {
  try {
    state_matrix(testing_support::sdof(0, 0, 1));
    FAIL("accepted a zero mass");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMass);
  }
}

TEST_CASE("single-DOF modes") {
  ModalResult r = modes(testing_support::sdof(1, 0, 4));
  REQUIRE(r.state_size() == 2);
  CHECK(r.eigenvalues[0].real() == doctest::Approx(0.0));
  CHECK(r.eigenvalues[0].imag() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.eigenvalues[1] == std::conj(r.eigenvalues[0]));
  CHECK(r.damped_frequencies_hz[0] == doctest::Approx(1.0 / kPi).epsilon(1e-14));

  r = modes(testing_support::sdof(1, 0.4, 4));
  CHECK(r.eigenvalues[0].real() == doctest::Approx(-0.2).epsilon(1e-14));
  CHECK(r.eigenvalues[0].imag() == doctest::Approx(std::sqrt(3.96)).epsilon(1e-14));
  CHECK(r.eigenvalues[0].imag() == doctest::Approx(1.98997).epsilon(1e-5));
  CHECK(r.modal_damping[0] == doctest::Approx(0.1).epsilon(1e-13));
}

TEST_CASE("pinned-pinned FE modes match the closed form") {
  const StudyConfig cfg = testing_support::pinned_bar();
  const AssembledSystem sys = build_system(cfg);
  CHECK(sys.mesh.dof_count() == 62);
  const std::vector<double> fe = modes(sys).oscillatory_frequencies_hz();
  const std::vector<double> exact = analytical_pinned_frequencies(cfg.material, cfg.geometry, 5);
  for (int k = 0; k < 5; ++k) {
    CAPTURE(k);
    CHECK(std::abs(fe[k] - exact[k]) / exact[k] <= 5.2e-5);
  }
}

TEST_CASE("closed-form pinned frequencies") {
  const StudyConfig cfg = testing_support::pinned_bar();
  const auto f = analytical_pinned_frequencies(cfg.material, cfg.geometry, 5);
  const double table[] = {24.8197, 99.2788, 223.3773, 397.1153, 620.4928};
  for (int k = 0; k < 5; ++k) {
    CAPTURE(k);
    CHECK(std::abs(f[k] - table[k]) / table[k] <= 2e-3);
    CHECK(f[k] / f[0] == doctest::Approx((k + 1.0) * (k + 1.0)).epsilon(1e-13));
  }
  BeamGeometry longer = cfg.geometry;
  longer.length *= 4.0;
  const auto g = analytical_pinned_frequencies(cfg.material, longer, 5);
  for (int k = 0; k < 5; ++k) CHECK(g[k] == doctest::Approx(f[k] / 16.0).epsilon(1e-13));
}

TEST_CASE("spectrum properties on randomized mounted bars") {
  Gen gen(41);
  for (int trial = 0; trial < 25; ++trial) {
    const AssembledSystem sys = build_system(random_mounted(gen));
    const ModalResult r = modes(sys);
    const Eigen::MatrixXd a = state_matrix(sys);
    const double smax = max_abs(r.eigenvalues);
    for (int j = 0; j < r.state_size(); ++j) {
      const std::complex<double> s = r.eigenvalues[j];
      const Eigen::VectorXcd v = r.eigenvectors.col(j);
      CHECK((a.cast<std::complex<double>>() * v - s * v).norm() <= 1e-8 * a.norm());
      CHECK(s.real() <= 1e-8 * smax);
      if (j > 0) CHECK(std::abs(s.imag()) >= std::abs(r.eigenvalues[j - 1].imag()) - 1e-12 * smax);
      if (s.imag() > 0.0) {
        REQUIRE(j + 1 < r.state_size());
        CHECK(std::abs(s - std::conj(r.eigenvalues[j + 1])) <= 1e-10 * std::abs(s));
      }
    }
  }
}

TEST_CASE("undamped spectrum agrees with the symmetric generalized problem") {
  Gen gen(42);
  for (int trial = 0; trial < 20; ++trial) {
    StudyConfig cfg = random_mounted(gen);
    for (auto& a : cfg.attachments) a.damping = DampingCoefficient{0.0};
    const AssembledSystem sys = build_system(cfg);
    const ModalResult r = modes(sys);
    const std::vector<double> natural = natural_frequencies(sys);
    const double smax = max_abs(r.eigenvalues);
    for (int j = 0; j < r.state_size(); ++j) {
      CHECK(std::abs(r.eigenvalues[j].real()) <= 1e-8 * smax);
      const double omega = 2.0 * kPi * natural[j / 2];
      CHECK(std::abs(std::abs(r.eigenvalues[j].imag()) - omega) <= 1e-8 * smax);
    }
  }
}

TEST_CASE("stiffer actuators never lower the fundamental") {
  Gen gen(43);
  for (int trial = 0; trial < 10; ++trial) {
    StudyConfig cfg = random_mounted(gen);
    const std::size_t which = gen.integer(0, static_cast<int>(cfg.attachments.size()) - 1);
    double previous = 0.0;
    double k = cfg.attachments[which].stiffness;
    for (int step = 0; step < 6; ++step) {
      k *= gen.uniform(1.05, 2.0);
      cfg.attachments[which].stiffness = k;
      const double f1 = modes(build_system(cfg)).oscillatory_frequencies_hz().front();
      CHECK(f1 >= previous * (1.0 - 1e-10));
      previous = f1;
    }
  }
}
