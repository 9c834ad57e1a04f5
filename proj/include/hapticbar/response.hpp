#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hapticbar/fem.hpp"
#include "hapticbar/modal.hpp"

namespace hapticbar {

/// One forcing term g sin(omega t) + h cos(omega t).
struct HarmonicExcitation {
  double omega = 0.0;  // rad/s
  Eigen::VectorXd sin_amplitudes;  // g, N
  Eigen::VectorXd cos_amplitudes;  // h, N
};

/// Particular response p cos(omega t) + q sin(omega t) of one excitation.
struct SteadyComponent {
  double omega = 0.0;
  Eigen::VectorXd cos_coeffs;  // p, m
  Eigen::VectorXd sin_coeffs;  // q, m
};

struct SteadyState {
  std::vector<SteadyComponent> components;
};

/// Column k of each matrix belongs to times[k]. Velocities and
/// accelerations are empty when not produced.
struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXd displacements;
  Eigen::MatrixXd velocities;
  Eigen::MatrixXd accelerations;
};

struct PeakAccelerationField {
  std::vector<double> positions;  // m, one per mesh node
  std::vector<double> peaks_g;
};

/// Force transmitted by base motion a sin(omega t) through the attachment
/// spring-damper: g = k_b a e_k, h = c a omega e_k. Throws
/// Error(UnknownAttachment) if the attachment has no translational DOF.
HarmonicExcitation base_excitation_forces(const AssembledSystem& system,
                                          const ActuatorAttachment& attachment,
                                          double frequency_hz);

/// Point force F sin(omega t) at a mesh node.
HarmonicExcitation direct_force(const AssembledSystem& system, double position,
                                double amplitude, double frequency_hz);

/// Builds one harmonic excitation per command of the configuration.
std::vector<HarmonicExcitation> build_excitations(const StudyConfig& config,
                                                  const AssembledSystem& system);

/// Solves [[K - w^2 M, w C], [-w C, K - w^2 M]] [p; q] = [h; g] for every
/// excitation. Throws Error(ResonanceSingular) if a block matrix is
/// numerically singular.
SteadyState steady_state(const AssembledSystem& system,
                         std::span<const HarmonicExcitation> excitations);

/// sum_i p_i cos(w_i t) + q_i sin(w_i t), one column per time.
Eigen::MatrixXd steady_displacement(const SteadyState& steady, int dof_count,
                                    std::span<const double> times);

/// -sum_i w_i^2 (p_i cos(w_i t) + q_i sin(w_i t)), one column per time.
Eigen::MatrixXd acceleration_series(const SteadyState& steady, int dof_count,
                                    std::span<const double> times);

/// Per-node sum_i w_i^2 sqrt(p_k^2 + q_k^2) in units of gravity. Nodes whose
/// translation was eliminated report 0.
PeakAccelerationField peak_acceleration_field(const AssembledSystem& system,
                                              const SteadyState& steady,
                                              double gravity = units::kStandardGravity);

/// Steady plus homogeneous response matching d(0) = d0, d'(0) = v0.
/// Throws Error(ResonanceSingular) or Error(EigenbasisSingular).
Trajectory complete_response(const AssembledSystem& system,
                             std::span<const HarmonicExcitation> excitations,
                             const Eigen::VectorXd& d0, const Eigen::VectorXd& v0,
                             std::span<const double> times);

Trajectory complete_response(const ModalResult& modal, const SteadyState& steady,
                             const Eigen::VectorXd& d0, const Eigen::VectorXd& v0,
                             std::span<const double> times);

/// times[k] = k * dt for k = 0..round(duration / dt).
std::vector<double> uniform_times(double dt, double duration);

}  // namespace hapticbar
