#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hapticbar/fem.hpp"

namespace hapticbar {

/// Complex modes of the first-order form x' = A x with x = [d; d'].
struct ModalResult {
  /// 2n eigenvalues s_j (rad/s), sorted by ascending |Im s|; for a complex
  /// pair the member with Im > 0 comes first and its conjugate follows.
  Eigen::VectorXcd eigenvalues;
  /// Column j is the unit-norm state vector [r_j; s_j r_j].
  Eigen::MatrixXcd eigenvectors;
  std::vector<double> damped_frequencies_hz;  // |Im s_j| / 2pi
  std::vector<double> modal_damping;          // -Re s_j / |s_j|

  int state_size() const { return static_cast<int>(eigenvalues.size()); }
  /// Displacement half r_j of eigenvector j.
  Eigen::VectorXcd shape(int j) const;
  /// Damped frequencies of oscillatory modes (Im s > 0), ascending.
  std::vector<double> oscillatory_frequencies_hz() const;
};

/// A = [[0, I], [-M^-1 K, -M^-1 C]]. Throws Error(SingularMass).
Eigen::MatrixXd state_matrix(const AssembledSystem& system);

/// Full damped spectrum of the system. Throws Error(SingularMass) or
/// Error(EigenNoConvergence).
ModalResult modes(const AssembledSystem& system);

/// Undamped natural frequencies in Hz from K phi = lambda M phi, ascending.
std::vector<double> natural_frequencies(const AssembledSystem& system);

/// f_n = (n pi / L)^2 sqrt(EI / (rho A)) / 2pi for n = 1..count.
std::vector<double> analytical_pinned_frequencies(const Material& material,
                                                  const BeamGeometry& geometry, int count);

}  // namespace hapticbar
