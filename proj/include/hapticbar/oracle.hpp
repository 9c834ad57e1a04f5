#pragma once

#include <functional>
#include <span>

#include <Eigen/Dense>

#include "hapticbar/fem.hpp"
#include "hapticbar/response.hpp"

namespace hapticbar {

using ForcingFunction = std::function<Eigen::VectorXd(double)>;

/// f(t) = sum_i g_i sin(w_i t) + h_i cos(w_i t).
ForcingFunction harmonic_forcing(std::span<const HarmonicExcitation> excitations, int dof_count);

/// Constant-average-acceleration Newmark integration (beta = 1/4,
/// gamma = 1/2). When max_frequency_hz > 0 the step must resolve it with at
/// least 20 points per period. Throws Error(FactorizationFailure) if the
/// effective stiffness is not positive definite.
Trajectory newmark_integrate(const AssembledSystem& system, const ForcingFunction& forcing,
                             const Eigen::VectorXd& d0, const Eigen::VectorXd& v0, double dt,
                             double duration, double max_frequency_hz = 0.0);

struct TrajectoryError {
  double max_rel = 0.0;
  double rms_rel = 0.0;
};

/// Displacement differences over t >= settle_time, normalized by the
/// largest |a| in that window. Throws Error(GridMismatch).
TrajectoryError compare_trajectories(const Trajectory& a, const Trajectory& b,
                                     double settle_time);

/// Restriction of a trajectory to a subset of DOF rows.
Trajectory select_dofs(const Trajectory& traj, std::span<const int> rows);

}  // namespace hapticbar
