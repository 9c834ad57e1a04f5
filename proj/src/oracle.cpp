#include "hapticbar/oracle.hpp"

#include <cmath>
#include <vector>

#include "hapticbar/error.hpp"

namespace hapticbar {

ForcingFunction harmonic_forcing(std::span<const HarmonicExcitation> excitations,
                                 int dof_count) {
  std::vector<HarmonicExcitation> terms(excitations.begin(), excitations.end());
  return [terms = std::move(terms), dof_count](double t) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(dof_count);
    for (const auto& ex : terms) {
      f += ex.sin_amplitudes * std::sin(ex.omega * t) + ex.cos_amplitudes * std::cos(ex.omega * t);
    }
    return f;
  };
}

Trajectory newmark_integrate(const AssembledSystem& system, const ForcingFunction& forcing,
                             const Eigen::VectorXd& d0, const Eigen::VectorXd& v0, double dt,
                             double duration, double max_frequency_hz) {
  constexpr double beta = 0.25;
  constexpr double gamma = 0.5;
  const int n = system.size();
  if (d0.size() != n || v0.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "initial conditions do not match the system size");
  }
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "time step must be positive");
  if (max_frequency_hz > 0.0 && dt > 1.0 / (20.0 * max_frequency_hz)) {
    throw Error(ErrorCode::InvalidArgument, "time step too coarse for the excitation frequency");
  }

  const Eigen::MatrixXd& m = system.mass;
  const Eigen::MatrixXd& c = system.damping;
  const Eigen::MatrixXd& k = system.stiffness;

  const Eigen::MatrixXd effective = k + (gamma / (beta * dt)) * c + (1.0 / (beta * dt * dt)) * m;
  Eigen::LLT<Eigen::MatrixXd> solver(effective);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::FactorizationFailure, "effective stiffness is not positive definite");
  }
  Eigen::LLT<Eigen::MatrixXd> mass_solver(m);
  if (mass_solver.info() != Eigen::Success) {
    throw Error(ErrorCode::FactorizationFailure, "mass matrix is not positive definite");
  }

  const std::vector<double> times = uniform_times(dt, duration);
  const auto steps = static_cast<Eigen::Index>(times.size());

  Trajectory traj;
  traj.times = times;
  traj.displacements.resize(n, steps);
  traj.velocities.resize(n, steps);
  traj.accelerations.resize(n, steps);

  Eigen::VectorXd d = d0;
  Eigen::VectorXd v = v0;
  Eigen::VectorXd a = mass_solver.solve(forcing(0.0) - c * v - k * d);
  traj.displacements.col(0) = d;
  traj.velocities.col(0) = v;
  traj.accelerations.col(0) = a;

  const double a0 = 1.0 / (beta * dt * dt);
  const double a1 = 1.0 / (beta * dt);
  const double a2 = 1.0 / (2.0 * beta) - 1.0;
  const double a3 = gamma / (beta * dt);
  const double a4 = gamma / beta - 1.0;
  const double a5 = dt * (gamma / (2.0 * beta) - 1.0);

  for (Eigen::Index step = 1; step < steps; ++step) {
    const Eigen::VectorXd rhs =
        forcing(times[step]) + m * (a0 * d + a1 * v + a2 * a) + c * (a3 * d + a4 * v + a5 * a);
    const Eigen::VectorXd d_next = solver.solve(rhs);
    const Eigen::VectorXd a_next = a0 * (d_next - d) - a1 * v - a2 * a;
    v += dt * ((1.0 - gamma) * a + gamma * a_next);
    d = d_next;
    a = a_next;
    traj.displacements.col(step) = d;
    traj.velocities.col(step) = v;
    traj.accelerations.col(step) = a;
  }
  return traj;
}

TrajectoryError compare_trajectories(const Trajectory& a, const Trajectory& b,
                                     double settle_time) {
  if (a.times.size() != b.times.size() || a.displacements.rows() != b.displacements.rows()) {
    throw Error(ErrorCode::GridMismatch, "trajectories have different shapes");
  }
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    if (std::abs(a.times[k] - b.times[k]) > 1e-12 * std::max(1.0, std::abs(a.times[k]))) {
      throw Error(ErrorCode::GridMismatch, "trajectories have different time grids");
    }
  }
  double reference = 0.0;
  double max_diff = 0.0;
  double sum_sq = 0.0;
  long count = 0;
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    if (a.times[k] < settle_time) continue;
    const auto col = static_cast<Eigen::Index>(k);
    reference = std::max(reference, a.displacements.col(col).cwiseAbs().maxCoeff());
    const Eigen::VectorXd diff = a.displacements.col(col) - b.displacements.col(col);
    max_diff = std::max(max_diff, diff.cwiseAbs().maxCoeff());
    sum_sq += diff.squaredNorm();
    count += a.displacements.rows();
  }
  if (count == 0 || (max_diff == 0.0)) return {0.0, 0.0};
  const double rms = std::sqrt(sum_sq / static_cast<double>(count));
  return {max_diff / reference, rms / reference};
}

Trajectory select_dofs(const Trajectory& traj, std::span<const int> rows) {
  std::vector<int> idx(rows.begin(), rows.end());
  Trajectory out;
  out.times = traj.times;
  out.displacements = traj.displacements(idx, Eigen::all);
  if (traj.velocities.size() > 0) out.velocities = traj.velocities(idx, Eigen::all);
  if (traj.accelerations.size() > 0) {
    out.accelerations = traj.accelerations(idx, Eigen::all);
  }
  return out;
}

}  // namespace hapticbar
