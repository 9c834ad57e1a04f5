#include "hapticbar/response.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "hapticbar/error.hpp"

namespace hapticbar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSingularRcond = 1e-14;
constexpr double kSteadyResidual = 1e-10;
constexpr int kRefinementSteps = 10;

// b - A x with error-free transformations (Ogita, Rump and Oishi), accurate
// as if computed in twice the working precision.
Eigen::VectorXd compensated_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& b) {
  Eigen::VectorXd r(b.size());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double sum = b[i];
    double err = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double p = -a(i, j) * x[j];
      const double p_err = std::fma(-a(i, j), x[j], -p);
      const double t = sum + p;
      const double z = t - sum;
      err += (sum - (t - z)) + (p - z) + p_err;
      sum = t;
    }
    r[i] = sum + err;
  }
  return r;
}

int translation_row(const AssembledSystem& system, double position, ErrorCode missing,
                    const std::string& what) {
  const auto node = system.mesh.find_node(position);
  if (!node) throw Error(missing, what + " does not sit on a mesh node");
  const auto dof = system.translation_dof(*node);
  if (!dof) throw Error(missing, what + " sits on a constrained node");
  return *dof;
}

SteadyComponent solve_one(const AssembledSystem& system, const HarmonicExcitation& ex) {
  const int n = system.size();
  if (!(ex.omega > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "excitation frequency must be positive");
  }
  if (ex.sin_amplitudes.size() != n || ex.cos_amplitudes.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "excitation vectors do not match the system size");
  }
  const double w = ex.omega;
  const Eigen::MatrixXd dynamic = system.stiffness - w * w * system.mass;
  Eigen::MatrixXd block(2 * n, 2 * n);
  block.topLeftCorner(n, n) = dynamic;
  block.topRightCorner(n, n) = w * system.damping;
  block.bottomLeftCorner(n, n) = -w * system.damping;
  block.bottomRightCorner(n, n) = dynamic;

  Eigen::VectorXd rhs(2 * n);
  rhs << ex.cos_amplitudes, ex.sin_amplitudes;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(block);
  const double norm_a = block.cwiseAbs().colwise().sum().maxCoeff();
  const double rcond = norm_a > 0.0 ? lu.rcond() : 0.0;
  if (!(rcond >= kSingularRcond)) {
    throw Error(ErrorCode::ResonanceSingular,
                "no steady state at " + std::to_string(w / kTwoPi) +
                    " Hz: the system is in resonance");
  }
  // Normwise backward error; short elements next to inserted nodes make
  // ||A|| large, so ||r|| / ||b|| alone is not attainable by any stable solve.
  auto backward_error = [&](const Eigen::VectorXd& x) {
    const double denom = norm_a * x.lpNorm<1>() + rhs.lpNorm<1>();
    return denom > 0.0 ? (block * x - rhs).lpNorm<1>() / denom : 0.0;
  };
  // Refinement with a compensated residual recovers a solution accurate to
  // working precision while cond * eps < 1; near lightly damped modes the
  // block reaches cond ~ 1e12.
  Eigen::VectorXd x = lu.solve(rhs);
  for (int iter = 0; iter < kRefinementSteps; ++iter) {
    const Eigen::VectorXd dx = lu.solve(compensated_residual(block, x, rhs));
    x += dx;
    if (dx.lpNorm<Eigen::Infinity>() <= 1e-17 * x.lpNorm<Eigen::Infinity>()) break;
  }
  if (backward_error(x) > kSteadyResidual) {
    throw Error(ErrorCode::ResonanceSingular, "steady-state residual stays above tolerance");
  }
  return {w, x.head(n), x.tail(n)};
}

}  // namespace

HarmonicExcitation base_excitation_forces(const AssembledSystem& system,
                                          const ActuatorAttachment& attachment,
                                          double frequency_hz) {
  if (!(frequency_hz > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "excitation frequency must be positive");
  }
  const int row = translation_row(system, attachment.position, ErrorCode::UnknownAttachment,
                                  "attachment '" + attachment.id + "'");
  const int n = system.size();
  HarmonicExcitation ex;
  ex.omega = kTwoPi * frequency_hz;
  ex.sin_amplitudes = Eigen::VectorXd::Zero(n);
  ex.cos_amplitudes = Eigen::VectorXd::Zero(n);
  ex.sin_amplitudes[row] = attachment.stiffness * attachment.base_amplitude;
  ex.cos_amplitudes[row] = resolve_damping(attachment) * attachment.base_amplitude * ex.omega;
  return ex;
}

HarmonicExcitation direct_force(const AssembledSystem& system, double position,
                                double amplitude, double frequency_hz) {
  if (!(frequency_hz > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "excitation frequency must be positive");
  }
  const int row =
      translation_row(system, position, ErrorCode::PositionOutOfRange, "force position");
  const int n = system.size();
  HarmonicExcitation ex;
  ex.omega = kTwoPi * frequency_hz;
  ex.sin_amplitudes = Eigen::VectorXd::Zero(n);
  ex.cos_amplitudes = Eigen::VectorXd::Zero(n);
  ex.sin_amplitudes[row] = amplitude;
  return ex;
}

std::vector<HarmonicExcitation> build_excitations(const StudyConfig& config,
                                                  const AssembledSystem& system) {
  std::vector<HarmonicExcitation> out;
  for (const auto& cmd : config.excitations) {
    if (cmd.kind == ExcitationKind::DirectForce) {
      out.push_back(direct_force(system, cmd.position, cmd.force_amplitude, cmd.frequency_hz));
    } else {
      const ActuatorAttachment* a = find_attachment(config, cmd.attachment_id);
      if (a == nullptr) {
        throw Error(ErrorCode::UnknownAttachment,
                    "excitation references unknown attachment '" + cmd.attachment_id + "'");
      }
      out.push_back(base_excitation_forces(system, *a, cmd.frequency_hz));
    }
  }
  return out;
}

SteadyState steady_state(const AssembledSystem& system,
                         std::span<const HarmonicExcitation> excitations) {
  SteadyState out;
  out.components.reserve(excitations.size());
  for (const auto& ex : excitations) out.components.push_back(solve_one(system, ex));
  return out;
}

Eigen::MatrixXd steady_displacement(const SteadyState& steady, int dof_count,
                                    std::span<const double> times) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dof_count, static_cast<Eigen::Index>(times.size()));
  for (const auto& c : steady.components) {
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double wt = c.omega * times[k];
      out.col(k) += c.cos_coeffs * std::cos(wt) + c.sin_coeffs * std::sin(wt);
    }
  }
  return out;
}

Eigen::MatrixXd acceleration_series(const SteadyState& steady, int dof_count,
                                    std::span<const double> times) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dof_count, static_cast<Eigen::Index>(times.size()));
  for (const auto& c : steady.components) {
    const double w2 = c.omega * c.omega;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double wt = c.omega * times[k];
      out.col(k) -= w2 * (c.cos_coeffs * std::cos(wt) + c.sin_coeffs * std::sin(wt));
    }
  }
  return out;
}

PeakAccelerationField peak_acceleration_field(const AssembledSystem& system,
                                              const SteadyState& steady, double gravity) {
  PeakAccelerationField field;
  field.positions = system.mesh.node_positions;
  field.peaks_g.assign(field.positions.size(), 0.0);
  for (int node = 0; node < system.mesh.node_count(); ++node) {
    const auto dof = system.translation_dof(node);
    if (!dof) continue;
    double peak = 0.0;
    for (const auto& c : steady.components) {
      peak += c.omega * c.omega * std::hypot(c.cos_coeffs[*dof], c.sin_coeffs[*dof]);
    }
    field.peaks_g[node] = peak / gravity;
  }
  return field;
}

Trajectory complete_response(const AssembledSystem& system,
                             std::span<const HarmonicExcitation> excitations,
                             const Eigen::VectorXd& d0, const Eigen::VectorXd& v0,
                             std::span<const double> times) {
  const SteadyState steady = steady_state(system, excitations);
  return complete_response(modes(system), steady, d0, v0, times);
}

Trajectory complete_response(const ModalResult& modal, const SteadyState& steady,
                             const Eigen::VectorXd& d0, const Eigen::VectorXd& v0,
                             std::span<const double> times) {
  using cd = std::complex<double>;
  const int state = modal.state_size();
  const int n = state / 2;
  if (d0.size() != n || v0.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "initial conditions do not match the system size");
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw Error(ErrorCode::InvalidArgument, "times must be strictly increasing");
    }
  }

  // Particular part and its derivative at t = 0.
  Eigen::VectorXd dp0 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd vp0 = Eigen::VectorXd::Zero(n);
  for (const auto& c : steady.components) {
    dp0 += c.cos_coeffs;
    vp0 += c.omega * c.sin_coeffs;
  }

  // V eps = [d0 - dp0; v0 - vp0], with the velocity rows scaled by the
  // spectral radius so both halves have comparable magnitude.
  const double sigma = std::max(modal.eigenvalues.cwiseAbs().maxCoeff(), 1.0);
  Eigen::MatrixXcd basis = modal.eigenvectors;
  basis.bottomRows(n) /= sigma;
  Eigen::VectorXcd rhs(state);
  rhs.head(n) = (d0 - dp0).cast<cd>();
  rhs.tail(n) = ((v0 - vp0) / sigma).cast<cd>();

  Eigen::VectorXcd eps = Eigen::VectorXcd::Zero(state);
  if (rhs.norm() > 0.0) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(basis);
    if (!(lu.rcond() >= kSingularRcond)) {
      throw Error(ErrorCode::EigenbasisSingular, "eigenvectors do not span the state space");
    }
    eps = lu.solve(rhs);
  }

  const Eigen::MatrixXcd shapes = modal.eigenvectors.topRows(n);
  const Eigen::VectorXcd& s = modal.eigenvalues;
  const auto cols = static_cast<Eigen::Index>(times.size());

  Trajectory traj;
  traj.times.assign(times.begin(), times.end());
  traj.displacements.resize(n, cols);
  traj.velocities.resize(n, cols);
  traj.accelerations.resize(n, cols);

  double max_imag = 0.0;
  Eigen::VectorXcd weights(state);
  for (Eigen::Index k = 0; k < cols; ++k) {
    const double t = times[k];
    for (int j = 0; j < state; ++j) weights[j] = eps[j] * std::exp(s[j] * t);
    const Eigen::VectorXcd dh = shapes * weights;
    const Eigen::VectorXcd vh = shapes * (weights.array() * s.array()).matrix();
    const Eigen::VectorXcd ah = shapes * (weights.array() * s.array() * s.array()).matrix();
    max_imag = std::max(max_imag, dh.imag().cwiseAbs().maxCoeff());

    Eigen::VectorXd d = dh.real();
    Eigen::VectorXd v = vh.real();
    Eigen::VectorXd a = ah.real();
    for (const auto& c : steady.components) {
      const double cw = std::cos(c.omega * t);
      const double sw = std::sin(c.omega * t);
      d += c.cos_coeffs * cw + c.sin_coeffs * sw;
      v += c.omega * (c.sin_coeffs * cw - c.cos_coeffs * sw);
      a -= c.omega * c.omega * (c.cos_coeffs * cw + c.sin_coeffs * sw);
    }
    traj.displacements.col(k) = d;
    traj.velocities.col(k) = v;
    traj.accelerations.col(k) = a;
  }

  const double scale = cols > 0 ? traj.displacements.cwiseAbs().maxCoeff() : 0.0;
  if (max_imag > 1e-8 * scale) {
    throw Error(ErrorCode::EigenbasisSingular,
                "homogeneous solution has a non-negligible imaginary part");
  }
  return traj;
}

std::vector<double> uniform_times(double dt, double duration) {
  if (!(dt > 0.0) || !(duration >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "time step must be positive");
  }
  const auto steps = static_cast<long>(std::llround(duration / dt));
  std::vector<double> times(static_cast<std::size_t>(steps + 1));
  for (long k = 0; k <= steps; ++k) times[static_cast<std::size_t>(k)] = k * dt;
  return times;
}

}  // namespace hapticbar
