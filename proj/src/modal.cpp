#include "hapticbar/modal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "hapticbar/error.hpp"

namespace hapticbar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::LLT<Eigen::MatrixXd> factor_mass(const Eigen::MatrixXd& mass) {
  Eigen::LLT<Eigen::MatrixXd> llt(mass);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularMass, "mass matrix is not positive definite");
  }
  return llt;
}

// Solves M X = B and insists on a small backward error.
Eigen::MatrixXd solve_mass(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::MatrixXd& mass,
                           const Eigen::MatrixXd& rhs) {
  Eigen::MatrixXd x = llt.solve(rhs);
  const double scale = rhs.norm();
  if (scale == 0.0) return x;
  double residual = (mass * x - rhs).norm();
  if (residual > 1e-12 * scale) {
    x += llt.solve(rhs - mass * x);
    residual = (mass * x - rhs).norm();
  }
  if (residual > 1e-12 * scale) {
    throw Error(ErrorCode::SingularMass, "mass solve backward error too large");
  }
  return x;
}

}  // namespace

Eigen::VectorXcd ModalResult::shape(int j) const {
  const int n = state_size() / 2;
  return eigenvectors.col(j).head(n);
}

std::vector<double> ModalResult::oscillatory_frequencies_hz() const {
  std::vector<double> out;
  for (int j = 0; j < state_size(); ++j) {
    if (eigenvalues[j].imag() > 0.0) out.push_back(damped_frequencies_hz[j]);
  }
  return out;
}

Eigen::MatrixXd state_matrix(const AssembledSystem& system) {
  const int n = system.size();
  const auto llt = factor_mass(system.mass);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  a.topRightCorner(n, n).setIdentity();
  a.bottomLeftCorner(n, n) = -solve_mass(llt, system.mass, system.stiffness);
  a.bottomRightCorner(n, n) = -solve_mass(llt, system.mass, system.damping);
  return a;
}

ModalResult modes(const AssembledSystem& system) {
  const int n = system.size();
  const auto llt = factor_mass(system.mass);
  const Eigen::MatrixXd lower = llt.matrixL();

  // Work on the similar matrix T^-1 A T with T = diag(L^-T, sigma L^-T):
  // [[0, sigma I], [-Ks / sigma, -Cs]], Ks = L^-1 K L^-T, Cs = L^-1 C L^-T.
  // Both blocks are symmetric and comparable in size, which keeps the
  // low-frequency eigenvalues accurate.
  auto symmetric_part = [&](const Eigen::MatrixXd& m) {
    Eigen::MatrixXd tmp = lower.triangularView<Eigen::Lower>().solve(m);
    Eigen::MatrixXd out =
        lower.triangularView<Eigen::Lower>().solve(tmp.transpose()).transpose();
    return Eigen::MatrixXd(0.5 * (out + out.transpose()));
  };
  const Eigen::MatrixXd ks = symmetric_part(system.stiffness);
  const Eigen::MatrixXd cs = symmetric_part(system.damping);
  double sigma = std::sqrt(ks.cwiseAbs().rowwise().sum().maxCoeff());
  if (!(sigma > 0.0)) sigma = 1.0;

  Eigen::MatrixXd scaled = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  scaled.topRightCorner(n, n) = sigma * Eigen::MatrixXd::Identity(n, n);
  scaled.bottomLeftCorner(n, n) = -ks / sigma;
  scaled.bottomRightCorner(n, n) = -cs;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(scaled, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenNoConvergence, "state-space eigensolver did not converge");
  }
  const Eigen::VectorXcd values = solver.eigenvalues();
  const Eigen::MatrixXcd w = solver.eigenvectors();

  // Back to physical state coordinates: x = [L^-T y; sigma L^-T z].
  Eigen::MatrixXcd v(2 * n, 2 * n);
  const Eigen::MatrixXcd upper = lower.transpose().cast<std::complex<double>>();
  v.topRows(n) = upper.triangularView<Eigen::Upper>().solve(w.topRows(n));
  v.bottomRows(n) = sigma * upper.triangularView<Eigen::Upper>().solve(w.bottomRows(n));

  std::vector<int> order(2 * n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    const auto& a = values[i];
    const auto& b = values[j];
    if (std::abs(a.imag()) != std::abs(b.imag())) return std::abs(a.imag()) < std::abs(b.imag());
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });

  ModalResult result;
  result.eigenvalues.resize(2 * n);
  result.eigenvectors.resize(2 * n, 2 * n);
  for (int k = 0; k < 2 * n; ++k) {
    result.eigenvalues[k] = values[order[k]];
    Eigen::VectorXcd col = v.col(order[k]);
    result.eigenvectors.col(k) = col / col.norm();
  }
  // Make conjugate partners exact mirrors of each other.
  for (int k = 0; k + 1 < 2 * n; ++k) {
    if (result.eigenvalues[k].imag() > 0.0) {
      result.eigenvalues[k + 1] = std::conj(result.eigenvalues[k]);
      result.eigenvectors.col(k + 1) = result.eigenvectors.col(k).conjugate();
      ++k;
    }
  }

  result.damped_frequencies_hz.resize(2 * n);
  result.modal_damping.resize(2 * n);
  for (int k = 0; k < 2 * n; ++k) {
    const auto s = result.eigenvalues[k];
    result.damped_frequencies_hz[k] = std::abs(s.imag()) / kTwoPi;
    result.modal_damping[k] = std::abs(s) > 0.0 ? -s.real() / std::abs(s) : 0.0;
  }

  const Eigen::MatrixXcd a = state_matrix(system).cast<std::complex<double>>();
  const double bound = 1e-8 * a.norm();
  for (int k = 0; k < 2 * n; ++k) {
    const Eigen::VectorXcd r =
        a * result.eigenvectors.col(k) - result.eigenvalues[k] * result.eigenvectors.col(k);
    if (!(r.norm() <= bound)) {
      throw Error(ErrorCode::EigenNoConvergence, "eigenpair residual exceeds tolerance");
    }
  }
  return result;
}

std::vector<double> natural_frequencies(const AssembledSystem& system) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      system.stiffness, system.mass, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenNoConvergence, "generalized symmetric eigensolver failed");
  }
  std::vector<double> out;
  for (int i = 0; i < solver.eigenvalues().size(); ++i) {
    out.push_back(std::sqrt(std::max(solver.eigenvalues()[i], 0.0)) / kTwoPi);
  }
  return out;
}

std::vector<double> analytical_pinned_frequencies(const Material& material,
                                                  const BeamGeometry& geometry, int count) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "mode count must be at least 1");
  validate(material);
  const SectionProperties section = derived_section(geometry);
  const double root = std::sqrt(material.elastic_modulus * section.second_moment /
                                (material.density * section.area));
  std::vector<double> out;
  for (int k = 1; k <= count; ++k) {
    const double wavenumber = k * std::numbers::pi / geometry.length;
    out.push_back(wavenumber * wavenumber * root / kTwoPi);
  }
  return out;
}

}  // namespace hapticbar
