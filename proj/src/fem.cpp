#include "hapticbar/fem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hapticbar/error.hpp"

namespace hapticbar {

std::optional<int> Mesh::find_node(double x) const {
  const double tol = position_tolerance();
  auto it = std::lower_bound(node_positions.begin(), node_positions.end(), x - tol);
  if (it != node_positions.end() && std::abs(*it - x) <= tol) {
    return static_cast<int>(it - node_positions.begin());
  }
  return std::nullopt;
}

int Mesh::nearest_node(double x) const {
  auto it = std::lower_bound(node_positions.begin(), node_positions.end(), x);
  if (it == node_positions.begin()) return 0;
  if (it == node_positions.end()) return node_count() - 1;
  const int right = static_cast<int>(it - node_positions.begin());
  const int left = right - 1;
  return (x - node_positions[left] <= node_positions[right] - x) ? left : right;
}

Mesh generate_mesh(double length, int element_count, std::span<const double> positions) {
  if (!(length > 0.0)) throw Error(ErrorCode::InvalidArgument, "mesh length must be positive");
  if (element_count < 2) {
    throw Error(ErrorCode::InvalidArgument, "element count must be at least 2");
  }
  Mesh mesh;
  mesh.length = length;
  mesh.node_positions.reserve(element_count + 1 + positions.size());
  for (int i = 0; i <= element_count; ++i) {
    mesh.node_positions.push_back(length * static_cast<double>(i) / element_count);
  }
  mesh.node_positions.back() = length;

  const double tol = mesh.position_tolerance();
  for (double x : positions) {
    if (!(x >= 0.0 && x <= length)) {
      throw Error(ErrorCode::PositionOutOfRange,
                  "position " + std::to_string(x) + " m lies outside [0, L]");
    }
    if (mesh.find_node(x)) continue;
    auto it = std::upper_bound(mesh.node_positions.begin(), mesh.node_positions.end(), x);
    // find_node failed, so x is strictly inside an element and more than tol
    // away from both of its ends.
    if (it == mesh.node_positions.begin() || it == mesh.node_positions.end() ||
        x - *(it - 1) <= tol || *it - x <= tol) {
      throw Error(ErrorCode::PositionOutOfRange, "cannot place node at " + std::to_string(x));
    }
    mesh.node_positions.insert(it, x);
  }

  for (int i = 0; i + 1 < mesh.node_count(); ++i) {
    mesh.elements.push_back(
        {i, i + 1, mesh.node_positions[i + 1] - mesh.node_positions[i]});
  }
  for (double x : positions) mesh.attachment_nodes.push_back(*mesh.find_node(x));
  return mesh;
}

ElementMatrices element_matrices(double elastic_modulus, double second_moment, double density,
                                 double area, double length) {
  if (!(elastic_modulus > 0.0 && second_moment > 0.0 && density > 0.0 && area > 0.0 &&
        length > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "element parameters must all be positive");
  }
  const double l = length;
  const double l2 = l * l;
  ElementMatrices em;
  em.stiffness << 12.0, 6.0 * l, -12.0, 6.0 * l,
                  6.0 * l, 4.0 * l2, -6.0 * l, 2.0 * l2,
                  -12.0, -6.0 * l, 12.0, -6.0 * l,
                  6.0 * l, 2.0 * l2, -6.0 * l, 4.0 * l2;
  em.stiffness *= elastic_modulus * second_moment / (l2 * l);

  em.mass << 156.0, 22.0 * l, 54.0, -13.0 * l,
             22.0 * l, 4.0 * l2, 13.0 * l, -3.0 * l2,
             54.0, 13.0 * l, 156.0, -22.0 * l,
             -13.0 * l, -3.0 * l2, -22.0 * l, 4.0 * l2;
  em.mass *= density * area * l / 420.0;
  return em;
}

std::optional<int> AssembledSystem::translation_dof(int node) const {
  for (int i = 0; i < size(); ++i) {
    if (dofs[i].node == node && dofs[i].kind == DofKind::Translation) return i;
  }
  return std::nullopt;
}

AssembledSystem assemble(const Mesh& mesh, const Material& material,
                         const BeamGeometry& geometry,
                         std::span<const ActuatorAttachment> attachments) {
  validate(material);
  const SectionProperties section = derived_section(geometry);
  const int n = mesh.dof_count();

  AssembledSystem sys;
  sys.mesh = mesh;
  sys.mass = Eigen::MatrixXd::Zero(n, n);
  sys.damping = Eigen::MatrixXd::Zero(n, n);
  sys.stiffness = Eigen::MatrixXd::Zero(n, n);
  sys.dofs.reserve(n);
  for (int node = 0; node < mesh.node_count(); ++node) {
    sys.dofs.push_back({node, DofKind::Translation});
    sys.dofs.push_back({node, DofKind::Rotation});
  }

  for (const auto& el : mesh.elements) {
    const ElementMatrices em = element_matrices(material.elastic_modulus, section.second_moment,
                                                material.density, section.area, el.length);
    const int first = 2 * el.left;
    sys.stiffness.block<4, 4>(first, first) += em.stiffness;
    sys.mass.block<4, 4>(first, first) += em.mass;
  }

  for (const auto& a : attachments) {
    validate(a, geometry);
    const auto node = mesh.find_node(a.position);
    if (!node) {
      throw Error(ErrorCode::AttachmentNodeMissing,
                  "attachment '" + a.id + "' does not coincide with a mesh node");
    }
    const int dof = 2 * *node;
    sys.stiffness(dof, dof) += a.stiffness;
    sys.damping(dof, dof) += resolve_damping(a);
    sys.mass(dof, dof) += a.bolt_mass;
  }
  return sys;
}

AssembledSystem constrain_pinned(const AssembledSystem& system, std::span<const int> nodes) {
  for (int node : nodes) {
    if (node < 0 || node >= system.mesh.node_count()) {
      throw Error(ErrorCode::NodeOutOfRange, "node " + std::to_string(node) + " does not exist");
    }
  }
  std::vector<int> keep;
  for (int i = 0; i < system.size(); ++i) {
    const Dof& d = system.dofs[i];
    const bool pinned = d.kind == DofKind::Translation &&
                        std::find(nodes.begin(), nodes.end(), d.node) != nodes.end();
    if (!pinned) keep.push_back(i);
  }
  AssembledSystem out;
  out.mesh = system.mesh;
  out.mass = system.mass(keep, keep);
  out.damping = system.damping(keep, keep);
  out.stiffness = system.stiffness(keep, keep);
  for (int i : keep) out.dofs.push_back(system.dofs[i]);
  return out;
}

AssembledSystem build_system(const StudyConfig& config) {
  validate(config);
  std::vector<double> positions;
  for (const auto& a : config.attachments) positions.push_back(a.position);
  for (const auto& e : config.excitations) {
    if (e.kind == ExcitationKind::DirectForce) positions.push_back(e.position);
  }
  positions.insert(positions.end(), config.pinned_positions.begin(),
                   config.pinned_positions.end());
  const Mesh mesh = generate_mesh(config.geometry.length, config.element_count, positions);
  AssembledSystem sys = assemble(mesh, config.material, config.geometry, config.attachments);
  if (config.pinned_positions.empty()) return sys;

  std::vector<int> pinned;
  for (double x : config.pinned_positions) pinned.push_back(*mesh.find_node(x));
  return constrain_pinned(sys, pinned);
}

}  // namespace hapticbar
