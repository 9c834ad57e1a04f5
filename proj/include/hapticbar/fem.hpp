#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hapticbar/model.hpp"

namespace hapticbar {

struct ElementSpan {
  int left = 0;
  int right = 0;
  double length = 0.0;
};

/// 1-D mesh of two-node Hermite beam elements. Node positions are strictly
/// increasing from 0 to L.
struct Mesh {
  double length = 0.0;
  std::vector<double> node_positions;
  std::vector<ElementSpan> elements;
  /// Node index for each position handed to generate_mesh, in input order.
  std::vector<int> attachment_nodes;

  int node_count() const { return static_cast<int>(node_positions.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }
  int dof_count() const { return 2 * node_count(); }

  /// Node sitting at x within the mesh position tolerance, if any.
  std::optional<int> find_node(double x) const;
  /// Node closest to x (ties go to the left node).
  int nearest_node(double x) const;
  double position_tolerance() const { return 1e-9 * length; }
};

/// Starts from a uniform mesh and inserts a node at every listed position
/// that does not already coincide with one. Throws Error(PositionOutOfRange).
Mesh generate_mesh(double length, int element_count, std::span<const double> positions);

enum class DofKind { Translation, Rotation };

struct Dof {
  int node = 0;
  DofKind kind = DofKind::Translation;
};

struct ElementMatrices {
  Eigen::Matrix4d stiffness;
  Eigen::Matrix4d mass;
};

/// Cubic Hermite element, DOF order (u1, theta1, u2, theta2).
ElementMatrices element_matrices(double elastic_modulus, double second_moment, double density,
                                 double area, double length);

/// Global M, C, K of M d'' + C d' + K d = f. Row i of each matrix
/// corresponds to dofs[i].
struct AssembledSystem {
  Eigen::MatrixXd mass;
  Eigen::MatrixXd damping;
  Eigen::MatrixXd stiffness;
  Mesh mesh;
  std::vector<Dof> dofs;

  int size() const { return static_cast<int>(dofs.size()); }
  /// Row of the translational DOF of a node, or nullopt if eliminated.
  std::optional<int> translation_dof(int node) const;
};

/// Scatter-adds the element matrices and lumps each attachment's k_b, c and
/// m_b onto the translational diagonal of its node. Throws
/// Error(AttachmentNodeMissing) if an attachment is not on a node.
AssembledSystem assemble(const Mesh& mesh, const Material& material,
                         const BeamGeometry& geometry,
                         std::span<const ActuatorAttachment> attachments);

/// Eliminates the translational DOFs of the given nodes (pinned supports).
/// Rotations stay free. Throws Error(NodeOutOfRange).
AssembledSystem constrain_pinned(const AssembledSystem& system, std::span<const int> nodes);

/// Mesh + assembly + pinned supports for a full study configuration. The mesh
/// carries nodes at every attachment, force and support position.
AssembledSystem build_system(const StudyConfig& config);

}  // namespace hapticbar
