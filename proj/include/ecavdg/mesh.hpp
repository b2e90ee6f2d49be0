#pragma once

#include <array>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ecavdg/refelem.hpp"

namespace ecavdg {

enum class BoundaryKind { periodic, wall };

std::string_view to_string(BoundaryKind b);
BoundaryKind parse_boundary(std::string_view s);

/// One (element, local face) slot. `neighbor` is -1 on wall faces.
struct FaceInfo {
  int neighbor = -1;
  int neighbor_face = -1;
  bool wall = false;
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();  // outward unit normal (y ignored in 1D)
  double surface_jacobian = 1.0;                     // physical / reference face measure
  int beta = 0;                                      // LDG switch in {-1, 0, +1}
};

/// Affine map x = x0 + A r from the reference element.
struct ElementGeometry {
  std::vector<Eigen::Vector2d> vertices;
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  Eigen::Matrix2d jacobian = Eigen::Matrix2d::Identity();  // dx/dr
  Eigen::Matrix2d inverse = Eigen::Matrix2d::Identity();   // dr/dx
  double det = 1.0;
  double diameter = 0.0;
  double measure = 0.0;

  Eigen::Vector2d map(const Eigen::Vector2d& r) const { return origin + jacobian * r; }
};

/// Geometry and connectivity of a 1D interval mesh or a 2D triangulation.
/// Immutable once built; `assign_ldg_switches` returns a modified copy.
struct Mesh {
  int dim = 1;
  Shape shape = Shape::interval;
  std::vector<ElementGeometry> elements;
  std::vector<std::vector<FaceInfo>> faces;  // [element][local face]
  Eigen::Vector2d lower = Eigen::Vector2d::Zero();
  Eigen::Vector2d upper = Eigen::Vector2d::Zero();
  std::array<BoundaryKind, 2> boundary{BoundaryKind::periodic, BoundaryKind::periodic};

  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_faces_per_element() const { return shape == Shape::interval ? 2 : 3; }
  double h_min() const;
  double h_max() const;
};

Mesh uniform_interval_mesh(double a, double b, int K, BoundaryKind boundary);

/// Each of the Kx x Ky cells is split into two triangles along the diagonal
/// from its lower-left to its upper-right corner (or the other diagonal when
/// `flip_diagonal` is set).
Mesh uniform_triangle_mesh(const Eigen::Vector2d& lower, const Eigen::Vector2d& upper, int Kx,
                           int Ky, BoundaryKind x_boundary, BoundaryKind y_boundary,
                           bool flip_diagonal = false);

enum class ViscousScheme { ldg, br1 };

/// beta = sign(v0 . n) on every face for LDG; beta = 0 for BR-1. Throws if
/// v0 is orthogonal to some face normal or (LDG) some element has no face
/// with beta = +1.
Mesh assign_ldg_switches(Mesh mesh, const Eigen::Vector2d& v0, ViscousScheme scheme);

/// Default switch vector: (1) in 1D, (2,1) in 2D.
Eigen::Vector2d default_switch_vector(int dim);

/// Plain-text summary: element count, h range, beta histogram.
void write_mesh_summary(std::ostream& os, const Mesh& mesh);

}  // namespace ecavdg
