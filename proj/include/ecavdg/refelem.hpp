#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ecavdg {

enum class Shape { interval, triangle };
enum class Formulation { modal, nodal };

std::string_view to_string(Shape s);
std::string_view to_string(Formulation f);
Formulation parse_formulation(std::string_view s);

/// Points are stored row-wise (one row per point, one column per reference
/// coordinate).
struct QuadratureRule {
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;

  int size() const { return static_cast<int>(weights.size()); }
};

namespace quadrature {

/// n-point Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta on [-1,1]
/// (Golub-Welsch).
QuadratureRule gauss_jacobi(int n, double alpha, double beta);
QuadratureRule gauss_legendre(int n);
/// n-point Gauss-Lobatto-Legendre rule, n >= 2.
QuadratureRule gauss_lobatto(int n);
/// Conical-product (collapsed Gauss) rule on the bi-unit triangle
/// {(r,s): r,s >= -1, r+s <= 0}, exact for total degree 2n-1.
QuadratureRule collapsed_triangle(int n);

}  // namespace quadrature

namespace poly {

/// Orthonormal Jacobi polynomial P_n^{(alpha,beta)} evaluated at x.
Eigen::VectorXd jacobi(const Eigen::VectorXd& x, double alpha, double beta, int n);
Eigen::VectorXd grad_jacobi(const Eigen::VectorXd& x, double alpha, double beta, int n);

/// Orthonormal Legendre basis on [-1,1]: columns j = 0..N.
Eigen::MatrixXd legendre_basis(const Eigen::VectorXd& x, int N);
Eigen::MatrixXd legendre_basis_grad(const Eigen::VectorXd& x, int N);

/// Orthonormal Koornwinder-Dubiner basis on the bi-unit triangle, ordered by
/// total degree. rs has one row per point.
Eigen::MatrixXd dubiner_basis(const Eigen::MatrixXd& rs, int N);
/// Derivative of the Dubiner basis with respect to reference coordinate
/// `dir` (0 = r, 1 = s).
Eigen::MatrixXd dubiner_basis_grad(const Eigen::MatrixXd& rs, int N, int dir);

/// Lagrange basis through `nodes`, evaluated at x (barycentric form).
Eigen::MatrixXd lagrange_basis(const Eigen::VectorXd& nodes, const Eigen::VectorXd& x);
Eigen::MatrixXd lagrange_basis_grad(const Eigen::VectorXd& nodes, const Eigen::VectorXd& x);

}  // namespace poly

/// Reference-element basis, quadrature and discrete operators.
///
/// Reference domains: the interval [-1,1] and the bi-unit triangle with
/// vertices (-1,-1), (1,-1), (-1,1) (area 2). Triangle face f joins local
/// vertices f and f+1; face points are parameterised by t in [-1,1] running
/// from the first to the second vertex, so face weights sum to 2.
///
/// Coefficients are modal (orthonormal basis) under the modal formulation
/// and nodal values at the Gauss-Lobatto points under the nodal one.
struct ReferenceElement {
  int dim = 1;
  Shape shape = Shape::interval;
  int degree = 0;
  Formulation formulation = Formulation::modal;
  int num_modes = 1;

  QuadratureRule volume;
  std::vector<QuadratureRule> faces;

  Eigen::MatrixXd Vq;               // nq x Np
  std::vector<Eigen::MatrixXd> Vr;  // basis derivatives at volume points
  std::vector<Eigen::MatrixXd> Dr;  // coefficient-to-coefficient derivatives
  Eigen::MatrixXd M;
  Eigen::MatrixXd Minv;
  Eigen::MatrixXd Pq;               // point values -> coefficients
  std::vector<Eigen::MatrixXd> Vf;  // basis at face points, per face

  /// Maps this element's coefficients to orthonormal modal coefficients
  /// (identity for the modal formulation).
  Eigen::MatrixXd to_modal;
  /// Total polynomial degree of each orthonormal mode.
  std::vector<int> mode_degree;

  int num_faces() const { return static_cast<int>(faces.size()); }
  int num_volume_points() const { return volume.size(); }

  /// Basis values at arbitrary reference points (rows).
  Eigen::MatrixXd eval_basis(const Eigen::MatrixXd& points) const;
  Eigen::MatrixXd eval_basis_grad(const Eigen::MatrixXd& points, int dir) const;
};

using RefElemPtr = std::shared_ptr<const ReferenceElement>;

/// Builds the reference element. Nodal formulation is supported on the
/// interval only. Throws std::invalid_argument otherwise.
RefElemPtr build_reference_element(Shape shape, int N, Formulation formulation);

/// Quadrature-based L2 projection of point values at the volume points.
/// Columns of `point_values` are treated independently.
Eigen::MatrixXd project(const ReferenceElement& ref, const Eigen::MatrixXd& point_values);

/// Sum of w_i f_i over the volume rule (reference measure).
double integrate(const ReferenceElement& ref, const Eigen::VectorXd& point_values);

/// Reference-face measure: 2 on triangle edges, 1 for interval end points.
double reference_face_measure(Shape shape);

}  // namespace ecavdg
