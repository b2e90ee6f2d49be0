#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "ecavdg/field.hpp"
#include "ecavdg/mesh.hpp"
#include "ecavdg/physics.hpp"
#include "ecavdg/refelem.hpp"
#include "ecavdg/viscosity.hpp"

namespace ecavdg {

/// Entropy-projected quantities of a state. Per element:
///   u_volume  u_h at the volume points            (nq  x n)
///   vh        projected entropy variables         (Np  x n)
///   v_face    vh at the stacked face points       (nfq x n)
///   u_face    u(vh) at the stacked face points    (nfq x n)
struct EntropyProjection {
  std::vector<Eigen::MatrixXd> u_volume;
  std::vector<Eigen::MatrixXd> vh;
  std::vector<Eigen::MatrixXd> v_face;
  std::vector<Eigen::MatrixXd> u_face;
};

/// LDG approximation of the entropy-variable gradient: theta[k][i] holds the
/// coefficients (Np x n) of the x_i component.
struct GradientField {
  std::vector<std::array<Eigen::MatrixXd, 2>> theta;
};

/// Per-element viscosity data; `b` is the gradient energy of the element.
struct ViscosityData {
  std::vector<double> delta;
  std::vector<double> b;
  std::vector<double> eps;
};

/// Diagnostics gathered during a right-hand-side evaluation.
struct RhsDiagnostics {
  std::vector<double> delta;
  std::vector<double> b;
  std::vector<double> eps;
  double entropy_rate = 0.0;     // sum_k (du/dt, vh)
  double dissipation = 0.0;      // sum_k eps_k b_k
  double viscous_work = 0.0;     // -sum_k (g, vh)
  double interface_term = 0.0;   // sum of <vh^T f* - psi(u~).n> over element boundaries
  double max_eps = 0.0;
};

/// Entropy-projection DG discretisation of one conservation law.
template <class Law>
class Discretization {
 public:
  using State = typename Law::State;
  static constexpr int nvars = Law::nvars;

  Discretization(Law law, RefElemPtr ref, std::shared_ptr<const Mesh> mesh, FluxKind flux,
                 ViscosityOptions visc = {});

  const Law& law() const { return law_; }
  const ReferenceElement& ref() const { return *ref_; }
  const Mesh& mesh() const { return *mesh_; }
  FluxKind flux_kind() const { return flux_; }
  const ViscosityOptions& viscosity() const { return visc_; }
  void set_viscosity(const ViscosityOptions& v) { visc_ = v; }

  int num_elements() const { return mesh_->num_elements(); }
  int num_modes() const { return ref_->num_modes; }
  int num_face_points() const { return nfq_; }
  SolutionField zero_field() const { return {num_elements(), nvars, num_modes()}; }

  /// Physical coordinates of the volume points of element k (nq x 2).
  const Eigen::MatrixXd& volume_points(int k) const { return xq_[k]; }
  /// Physical coordinates of the stacked face points of element k (nfq x 2).
  const Eigen::MatrixXd& face_points(int k) const { return xf_[k]; }

  /// Quadrature L2 projection of an exact state function of (x, y).
  SolutionField project(const std::function<State(double, double)>& fn) const;

  /// Values of u_h at the volume points of element k (nq x n).
  Eigen::MatrixXd volume_values(const SolutionField& u, int k) const;

  /// Cell averages (K x n).
  Eigen::MatrixXd cell_averages(const SolutionField& u) const;

  EntropyProjection entropy_projection(const SolutionField& u) const;

  /// delta_k = -(f(u_h), grad vh) + <psi(u~) . n> per element.
  std::vector<double> volume_entropy_residual(const SolutionField& u,
                                              const EntropyProjection& proj) const;

  /// Inviscid right-hand side du/dt = -div f discretised with the entropy
  /// projection; optionally also returns delta_k.
  SolutionField inviscid_rhs(const SolutionField& u, const EntropyProjection& proj,
                             std::vector<double>* delta = nullptr) const;

  GradientField ldg_gradient(const EntropyProjection& proj) const;

  /// b_k = J sum_q w_q sum_i theta_i^T (du/dv) theta_i.
  std::vector<double> gradient_energy(const EntropyProjection& proj,
                                      const GradientField& grad) const;

  /// Per-element coefficients under the configured viscosity mode.
  ViscosityData viscosity_coefficients(const SolutionField& u, const EntropyProjection& proj,
                                       const GradientField& grad) const;

  /// Viscous contribution g to du/dt for given per-element coefficients.
  SolutionField viscous_rhs(const EntropyProjection& proj, const GradientField& grad,
                            const std::vector<double>& eps) const;

  /// Smoothness indicator per element (rho p for Euler, u for Burgers).
  std::vector<double> smoothness_indicators(const SolutionField& u) const;

  /// sum_k (dudt, vh) in the mass-matrix inner product.
  double entropy_rate(const SolutionField& dudt, const EntropyProjection& proj) const;

  /// r_k = |v(u_h) - mean|^2 / |P(v(u_h) - mean)|^2 per element, in the
  /// quadrature inner product (P is the L2 projection). Elements on which
  /// v(u_h) is constant to `rel_threshold` (relative) get NaN.
  std::vector<double> projection_ratios(const SolutionField& u, double rel_threshold = 1e-10) const;

  /// Total entropy sum_k int S(u_h).
  double total_entropy(const SolutionField& u) const;

  /// Full semi-discrete right-hand side (flat coefficient vectors). Uses
  /// internal workspace; not reentrant.
  void rhs(const Eigen::VectorXd& u, Eigen::VectorXd& dudt, RhsDiagnostics* diag = nullptr);

  /// Throws AdmissibilityError naming the first element / point where u_h is
  /// not admissible at the volume or face points.
  void check_admissible(const SolutionField& u) const;

  /// Interface flux and boundary term bookkeeping used by Lemma checks:
  /// sum over elements of <vh^T f*(u~) - psi(u~).n>.
  double interface_entropy_term(const EntropyProjection& proj) const;

  /// Sum of the surface terms of the viscous update tested against vh
  /// (T1 = sum <sigma_hat.n, vh>) and of the gradient lift tested against
  /// sigma (T2 = sum <(v* - v^-) n, sigma>). With the LDG fluxes used
  /// here T1 + T2 = 0.
  std::pair<double, double> viscous_surface_sums(const EntropyProjection& proj,
                                                 const GradientField& grad,
                                                 const std::vector<double>& eps) const;

  /// Weighted L2 error sqrt(sum_k int |u_h - u|^2) and the norm of the exact
  /// solution, over all conservative variables.
  std::pair<double, double> l2_error(const SolutionField& u,
                                     const std::function<State(double, double)>& exact) const;

  /// Physical gradient of variable `var` at the volume points of element k
  /// (nq x 2).
  Eigen::MatrixXd volume_gradient(const SolutionField& u, int k, int var) const;

  double jacobian(int k) const { return det_[k]; }
  /// dr_a / dx_i for element k.
  double rx(int k, int a, int i) const { return rx_[k](a, i); }

  /// Ghost state on a wall face (reflective for Euler).
  State wall_state(const State& u, const Normal& n) const;

 private:
  struct FaceMap {
    std::vector<int> partner;  // stacked face-point index in the neighbour
  };

  void project_stage(const SolutionField& u, EntropyProjection& p) const;
  void inviscid_stage(const SolutionField& u, const EntropyProjection& p, SolutionField& out,
                      std::vector<double>* delta) const;
  void gradient_stage(const EntropyProjection& p, GradientField& g) const;
  void energy_stage(const EntropyProjection& p, const GradientField& g,
                    std::vector<double>& b) const;
  void coefficient_stage(const SolutionField& u, const std::vector<double>& delta,
                         const std::vector<double>& b, std::vector<double>& eps) const;
  void viscous_stage(const EntropyProjection& p, const GradientField& g,
                     const std::vector<double>& eps, SolutionField& out, bool accumulate) const;

  Law law_;
  RefElemPtr ref_;
  std::shared_ptr<const Mesh> mesh_;
  FluxKind flux_;
  ViscosityOptions visc_;

  int dim_;
  int nq_;
  int nfaces_;
  int nfq_face_;  // points per face
  int nfq_;       // stacked face points
  Eigen::MatrixXd Vf_;                    // nfq x Np
  Eigen::VectorXd wf_;                    // nfq
  Eigen::MatrixXd lift_;                  // Np x nfq: Minv Vf^T diag(wf)
  std::array<Eigen::MatrixXd, 2> weak_;   // Np x nq: Minv Vr_a^T W
  std::array<Eigen::MatrixXd, 2> weakV_;  // Np x Np: weak_a Vq
  std::vector<Eigen::Matrix2d> rx_;
  std::vector<double> det_;
  std::vector<Eigen::MatrixXd> xq_;
  std::vector<Eigen::MatrixXd> xf_;
  std::vector<std::vector<FaceMap>> maps_;

  // Workspace for rhs().
  EntropyProjection ws_proj_;
  GradientField ws_grad_;
  SolutionField ws_u_;
  SolutionField ws_out_;
  SolutionField ws_visc_;
  std::vector<double> ws_delta_, ws_b_, ws_eps_;
  mutable std::vector<std::array<Eigen::MatrixXd, 2>> sigma_;
  mutable std::vector<std::array<Eigen::MatrixXd, 2>> sigma_face_;
};

extern template class Discretization<Burgers<1>>;
extern template class Discretization<Burgers<2>>;
extern template class Discretization<Euler<1>>;
extern template class Discretization<Euler<2>>;

}  // namespace ecavdg
