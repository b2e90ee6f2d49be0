#include "ecavdg/discretization.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "ecavdg/parallel.hpp"
#include "ecavdg/shockcap.hpp"

namespace ecavdg {

namespace {

template <class Law>
constexpr bool has_wall_state = requires(const Law& l, const typename Law::State& u,
                                         const Normal& n) { l.mirror(u, n); };

Eigen::MatrixXd& scratch(int slot, Eigen::Index rows, Eigen::Index cols) {
  thread_local std::array<Eigen::MatrixXd, 8> buf;
  buf[slot].resize(rows, cols);
  return buf[slot];
}

}  // namespace

template <class Law>
Discretization<Law>::Discretization(Law law, RefElemPtr ref, std::shared_ptr<const Mesh> mesh,
                                    FluxKind flux, ViscosityOptions visc)
    : law_(law), ref_(std::move(ref)), mesh_(std::move(mesh)), flux_(flux), visc_(visc) {
  if (!ref_ || !mesh_) throw std::invalid_argument("Discretization: null reference or mesh");
  if (mesh_->dim != Law::dim || ref_->dim != Law::dim) {
    throw std::invalid_argument(fmt::format("{} needs a {}D mesh and reference element",
                                            Law::name(), Law::dim));
  }
  if (mesh_->shape != ref_->shape) throw std::invalid_argument("mesh / reference shape mismatch");
  check_flux_supported<Law>(flux_);

  dim_ = Law::dim;
  nq_ = ref_->num_volume_points();
  nfaces_ = ref_->num_faces();
  nfq_face_ = ref_->faces[0].size();
  nfq_ = nfaces_ * nfq_face_;
  const int Np = ref_->num_modes;

  Vf_.resize(nfq_, Np);
  wf_.resize(nfq_);
  for (int f = 0; f < nfaces_; ++f) {
    Vf_.middleRows(f * nfq_face_, nfq_face_) = ref_->Vf[f];
    wf_.segment(f * nfq_face_, nfq_face_) = ref_->faces[f].weights;
  }
  lift_ = ref_->Minv * Vf_.transpose() * wf_.asDiagonal();
  for (int a = 0; a < dim_; ++a) {
    weak_[a] = ref_->Minv * ref_->Vr[a].transpose() * ref_->volume.weights.asDiagonal();
    weakV_[a] = weak_[a] * ref_->Vq;
  }

  const int K = mesh_->num_elements();
  rx_.resize(K);
  det_.resize(K);
  xq_.resize(K);
  xf_.resize(K);
  for (int k = 0; k < K; ++k) {
    const auto& g = mesh_->elements[k];
    rx_[k] = g.inverse;
    det_[k] = g.det;
    auto map_points = [&](const Eigen::MatrixXd& rpts) {
      Eigen::MatrixXd x(rpts.rows(), 2);
      for (Eigen::Index q = 0; q < rpts.rows(); ++q) {
        Eigen::Vector2d r = Eigen::Vector2d::Zero();
        r.head(dim_) = rpts.row(q).transpose().head(dim_);
        x.row(q) = g.map(r).transpose();
      }
      return x;
    };
    xq_[k] = map_points(ref_->volume.points);
    xf_[k].resize(nfq_, 2);
    for (int f = 0; f < nfaces_; ++f)
      xf_[k].middleRows(f * nfq_face_, nfq_face_) = map_points(ref_->faces[f].points);
  }

  bool any_wall = false;
  maps_.assign(K, std::vector<FaceMap>(nfaces_));
  const double tol = 1e-8 * mesh_->h_min();
  for (int k = 0; k < K; ++k) {
    for (int f = 0; f < nfaces_; ++f) {
      const FaceInfo& fi = mesh_->faces[k][f];
      if (fi.wall) {
        any_wall = true;
        continue;
      }
      const int kn = fi.neighbor, fn = fi.neighbor_face;
      const auto mine = xf_[k].middleRows(f * nfq_face_, nfq_face_);
      const auto theirs = xf_[kn].middleRows(fn * nfq_face_, nfq_face_);
      const Eigen::RowVector2d shift = mine.colwise().mean() - theirs.colwise().mean();
      auto& partner = maps_[k][f].partner;
      partner.resize(nfq_face_);
      for (int q = 0; q < nfq_face_; ++q) {
        int best = -1;
        double best_d = tol;
        for (int p = 0; p < nfq_face_; ++p) {
          const double d = (mine.row(q) - theirs.row(p) - shift).norm();
          if (d <= best_d) {
            best_d = d;
            best = p;
          }
        }
        if (best < 0) {
          throw std::runtime_error(
              fmt::format("face points of element {} face {} do not match neighbour {}", k, f, kn));
        }
        partner[q] = fn * nfq_face_ + best;
      }
    }
  }
  if (any_wall && !has_wall_state<Law>) {
    throw std::invalid_argument(fmt::format("wall boundaries are not defined for {}", Law::name()));
  }
}

template <class Law>
typename Law::State Discretization<Law>::wall_state(const State& u, const Normal& n) const {
  if constexpr (has_wall_state<Law>) {
    return law_.mirror(u, n);
  } else {
    (void)n;
    return u;
  }
}

template <class Law>
SolutionField Discretization<Law>::project(const std::function<State(double, double)>& fn) const {
  SolutionField out = zero_field();
  parallel_for(num_elements(), [&](int k) {
    Eigen::MatrixXd vals(nq_, nvars);
    for (int q = 0; q < nq_; ++q) vals.row(q) = fn(xq_[k](q, 0), xq_[k](q, 1)).transpose();
    out.element(k) = ref_->Pq * vals;
  });
  return out;
}

template <class Law>
Eigen::MatrixXd Discretization<Law>::volume_values(const SolutionField& u, int k) const {
  return ref_->Vq * u.element(k);
}

template <class Law>
Eigen::MatrixXd Discretization<Law>::cell_averages(const SolutionField& u) const {
  const int K = num_elements();
  Eigen::MatrixXd avg(K, nvars);
  const Eigen::VectorXd& w = ref_->volume.weights;
  const double wsum = w.sum();
  for (int k = 0; k < K; ++k) avg.row(k) = w.transpose() * (ref_->Vq * u.element(k)) / wsum;
  return avg;
}

template <class Law>
void Discretization<Law>::check_admissible(const SolutionField& u) const {
  for (int k = 0; k < num_elements(); ++k) {
    const Eigen::MatrixXd uq = ref_->Vq * u.element(k);
    const Eigen::MatrixXd uf = Vf_ * u.element(k);
    for (int q = 0; q < nq_; ++q) {
      if (!law_.admissible(uq.row(q).transpose())) {
        throw AdmissibilityError(
            fmt::format("inadmissible state in element {} at volume point {}", k, q), k, q);
      }
    }
    for (int q = 0; q < nfq_; ++q) {
      if (!law_.admissible(uf.row(q).transpose())) {
        throw AdmissibilityError(
            fmt::format("inadmissible state in element {} at face point {}", k, q), k, q);
      }
    }
  }
}

template <class Law>
void Discretization<Law>::project_stage(const SolutionField& u, EntropyProjection& p) const {
  const int K = num_elements();
  const int Np = num_modes();
  p.u_volume.resize(K);
  p.vh.resize(K);
  p.v_face.resize(K);
  p.u_face.resize(K);
  parallel_for(K, [&](int k) {
    Eigen::MatrixXd& uq = p.u_volume[k];
    uq.resize(nq_, nvars);
    uq.noalias() = ref_->Vq * u.element(k);
    Eigen::MatrixXd& vq = scratch(0, nq_, nvars);
    for (int q = 0; q < nq_; ++q) {
      const State s = uq.row(q).transpose();
      if (!law_.admissible(s)) {
        throw AdmissibilityError(
            fmt::format("inadmissible state in element {} at volume point {}", k, q), k, q);
      }
      vq.row(q) = law_.entropy_variables(s).transpose();
    }
    p.vh[k].resize(Np, nvars);
    p.vh[k].noalias() = ref_->Pq * vq;
    p.v_face[k].resize(nfq_, nvars);
    p.v_face[k].noalias() = Vf_ * p.vh[k];
    p.u_face[k].resize(nfq_, nvars);
    for (int q = 0; q < nfq_; ++q) {
      try {
        p.u_face[k].row(q) = law_.conservative_variables(p.v_face[k].row(q).transpose()).transpose();
      } catch (const AdmissibilityError& e) {
        throw AdmissibilityError(
            fmt::format("entropy projection failed in element {} at face point {}: {}", k, q,
                        e.what()),
            k, q);
      }
    }
  });
}

template <class Law>
EntropyProjection Discretization<Law>::entropy_projection(const SolutionField& u) const {
  EntropyProjection p;
  project_stage(u, p);
  return p;
}

template <class Law>
void Discretization<Law>::inviscid_stage(const SolutionField& /*u*/, const EntropyProjection& p,
                                         SolutionField& out, std::vector<double>* delta) const {
  const int K = num_elements();
  if (out.num_elements != K || out.nvars != nvars || out.num_modes != num_modes()) {
    out = zero_field();
  }
  if (delta) delta->assign(K, 0.0);
  const Eigen::VectorXd& w = ref_->volume.weights;
  parallel_for(K, [&](int k) {
    const Eigen::MatrixXd& uq = p.u_volume[k];
    std::array<Eigen::MatrixXd*, 2> G{&scratch(0, nq_, nvars), &scratch(1, nq_, nvars)};
    for (int a = 0; a < dim_; ++a) G[a]->setZero();
    for (int q = 0; q < nq_; ++q) {
      const State s = uq.row(q).transpose();
      for (int m = 0; m < dim_; ++m) {
        const State fm = law_.flux(s, m);
        for (int a = 0; a < dim_; ++a) G[a]->row(q) += rx_[k](a, m) * fm.transpose();
      }
    }
    auto r = out.element(k);
    r.noalias() = weak_[0] * (*G[0]);
    if (dim_ == 2) r.noalias() += weak_[1] * (*G[1]);

    Eigen::MatrixXd& fs = scratch(2, nfq_, nvars);
    double surf_entropy = 0.0;
    for (int f = 0; f < nfaces_; ++f) {
      const FaceInfo& fi = mesh_->faces[k][f];
      const Normal& n = fi.normal;
      for (int qq = 0; qq < nfq_face_; ++qq) {
        const int q = f * nfq_face_ + qq;
        const State uM = p.u_face[k].row(q).transpose();
        const State uP = fi.wall ? wall_state(uM, n)
                                 : State(p.u_face[fi.neighbor].row(maps_[k][f].partner[qq]).transpose());
        fs.row(q) = fi.surface_jacobian * numerical_flux(law_, flux_, uM, uP, n).transpose();
        if (delta) {
          double psi_n = 0.0;
          for (int m = 0; m < dim_; ++m) psi_n += law_.potential(uM, m) * n(m);
          surf_entropy += fi.surface_jacobian * wf_(q) * psi_n;
        }
      }
    }
    r.noalias() -= lift_ * fs / det_[k];

    if (delta) {
      Eigen::MatrixXd& dv = scratch(3, nq_, nvars);
      double vol = 0.0;
      for (int a = 0; a < dim_; ++a) {
        dv.noalias() = ref_->Vr[a] * p.vh[k];
        vol += (w.asDiagonal() * G[a]->cwiseProduct(dv)).sum();
      }
      (*delta)[k] = -det_[k] * vol + surf_entropy;
    }
  });
}

template <class Law>
std::vector<double> Discretization<Law>::volume_entropy_residual(
    const SolutionField& u, const EntropyProjection& proj) const {
  std::vector<double> delta;
  SolutionField tmp = zero_field();
  inviscid_stage(u, proj, tmp, &delta);
  return delta;
}

template <class Law>
SolutionField Discretization<Law>::inviscid_rhs(const SolutionField& u,
                                                const EntropyProjection& proj,
                                                std::vector<double>* delta) const {
  SolutionField out = zero_field();
  inviscid_stage(u, proj, out, delta);
  return out;
}

template <class Law>
void Discretization<Law>::gradient_stage(const EntropyProjection& p, GradientField& g) const {
  const int K = num_elements();
  const int Np = num_modes();
  g.theta.resize(K);
  parallel_for(K, [&](int k) {
    Eigen::MatrixXd& jump = scratch(0, nfq_, nvars);
    for (int f = 0; f < nfaces_; ++f) {
      const FaceInfo& fi = mesh_->faces[k][f];
      for (int qq = 0; qq < nfq_face_; ++qq) {
        const int q = f * nfq_face_ + qq;
        if (fi.wall) {
          jump.row(q).setZero();
          continue;
        }
        const auto vP = p.v_face[fi.neighbor].row(maps_[k][f].partner[qq]);
        jump.row(q) = 0.5 * (1.0 - fi.beta) * fi.surface_jacobian * (vP - p.v_face[k].row(q));
      }
    }
    Eigen::MatrixXd& lifted = scratch(1, Np, nvars);
    Eigen::MatrixXd& dref = scratch(2, Np, nvars);
    for (int i = 0; i < dim_; ++i) {
      Eigen::MatrixXd& th = g.theta[k][i];
      th.setZero(Np, nvars);
      for (int a = 0; a < dim_; ++a) {
        dref.noalias() = ref_->Dr[a] * p.vh[k];
        th += rx_[k](a, i) * dref;
      }
      Eigen::MatrixXd& scaled = scratch(3, nfq_, nvars);
      for (int f = 0; f < nfaces_; ++f) {
        scaled.middleRows(f * nfq_face_, nfq_face_) =
            mesh_->faces[k][f].normal(i) * jump.middleRows(f * nfq_face_, nfq_face_);
      }
      lifted.noalias() = lift_ * scaled;
      th += lifted / det_[k];
    }
    if (dim_ == 1) g.theta[k][1].resize(0, 0);
  });
}

template <class Law>
GradientField Discretization<Law>::ldg_gradient(const EntropyProjection& proj) const {
  GradientField g;
  gradient_stage(proj, g);
  return g;
}

template <class Law>
void Discretization<Law>::energy_stage(const EntropyProjection& p, const GradientField& g,
                                       std::vector<double>& b) const {
  const int K = num_elements();
  b.assign(K, 0.0);
  const Eigen::VectorXd& w = ref_->volume.weights;
  parallel_for(K, [&](int k) {
    std::array<Eigen::MatrixXd*, 2> tq{&scratch(0, nq_, nvars), &scratch(1, nq_, nvars)};
    for (int i = 0; i < dim_; ++i) tq[i]->noalias() = ref_->Vq * g.theta[k][i];
    double sum = 0.0;
    for (int q = 0; q < nq_; ++q) {
      const typename Law::Jacobian A = law_.dudv(p.u_volume[k].row(q).transpose());
      double local = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const State t = tq[i]->row(q).transpose();
        local += t.dot(A * t);
      }
      sum += w(q) * local;
    }
    b[k] = det_[k] * sum;
  });
}

template <class Law>
std::vector<double> Discretization<Law>::gradient_energy(const EntropyProjection& proj,
                                                         const GradientField& grad) const {
  std::vector<double> b;
  energy_stage(proj, grad, b);
  return b;
}

template <class Law>
std::vector<double> Discretization<Law>::smoothness_indicators(const SolutionField& u) const {
  const int K = num_elements();
  std::vector<double> S(K, 0.0);
  parallel_for(K, [&](int k) {
    const Eigen::MatrixXd uq = ref_->Vq * u.element(k);
    Eigen::VectorXd vals(nq_);
    for (int q = 0; q < nq_; ++q) {
      const State s = uq.row(q).transpose();
      if constexpr (requires { law_.gamma; }) {
        vals(q) = s(0) * law_.pressure(s);
      } else {
        vals(q) = s(0);
      }
    }
    const Eigen::VectorXd modal = ref_->to_modal * (ref_->Pq * vals);
    S[k] = shockcap::smoothness_indicator(
        std::span<const double>(modal.data(), static_cast<std::size_t>(modal.size())),
        ref_->mode_degree);
  });
  return S;
}

template <class Law>
void Discretization<Law>::coefficient_stage(const SolutionField& u,
                                            const std::vector<double>& delta,
                                            const std::vector<double>& b,
                                            std::vector<double>& eps) const {
  const int K = num_elements();
  eps.assign(K, 0.0);
  switch (visc_.mode) {
    case ViscosityMode::none:
      return;
    case ViscosityMode::ecav:
      for (int k = 0; k < K; ++k)
        eps[k] = ecav_coefficient(delta[k], b[k], visc_.regularization, visc_.delta);
      return;
    case ViscosityMode::shock_capturing: {
      const std::vector<double> S = smoothness_indicators(u);
      const int N = std::max(ref_->degree, 1);
      for (int k = 0; k < K; ++k) {
        shockcap::IndicatorConfig cfg =
            shockcap::default_config(N, mesh_->elements[k].diameter);
        if (!visc_.sc_defaults) {
          cfg.s0 = visc_.sc_s0;
          cfg.kappa = visc_.sc_kappa;
          if (visc_.sc_eps0 > 0.0) cfg.eps0 = visc_.sc_eps0;
        }
        eps[k] = shockcap::ramp_viscosity(S[k], cfg);
      }
      return;
    }
  }
}

template <class Law>
ViscosityData Discretization<Law>::viscosity_coefficients(const SolutionField& u,
                                                          const EntropyProjection& proj,
                                                          const GradientField& grad) const {
  ViscosityData d;
  d.delta = volume_entropy_residual(u, proj);
  energy_stage(proj, grad, d.b);
  coefficient_stage(u, d.delta, d.b, d.eps);
  return d;
}

template <class Law>
void Discretization<Law>::viscous_stage(const EntropyProjection& p, const GradientField& g,
                                        const std::vector<double>& eps, SolutionField& out,
                                        bool accumulate) const {
  const int K = num_elements();
  const int Np = num_modes();
  if (!accumulate) {
    if (out.coeffs.size() == zero_field().coeffs.size()) {
      out.coeffs.setZero();
    } else {
      out = zero_field();
    }
  }
  sigma_.resize(K);
  sigma_face_.resize(K);

  parallel_for(K, [&](int k) {
    for (int i = 0; i < dim_; ++i) {
      sigma_[k][i].setZero(Np, nvars);
      sigma_face_[k][i].setZero(nfq_, nvars);
    }
    if (eps[k] == 0.0) return;
    std::array<Eigen::MatrixXd*, 2> tq{&scratch(0, nq_, nvars), &scratch(1, nq_, nvars)};
    for (int i = 0; i < dim_; ++i) tq[i]->noalias() = ref_->Vq * g.theta[k][i];
    for (int q = 0; q < nq_; ++q) {
      const typename Law::Jacobian A = eps[k] * law_.dudv(p.u_volume[k].row(q).transpose());
      for (int i = 0; i < dim_; ++i) {
        const State t = tq[i]->row(q).transpose();
        tq[i]->row(q) = (A * t).transpose();
      }
    }
    for (int i = 0; i < dim_; ++i) {
      sigma_[k][i].noalias() = ref_->Pq * (*tq[i]);
      sigma_face_[k][i].noalias() = Vf_ * sigma_[k][i];
    }
  });

  parallel_for(K, [&](int k) {
    Eigen::MatrixXd& fs = scratch(0, nfq_, nvars);
    fs.setZero();
    bool any = eps[k] != 0.0;
    for (int f = 0; f < nfaces_; ++f) {
      const FaceInfo& fi = mesh_->faces[k][f];
      if (fi.wall) continue;
      const int kn = fi.neighbor;
      if (eps[k] == 0.0 && eps[kn] == 0.0) continue;
      any = true;
      for (int qq = 0; qq < nfq_face_; ++qq) {
        const int q = f * nfq_face_ + qq;
        const int qp = maps_[k][f].partner[qq];
        for (int i = 0; i < dim_; ++i) {
          const auto sM = sigma_face_[k][i].row(q);
          const auto sP = sigma_face_[kn][i].row(qp);
          fs.row(q) += fi.surface_jacobian * fi.normal(i) *
                       (0.5 * (sM + sP) + 0.5 * fi.beta * (sP - sM));
        }
      }
    }
    if (!any) return;
    auto gk = out.element(k);
    Eigen::MatrixXd& S = scratch(1, Np, nvars);
    for (int a = 0; a < dim_; ++a) {
      S.setZero();
      for (int i = 0; i < dim_; ++i) S += rx_[k](a, i) * sigma_[k][i];
      gk.noalias() -= weakV_[a] * S;
    }
    gk.noalias() += lift_ * fs / det_[k];
  });
}

template <class Law>
SolutionField Discretization<Law>::viscous_rhs(const EntropyProjection& proj,
                                               const GradientField& grad,
                                               const std::vector<double>& eps) const {
  SolutionField out = zero_field();
  viscous_stage(proj, grad, eps, out, true);
  return out;
}

template <class Law>
double Discretization<Law>::entropy_rate(const SolutionField& dudt,
                                         const EntropyProjection& proj) const {
  double total = 0.0;
  for (int k = 0; k < num_elements(); ++k) {
    total += det_[k] * (dudt.element(k).cwiseProduct(ref_->M * proj.vh[k])).sum();
  }
  return total;
}

template <class Law>
std::vector<double> Discretization<Law>::projection_ratios(const SolutionField& u,
                                                           double rel_threshold) const {
  const int K = num_elements();
  std::vector<double> r(K, std::numeric_limits<double>::quiet_NaN());
  const Eigen::VectorXd& w = ref_->volume.weights;
  const double wsum = w.sum();
  parallel_for(K, [&](int k) {
    const Eigen::MatrixXd uq = ref_->Vq * u.element(k);
    Eigen::MatrixXd vq(nq_, nvars);
    for (int q = 0; q < nq_; ++q) vq.row(q) = law_.entropy_variables(uq.row(q).transpose()).transpose();
    const Eigen::RowVectorXd mean = w.transpose() * vq / wsum;
    const Eigen::MatrixXd dv = vq.rowwise() - mean;
    const Eigen::MatrixXd pdv = ref_->Vq * (ref_->Pq * dv);
    const double num = (w.asDiagonal() * dv.cwiseAbs2()).sum();
    const double den = (w.asDiagonal() * pdv.cwiseAbs2()).sum();
    const double scale = (w.asDiagonal() * vq.cwiseAbs2()).sum();
    if (num <= rel_threshold * rel_threshold * scale || den <= 0.0) return;
    r[k] = num / den;
  });
  return r;
}

template <class Law>
double Discretization<Law>::total_entropy(const SolutionField& u) const {
  double total = 0.0;
  const Eigen::VectorXd& w = ref_->volume.weights;
  for (int k = 0; k < num_elements(); ++k) {
    const Eigen::MatrixXd uq = ref_->Vq * u.element(k);
    double s = 0.0;
    for (int q = 0; q < nq_; ++q) s += w(q) * law_.entropy(uq.row(q).transpose());
    total += det_[k] * s;
  }
  return total;
}

template <class Law>
double Discretization<Law>::interface_entropy_term(const EntropyProjection& p) const {
  double total = 0.0;
  for (int k = 0; k < num_elements(); ++k) {
    for (int f = 0; f < nfaces_; ++f) {
      const FaceInfo& fi = mesh_->faces[k][f];
      for (int qq = 0; qq < nfq_face_; ++qq) {
        const int q = f * nfq_face_ + qq;
        const State uM = p.u_face[k].row(q).transpose();
        const State uP = fi.wall ? wall_state(uM, fi.normal)
                                 : State(p.u_face[fi.neighbor].row(maps_[k][f].partner[qq]).transpose());
        const State fstar = numerical_flux(law_, flux_, uM, uP, fi.normal);
        double psi_n = 0.0;
        for (int m = 0; m < dim_; ++m) psi_n += law_.potential(uM, m) * fi.normal(m);
        total += fi.surface_jacobian * wf_(q) *
                 (p.v_face[k].row(q).dot(fstar.transpose()) - psi_n);
      }
    }
  }
  return total;
}

template <class Law>
std::pair<double, double> Discretization<Law>::viscous_surface_sums(
    const EntropyProjection& p, const GradientField& g, const std::vector<double>& eps) const {
  SolutionField dummy = zero_field();
  viscous_stage(p, g, eps, dummy, true);
  double T1 = 0.0, T2 = 0.0;
  for (int k = 0; k < num_elements(); ++k) {
    for (int f = 0; f < nfaces_; ++f) {
      const FaceInfo& fi = mesh_->faces[k][f];
      if (fi.wall) continue;
      const int kn = fi.neighbor;
      for (int qq = 0; qq < nfq_face_; ++qq) {
        const int q = f * nfq_face_ + qq;
        const int qp = maps_[k][f].partner[qq];
        const double wq = fi.surface_jacobian * wf_(q);
        const auto vM = p.v_face[k].row(q);
        const auto vP = p.v_face[kn].row(qp);
        for (int i = 0; i < dim_; ++i) {
          const auto sM = sigma_face_[k][i].row(q);
          const auto sP = sigma_face_[kn][i].row(qp);
          const Eigen::RowVectorXd shat = 0.5 * (sM + sP) + 0.5 * fi.beta * (sP - sM);
          T1 += wq * fi.normal(i) * shat.dot(vM);
          T2 += wq * fi.normal(i) * 0.5 * (1.0 - fi.beta) * (vP - vM).dot(sM);
        }
      }
    }
  }
  return {T1, T2};
}

template <class Law>
std::pair<double, double> Discretization<Law>::l2_error(
    const SolutionField& u, const std::function<State(double, double)>& exact) const {
  double err = 0.0, norm = 0.0;
  const Eigen::VectorXd& w = ref_->volume.weights;
  for (int k = 0; k < num_elements(); ++k) {
    const Eigen::MatrixXd uq = ref_->Vq * u.element(k);
    for (int q = 0; q < nq_; ++q) {
      const State ex = exact(xq_[k](q, 0), xq_[k](q, 1));
      err += det_[k] * w(q) * (uq.row(q).transpose() - ex).squaredNorm();
      norm += det_[k] * w(q) * ex.squaredNorm();
    }
  }
  return {std::sqrt(err), std::sqrt(norm)};
}

template <class Law>
Eigen::MatrixXd Discretization<Law>::volume_gradient(const SolutionField& u, int k,
                                                     int var) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nq_, 2);
  const Eigen::VectorXd c = u.element(k).col(var);
  for (int a = 0; a < dim_; ++a) {
    const Eigen::VectorXd d = ref_->Vr[a] * c;
    for (int i = 0; i < dim_; ++i) out.col(i) += rx_[k](a, i) * d;
  }
  return out;
}

template <class Law>
void Discretization<Law>::rhs(const Eigen::VectorXd& u, Eigen::VectorXd& dudt,
                              RhsDiagnostics* diag) {
  if (ws_u_.num_elements != num_elements()) ws_u_ = zero_field();
  if (u.size() != ws_u_.coeffs.size()) {
    throw std::invalid_argument(fmt::format("rhs: expected {} coefficients, got {}",
                                            ws_u_.coeffs.size(), u.size()));
  }
  ws_u_.coeffs = u;
  project_stage(ws_u_, ws_proj_);
  const bool need_delta = diag != nullptr || visc_.mode == ViscosityMode::ecav;
  inviscid_stage(ws_u_, ws_proj_, ws_out_, need_delta ? &ws_delta_ : nullptr);

  const bool viscous = visc_.mode != ViscosityMode::none;
  if (viscous) {
    gradient_stage(ws_proj_, ws_grad_);
    energy_stage(ws_proj_, ws_grad_, ws_b_);
    coefficient_stage(ws_u_, ws_delta_, ws_b_, ws_eps_);
    if (diag) {
      viscous_stage(ws_proj_, ws_grad_, ws_eps_, ws_visc_, false);
      ws_out_.coeffs += ws_visc_.coeffs;
    } else {
      viscous_stage(ws_proj_, ws_grad_, ws_eps_, ws_out_, true);
    }
  } else {
    ws_b_.assign(num_elements(), 0.0);
    ws_eps_.assign(num_elements(), 0.0);
  }
  dudt = ws_out_.coeffs;

  if (diag) {
    diag->delta = ws_delta_;
    diag->b = ws_b_;
    diag->eps = ws_eps_;
    diag->entropy_rate = entropy_rate(ws_out_, ws_proj_);
    diag->dissipation = 0.0;
    diag->max_eps = 0.0;
    for (int k = 0; k < num_elements(); ++k) {
      diag->dissipation += ws_eps_[k] * ws_b_[k];
      diag->max_eps = std::max(diag->max_eps, ws_eps_[k]);
    }
    diag->viscous_work = viscous ? -entropy_rate(ws_visc_, ws_proj_) : 0.0;
    diag->interface_term = interface_entropy_term(ws_proj_);
  }
}

template class Discretization<Burgers<1>>;
template class Discretization<Burgers<2>>;
template class Discretization<Euler<1>>;
template class Discretization<Euler<2>>;

}  // namespace ecavdg
