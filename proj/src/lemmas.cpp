#include "ecavdg/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>

#include <Eigen/SVD>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ecavdg/discretization.hpp"
#include "ecavdg/errors.hpp"

namespace ecavdg {

namespace {

std::shared_ptr<const Mesh> periodic_mesh(int dim, int cells, ViscousScheme scheme) {
  Mesh m = dim == 1 ? uniform_interval_mesh(0.0, 1.0, cells, BoundaryKind::periodic)
                    : uniform_triangle_mesh({0.0, 0.0}, {1.0, 1.0}, cells, cells,
                                            BoundaryKind::periodic, BoundaryKind::periodic);
  return std::make_shared<const Mesh>(assign_ldg_switches(std::move(m), default_switch_vector(dim), scheme));
}

template <class Law>
typename Law::State random_state(const Law& law, std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  using State = typename Law::State;
  if constexpr (Law::nvars == 1) {
    (void)law;
    return State(U(rng));
  } else {
    Eigen::Matrix<double, Law::dim, 1> vel;
    for (int m = 0; m < Law::dim; ++m) vel(m) = 0.5 * U(rng);
    return law.from_primitive(1.0 + 0.4 * U(rng), vel, 1.0 + 0.4 * U(rng));
  }
}

/// Random field from independent random point values at the volume points,
/// resampled until it is admissible and the entropy projection exists.
template <class Law>
SolutionField random_field(const Discretization<Law>& d, std::mt19937& rng) {
  const auto& ref = d.ref();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    SolutionField u = d.zero_field();
    for (int k = 0; k < d.num_elements(); ++k) {
      Eigen::MatrixXd vals(ref.num_volume_points(), Law::nvars);
      for (int q = 0; q < vals.rows(); ++q) vals.row(q) = random_state(d.law(), rng).transpose();
      u.element(k) = ref.Pq * vals;
    }
    try {
      d.check_admissible(u);
      (void)d.entropy_projection(u);
      return u;
    } catch (const AdmissibilityError&) {
    }
  }
  throw std::runtime_error("could not draw an admissible random field");
}

template <class Law>
void dissipation_case(DissipationCheck& out, const Discretization<Law>& d, std::mt19937& rng,
                      int trials, const std::string& label) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  out.cases.push_back(label);
  for (int t = 0; t < trials; ++t) {
    const SolutionField u = random_field(d, rng);
    const EntropyProjection proj = d.entropy_projection(u);
    const GradientField grad = d.ldg_gradient(proj);
    const std::vector<double> b = d.gradient_energy(proj, grad);
    std::vector<double> eps(d.num_elements());
    for (double& e : eps) e = U(rng) < 0.3 ? 0.0 : U(rng);
    const SolutionField g = d.viscous_rhs(proj, grad, eps);
    const double work = -d.entropy_rate(g, proj);
    double diss = 0.0;
    for (int k = 0; k < d.num_elements(); ++k) diss += eps[k] * b[k];
    const double scale = std::max(std::abs(work), std::abs(diss));
    const double rel = scale > 0.0 ? std::abs(work - diss) / scale : 0.0;
    const auto [T1, T2] = d.viscous_surface_sums(proj, grad, eps);
    const double tscale = std::abs(T1) + std::abs(T2);
    const double srel = tscale > 0.0 ? std::abs(T1 + T2) / tscale : 0.0;
    if (out.trials == 0) {
      out.min_dissipation = diss;
      out.min_viscous_work = work;
    }
    ++out.trials;
    out.max_relative_residual = std::max(out.max_relative_residual, rel);
    out.max_surface_residual = std::max(out.max_surface_residual, srel);
    out.min_dissipation = std::min(out.min_dissipation, diss);
    out.min_viscous_work = std::min(out.min_viscous_work, work);
  }
}

template <class Law>
Discretization<Law> make_disc(int dim, int N, int cells, Formulation form, ViscousScheme scheme) {
  const Shape shape = dim == 1 ? Shape::interval : Shape::triangle;
  const FluxKind flux = Law::nvars == 1 ? FluxKind::burgers_ec : FluxKind::hllc;
  ViscosityOptions v;
  v.mode = ViscosityMode::ecav;
  return Discretization<Law>(Law{}, build_reference_element(shape, N, form),
                             periodic_mesh(dim, cells, scheme), flux, v);
}

/// Orthonormal basis of the column space (relative rank tolerance).
Eigen::MatrixXd range_basis(const Eigen::MatrixXd& A) {
  if (A.cols() == 0) return Eigen::MatrixXd(A.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  int r = 0;
  while (r < s.size() && s(r) > 1e-10 * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

/// Element-wise ||theta|| and ||grad vh|| (squared) for a scalar field.
template <class Law>
std::pair<std::vector<double>, std::vector<double>> gradient_norms(const Discretization<Law>& d,
                                                                    const SolutionField& u) {
  const EntropyProjection proj = d.entropy_projection(u);
  const GradientField grad = d.ldg_gradient(proj);
  const auto& ref = d.ref();
  std::vector<double> th(d.num_elements(), 0.0), gv(d.num_elements(), 0.0);
  for (int k = 0; k < d.num_elements(); ++k) {
    for (int i = 0; i < ref.dim; ++i) {
      Eigen::MatrixXd dv = Eigen::MatrixXd::Zero(ref.num_modes, Law::nvars);
      for (int a = 0; a < ref.dim; ++a) dv += d.rx(k, a, i) * ref.Dr[a] * proj.vh[k];
      th[k] += d.jacobian(k) * (grad.theta[k][i].cwiseProduct(ref.M * grad.theta[k][i])).sum();
      gv[k] += d.jacobian(k) * (dv.cwiseProduct(ref.M * dv)).sum();
    }
  }
  return {th, gv};
}

template <int D>
GradientBoundCheck gradient_bound(int N, int cells, unsigned seed, int trials, ViscousScheme scheme) {
  auto d = make_disc<Burgers<D>>(D, N, cells, Formulation::modal, scheme);
  GradientBoundCheck r;
  r.dim = D;
  r.N = N;
  r.h = 1.0 / cells;
  r.infimum = ldg_gradient_infimum(d.mesh(), d.ref());
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  r.random_min = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    SolutionField u = d.zero_field();
    for (auto& c : u.coeffs) c = U(rng);
    const auto [th, gv] = gradient_norms(d, u);
    for (int k = 0; k < d.num_elements(); ++k) {
      if (th[k] < 1e-26 && gv[k] < 1e-26) continue;
      r.random_min = std::min(r.random_min, std::sqrt(th[k] / gv[k]));
    }
  }
  return r;
}

}  // namespace

bool DissipationCheck::passed(double tol) const {
  return trials > 0 && max_relative_residual <= tol && max_surface_residual <= 1e-12 &&
         min_dissipation >= 0.0 && min_viscous_work >= 0.0;
}

DissipationCheck check_dissipation_identity(unsigned seed, int trials) {
  DissipationCheck out;
  std::mt19937 rng(seed);
  struct Case {
    int law;  // 0 Burgers, 1 Euler
    int dim;
    Formulation form;
    ViscousScheme scheme;
  };
  std::vector<Case> cases;
  for (ViscousScheme s : {ViscousScheme::ldg, ViscousScheme::br1}) {
    for (int law : {0, 1}) {
      cases.push_back({law, 1, Formulation::modal, s});
      cases.push_back({law, 1, Formulation::nodal, s});
      cases.push_back({law, 2, Formulation::modal, s});
    }
  }
  const int per_case = std::max(1, trials / static_cast<int>(cases.size()));
  int remaining = trials;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Case& c = cases[i];
    const int n = i + 1 == cases.size() ? std::max(remaining, 0) : std::min(per_case, remaining);
    remaining -= n;
    if (n <= 0) continue;
    const int N = c.dim == 1 ? 3 : 2;
    const int cells = c.dim == 1 ? 6 : 3;
    const std::string label = fmt::format("{} {}D {} {}", c.law == 0 ? "burgers" : "euler", c.dim,
                                          to_string(c.form), c.scheme == ViscousScheme::ldg ? "ldg" : "br1");
    if (c.law == 0 && c.dim == 1) {
      dissipation_case(out, make_disc<Burgers<1>>(1, N, cells, c.form, c.scheme), rng, n, label);
    } else if (c.law == 0) {
      if (c.form == Formulation::nodal) continue;
      dissipation_case(out, make_disc<Burgers<2>>(2, N, cells, c.form, c.scheme), rng, n, label);
    } else if (c.dim == 1) {
      dissipation_case(out, make_disc<Euler<1>>(1, N, cells, c.form, c.scheme), rng, n, label);
    } else {
      dissipation_case(out, make_disc<Euler<2>>(2, N, cells, c.form, c.scheme), rng, n, label);
    }
  }
  return out;
}

double ldg_gradient_infimum(const Mesh& mesh, const ReferenceElement& ref) {
  const int d = ref.dim;
  const int Np = ref.num_modes;
  const Eigen::LLT<Eigen::MatrixXd> llt(ref.M);
  const Eigen::MatrixXd Lt = llt.matrixU();  // M = Lt^T Lt
  double inf = std::numeric_limits<double>::infinity();
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const Eigen::Matrix2d& rx = mesh.elements[k].inverse;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(d * Np, Np);
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < d; ++a) G.middleRows(i * Np, Np) += rx(a, i) * ref.Dr[a];

    std::vector<Eigen::MatrixXd> lifts;
    for (int f = 0; f < ref.num_faces(); ++f) {
      const FaceInfo& fi = mesh.faces[k][f];
      if (fi.wall || fi.beta == 1) continue;
      const Eigen::MatrixXd L = ref.Minv * ref.Vf[f].transpose() * ref.faces[f].weights.asDiagonal();
      Eigen::MatrixXd block(d * Np, L.cols());
      for (int i = 0; i < d; ++i) block.middleRows(i * Np, Np) = fi.normal(i) * L;
      lifts.push_back(block);
    }
    Eigen::Index scols = 0;
    for (const auto& b : lifts) scols += b.cols();
    Eigen::MatrixXd S(d * Np, scols);
    Eigen::Index c = 0;
    for (const auto& b : lifts) {
      S.middleCols(c, b.cols()) = b;
      c += b.cols();
    }

    // Euclidean coordinates of the M-inner product.
    auto to_euclid = [&](const Eigen::MatrixXd& X) {
      Eigen::MatrixXd Y(X.rows(), X.cols());
      for (int i = 0; i < d; ++i) Y.middleRows(i * Np, Np) = Lt * X.middleRows(i * Np, Np);
      return Y;
    };
    const Eigen::MatrixXd QG = range_basis(to_euclid(G));
    const Eigen::MatrixXd QS = range_basis(to_euclid(S));
    if (QG.cols() == 0) continue;
    const Eigen::MatrixXd R = QG - QS * (QS.transpose() * QG);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(R);
    inf = std::min(inf, svd.singularValues().minCoeff());
  }
  return inf;
}

GradientBoundCheck ldg_gradient_lower_bound_check(int dim, int N, int cells, unsigned seed,
                                                  int trials, ViscousScheme scheme) {
  return dim == 1 ? gradient_bound<1>(N, cells, seed, trials, scheme)
                  : gradient_bound<2>(N, cells, seed, trials, scheme);
}

Br1Counterexample br1_counterexample(int N, int K) {
  Br1Counterexample r;
  r.N = N;
  auto run = [&](ViscousScheme scheme) {
    auto d = make_disc<Burgers<1>>(1, N, K, Formulation::modal, scheme);
    const auto& ref = d.ref();
    const Eigen::VectorXd s = ref.Minv * (ref.Vf[0].row(0).transpose() + ref.Vf[1].row(0).transpose());
    const Eigen::VectorXd c = ref.Dr[0].completeOrthogonalDecomposition().solve(s);
    SolutionField u = d.zero_field();
    for (int k = 0; k < d.num_elements(); ++k) u.element(k).col(0) = c;
    const auto [th, gv] = gradient_norms(d, u);
    double a = 0.0, b = 0.0;
    for (int k = 0; k < d.num_elements(); ++k) {
      a += th[k];
      b += gv[k];
    }
    return std::sqrt(a / b);
  };
  r.br1_ratio = run(ViscousScheme::br1);
  r.ldg_ratio = run(ViscousScheme::ldg);
  return r;
}

ProjectionRatioCheck check_projection_ratios(unsigned seed, int fields) {
  ProjectionRatioCheck out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.max_ratio = 0.0;
  std::mt19937 rng(seed);
  auto record = [&](const auto& d) {
    const SolutionField u = random_field(d, rng);
    for (double r : d.projection_ratios(u)) {
      if (std::isnan(r)) continue;
      out.min_ratio = std::min(out.min_ratio, r);
      out.max_ratio = std::max(out.max_ratio, r);
    }
    ++out.fields;
  };
  const auto d1 = make_disc<Euler<1>>(1, 3, 8, Formulation::modal, ViscousScheme::ldg);
  const auto d2 = make_disc<Euler<2>>(2, 2, 3, Formulation::modal, ViscousScheme::ldg);
  for (int i = 0; i < fields; ++i) {
    if (i % 2 == 0) {
      record(d1);
    } else {
      record(d2);
    }
  }
  return out;
}

bool LemmaReport::lemma3_passed() const {
  if (lemma3.empty()) return false;
  std::map<std::pair<int, int>, std::pair<double, double>> range;
  for (const auto& c : lemma3) {
    if (!(c.infimum > 1e-3) || c.random_min < c.infimum - 1e-10) return false;
    auto key = std::make_pair(c.dim, c.N);
    auto it = range.find(key);
    if (it == range.end()) {
      range[key] = {c.infimum, c.infimum};
    } else {
      it->second.first = std::min(it->second.first, c.infimum);
      it->second.second = std::max(it->second.second, c.infimum);
    }
  }
  for (const auto& [key, mm] : range) {
    if ((mm.second - mm.first) > 0.2 * mm.second) return false;
  }
  return true;
}

bool LemmaReport::br1_passed() const {
  if (br1.empty()) return false;
  for (const auto& c : br1)
    if (!(c.br1_ratio < 0.01) || !(c.ldg_ratio > 0.01)) return false;
  return true;
}

bool LemmaReport::lemma4_passed() const {
  return lemma4.fields > 0 && lemma4.min_ratio >= 1.0 - 1e-12;
}

bool LemmaReport::passed() const {
  return lemma1.passed() && lemma3_passed() && br1_passed() && lemma4_passed();
}

LemmaReport check_lemmas(unsigned seed, int trials) {
  LemmaReport r;
  r.lemma1 = check_dissipation_identity(seed, trials);
  for (int N = 1; N <= 4; ++N)
    for (int cells : {8, 16, 32})
      r.lemma3.push_back(ldg_gradient_lower_bound_check(1, N, cells, seed + N, 20));
  for (int N = 1; N <= 3; ++N)
    for (int cells : {8, 16, 32})
      r.lemma3.push_back(ldg_gradient_lower_bound_check(2, N, cells, seed + 10 + N, 2));
  for (int N : {1, 3}) r.br1.push_back(br1_counterexample(N, 8));
  r.lemma4 = check_projection_ratios(seed + 100, 50);
  return r;
}

void write_lemma_report(std::ostream& os, const LemmaReport& r) {
  const auto& l1 = r.lemma1;
  fmt::print(os, "dissipation identity: {} trials, max rel residual {:.3e}, surface residual {:.3e}, "
                 "min dissipation {:.3e}, min work {:.3e} -> {}\n",
             l1.trials, l1.max_relative_residual, l1.max_surface_residual, l1.min_dissipation,
             l1.min_viscous_work, l1.passed() ? "ok" : "FAIL");
  for (const auto& c : r.lemma3) {
    fmt::print(os, "ldg gradient bound: {}D N={} h={:.5f} infimum {:.6f} random min {:.6f}\n", c.dim,
               c.N, c.h, c.infimum, c.random_min);
  }
  fmt::print(os, "ldg gradient bound stable across h -> {}\n", r.lemma3_passed() ? "ok" : "FAIL");
  for (const auto& c : r.br1) {
    fmt::print(os, "br1 spurious mode N={}: br1 ratio {:.3e}, ldg ratio {:.6f}\n", c.N, c.br1_ratio,
               c.ldg_ratio);
  }
  fmt::print(os, "br1 counterexample -> {}\n", r.br1_passed() ? "ok" : "FAIL");
  fmt::print(os, "projection ratios: {} fields, r in [{:.15f}, {:.6f}] -> {}\n", r.lemma4.fields,
             r.lemma4.min_ratio, r.lemma4.max_ratio, r.lemma4_passed() ? "ok" : "FAIL");
}

}  // namespace ecavdg
