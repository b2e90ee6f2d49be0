#include <doctest.h>

#include <random>

#include "ecavdg/discretization.hpp"
#include "helpers.hpp"

using namespace ecavdg;
using testing::periodic_mesh;
using testing::smooth_field;

namespace {

template <class Law>
Discretization<Law> make(int N, int cells, FluxKind flux, ViscosityMode mode = ViscosityMode::none,
                         Formulation f = Formulation::modal, ViscousScheme s = ViscousScheme::ldg) {
  ViscosityOptions v;
  v.mode = mode;
  const Shape shape = Law::dim == 1 ? Shape::interval : Shape::triangle;
  return Discretization<Law>(Law{}, build_reference_element(shape, N, f), periodic_mesh(Law::dim, cells, s),
                             flux, v);
}

// sum_k int rhs_k, per variable
template <class Law>
Eigen::VectorXd total_integral(const Discretization<Law>& d, const SolutionField& r) {
  Eigen::VectorXd tot = Eigen::VectorXd::Zero(Law::nvars);
  for (int k = 0; k < d.num_elements(); ++k) {
    const Eigen::MatrixXd vals = d.ref().Vq * r.element(k);
    tot += d.jacobian(k) * (vals.transpose() * d.ref().volume.weights);
  }
  return tot;
}

}  // namespace

TEST_CASE("projection reproduces polynomials and the l2 error vanishes for them") {
  auto d = make<Euler<1>>(3, 4, FluxKind::hllc);
  auto poly = [&](double x, double) {
    return d.law().from_primitive(1.0 + 0.1 * x, Eigen::Matrix<double, 1, 1>(0.0), 2.0);
  };
  const auto u = d.project(poly);
  const auto [err, norm] = d.l2_error(u, poly);
  CHECK(err < 1e-13);
  CHECK(norm > 0.0);
  const Eigen::MatrixXd avg = d.cell_averages(u);
  CHECK(avg(0, 0) == doctest::Approx(1.0 + 0.1 * 0.125));
}

TEST_CASE("free-stream preservation and conservation") {
  SUBCASE("euler 2D") {
    auto d = make<Euler<2>>(2, 3, FluxKind::hllc, ViscosityMode::ecav);
    const auto c = d.project([&](double, double) {
      return d.law().from_primitive(1.3, Eigen::Vector2d(0.4, -0.2), 0.8);
    });
    Eigen::VectorXd r(c.coeffs.size());
    d.rhs(c.coeffs, r);
    CHECK(r.cwiseAbs().maxCoeff() < 1e-12);

    const auto u = smooth_field(d, 4);
    d.rhs(u.coeffs, r);
    SolutionField rf = d.zero_field();
    rf.coeffs = r;
    CHECK(total_integral(d, rf).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("euler 1D nodal with shock capturing") {
    auto d = make<Euler<1>>(3, 6, FluxKind::hllc, ViscosityMode::shock_capturing, Formulation::nodal);
    const auto u = smooth_field(d, 5, 0.4);
    Eigen::VectorXd r(u.coeffs.size());
    d.rhs(u.coeffs, r);
    SolutionField rf = d.zero_field();
    rf.coeffs = r;
    CHECK(total_integral(d, rf).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("entropy residual vanishes for burgers") {
  // N = 2: the volume rule integrates f(u) . grad vh exactly
  auto d = make<Burgers<2>>(2, 3, FluxKind::burgers_ec);
  const auto u = smooth_field(d, 9, 0.5);
  const auto proj = d.entropy_projection(u);
  for (double delta : d.volume_entropy_residual(u, proj)) CHECK(std::abs(delta) < 1e-12);
  // EC interface flux and no viscosity: entropy conserved
  const auto r = d.inviscid_rhs(u, proj);
  CHECK(std::abs(d.entropy_rate(r, proj)) < 1e-12);
}

TEST_CASE("entropy rate chain rule: (du/dt, Pv) equals (du/dt, v) at quadrature") {
  auto d = make<Euler<2>>(2, 3, FluxKind::hllc);
  const auto u = smooth_field(d, 21, 0.3);
  const auto proj = d.entropy_projection(u);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  SolutionField dudt = d.zero_field();
  for (auto& c : dudt.coeffs) c = U(rng);
  double direct = 0.0;
  for (int k = 0; k < d.num_elements(); ++k) {
    const Eigen::MatrixXd uq = d.volume_values(u, k);
    const Eigen::MatrixXd rq = d.ref().Vq * dudt.element(k);
    for (int q = 0; q < uq.rows(); ++q) {
      const Euler<2>::State s = uq.row(q).transpose();
      direct += d.jacobian(k) * d.ref().volume.weights(q) * rq.row(q).dot(d.law().entropy_variables(s).transpose());
    }
  }
  CHECK(d.entropy_rate(dudt, proj) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("inviscid entropy stability with HLLC") {
  auto d = make<Euler<1>>(3, 8, FluxKind::hllc, ViscosityMode::ecav);
  const auto u = smooth_field(d, 3, 0.4);
  Eigen::VectorXd r(u.coeffs.size());
  RhsDiagnostics diag;
  d.rhs(u.coeffs, r, &diag);
  CHECK(diag.entropy_rate <= 1e-12);
  CHECK(diag.interface_term >= -1e-12);
  CHECK(diag.viscous_work == doctest::Approx(diag.dissipation).epsilon(1e-10));
  for (std::size_t k = 0; k < diag.eps.size(); ++k) {
    CHECK(diag.eps[k] >= 0.0);
    // ECAV restores the cell entropy balance: eps b = max(0, -delta) up to regularisation
    CHECK(diag.eps[k] * diag.b[k] == doctest::Approx(std::max(0.0, -diag.delta[k])).epsilon(1e-6));
  }
}

TEST_CASE("hand-computed LDG gradient, N = 0 on two elements") {
  // domain [0, 2], h = 1, values 0 and 1. beta = +1 on right faces, so each
  // element takes the jump from its left face only: theta = (-1, +1).
  ViscosityOptions v;
  Mesh m = uniform_interval_mesh(0.0, 2.0, 2, BoundaryKind::periodic);
  auto mesh = std::make_shared<const Mesh>(assign_ldg_switches(m, default_switch_vector(1), ViscousScheme::ldg));
  Discretization<Burgers<1>> d(Burgers<1>{}, build_reference_element(Shape::interval, 0, Formulation::modal),
                               mesh, FluxKind::burgers_ec, v);
  const auto u = d.project([](double x, double) { return Burgers<1>::State(x < 1.0 ? 0.0 : 1.0); });
  const auto proj = d.entropy_projection(u);
  const auto g = d.ldg_gradient(proj);
  const double phi0 = d.ref().Vq(0, 0);
  CHECK(phi0 * g.theta[0][0](0, 0) == doctest::Approx(-1.0));
  CHECK(phi0 * g.theta[1][0](0, 0) == doctest::Approx(1.0));
  // BR-1 averages both faces: jumps cancel
  auto br1 = std::make_shared<const Mesh>(assign_ldg_switches(m, default_switch_vector(1), ViscousScheme::br1));
  Discretization<Burgers<1>> db(Burgers<1>{}, build_reference_element(Shape::interval, 0, Formulation::modal),
                                br1, FluxKind::burgers_ec, v);
  const auto gb = db.ldg_gradient(db.entropy_projection(u));
  CHECK(std::abs(gb.theta[0][0](0, 0)) < 1e-14);
}

TEST_CASE("gradient null space is the constants under LDG") {
  auto check = [](auto d, int expected_nullity) {
    const int n = static_cast<int>(d.zero_field().coeffs.size());
    const int Np = d.num_modes();
    const int dim = d.ref().dim;
    Eigen::MatrixXd A(d.num_elements() * Np * dim, n);
    for (int j = 0; j < n; ++j) {
      auto u = d.zero_field();
      u.coeffs(j) = 1.0;
      const auto g = d.ldg_gradient(d.entropy_projection(u));
      for (int k = 0; k < d.num_elements(); ++k)
        for (int i = 0; i < dim; ++i) A.block(k * Np * dim + i * Np, j, Np, 1) = g.theta[k][i];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-9);
    CHECK(n - lu.rank() == expected_nullity);
  };
  check(make<Burgers<1>>(2, 5, FluxKind::burgers_ec), 1);
  check(make<Burgers<1>>(3, 4, FluxKind::burgers_ec, ViscosityMode::none, Formulation::nodal), 1);
  check(make<Burgers<2>>(1, 2, FluxKind::burgers_ec), 1);
  // BR-1 with odd N admits a spurious non-constant mode on periodic meshes
  check(make<Burgers<1>>(1, 4, FluxKind::burgers_ec, ViscosityMode::none, Formulation::modal,
                         ViscousScheme::br1),
        2);
}

TEST_CASE("dissipation identity and surface cancellation on a smooth field") {
  for (ViscousScheme s : {ViscousScheme::ldg, ViscousScheme::br1}) {
    auto d = make<Euler<2>>(2, 3, FluxKind::hllc, ViscosityMode::ecav, Formulation::modal, s);
    const auto u = smooth_field(d, 17, 0.3);
    const auto proj = d.entropy_projection(u);
    const auto grad = d.ldg_gradient(proj);
    const auto b = d.gradient_energy(proj, grad);
    std::vector<double> eps(d.num_elements());
    for (int k = 0; k < d.num_elements(); ++k) eps[k] = 0.01 * (k % 3);
    const auto g = d.viscous_rhs(proj, grad, eps);
    double diss = 0.0;
    for (int k = 0; k < d.num_elements(); ++k) {
      CHECK(b[k] >= 0.0);
      diss += eps[k] * b[k];
    }
    CHECK(-d.entropy_rate(g, proj) == doctest::Approx(diss).epsilon(1e-10));
    const auto [T1, T2] = d.viscous_surface_sums(proj, grad, eps);
    CHECK(std::abs(T1 + T2) <= 1e-12 * (std::abs(T1) + std::abs(T2) + 1e-300));
    SolutionField gf = g;
    CHECK(total_integral(d, gf).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("contact preservation with piecewise-constant data") {
  // K = 20 puts the jumps at x = 0.35 and 0.65 on element boundaries
  auto d = make<Euler<1>>(3, 20, FluxKind::hllc, ViscosityMode::ecav);
  const auto u = d.project([&](double x, double) {
    const auto p = stationary_contact(2.0 * x - 1.0);
    return d.law().from_primitive(p.rho, Eigen::Matrix<double, 1, 1>(p.u), p.p);
  });
  Eigen::VectorXd r(u.coeffs.size());
  RhsDiagnostics diag;
  d.rhs(u.coeffs, r, &diag);
  CHECK(r.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(diag.max_eps < 1e-20);
}

TEST_CASE("projection ratios are at least one") {
  auto d = make<Euler<1>>(4, 6, FluxKind::hllc);
  const auto u = smooth_field(d, 8, 0.45);
  int finite = 0;
  for (double r : d.projection_ratios(u)) {
    if (std::isnan(r)) continue;
    ++finite;
    CHECK(r >= 1.0 - 1e-12);
  }
  CHECK(finite > 0);
  // constant state: v constant, ratio undefined
  const auto c = d.project([&](double, double) {
    return d.law().from_primitive(1.0, Eigen::Matrix<double, 1, 1>(0.0), 1.0);
  });
  for (double r : d.projection_ratios(c)) CHECK(std::isnan(r));
}

TEST_CASE("admissibility errors name the element") {
  auto d = make<Euler<1>>(2, 4, FluxKind::hllc);
  auto u = d.project([&](double, double) {
    return d.law().from_primitive(1.0, Eigen::Matrix<double, 1, 1>(0.0), 1.0);
  });
  u(2, 0, 0) = -5.0;
  try {
    d.check_admissible(u);
    FAIL("expected AdmissibilityError");
  } catch (const AdmissibilityError& e) {
    CHECK(e.element() == 2);
  }
}

TEST_CASE("walls require a mirror state") {
  Mesh m = uniform_interval_mesh(0.0, 1.0, 4, BoundaryKind::wall);
  auto mesh = std::make_shared<const Mesh>(assign_ldg_switches(m, default_switch_vector(1), ViscousScheme::ldg));
  CHECK_THROWS(Discretization<Burgers<1>>(Burgers<1>{}, build_reference_element(Shape::interval, 1, Formulation::modal),
                                          mesh, FluxKind::burgers_ec));
  // Euler at rest in a closed box stays at rest
  Discretization<Euler<1>> d(Euler<1>{}, build_reference_element(Shape::interval, 2, Formulation::modal), mesh,
                             FluxKind::hllc);
  const auto u = d.project([&](double, double) {
    return d.law().from_primitive(1.0, Eigen::Matrix<double, 1, 1>(0.0), 1.0);
  });
  Eigen::VectorXd r(u.coeffs.size());
  d.rhs(u.coeffs, r);
  CHECK(r.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("smooth-solution convergence of the inviscid right-hand side") {
  // error in the semi-discrete time derivative of the density wave, O(h^N)
  auto err = [](int K) {
    ViscosityOptions v;
    Discretization<Euler<1>> d(Euler<1>{}, build_reference_element(Shape::interval, 3, Formulation::modal),
                               periodic_mesh(1, K, ViscousScheme::ldg, -1.0, 1.0), FluxKind::hllc, v);
    auto exact = [&](double x, double t) {
      const auto p = density_wave(x, t);
      return d.law().from_primitive(p.rho, Eigen::Matrix<double, 1, 1>(p.u), p.p);
    };
    const auto u = d.project([&](double x, double) { return exact(x, 0.0); });
    Eigen::VectorXd r(u.coeffs.size());
    d.rhs(u.coeffs, r);
    SolutionField rf = d.zero_field();
    rf.coeffs = r;
    const double h = 1e-5;
    return d.l2_error(rf, [&](double x, double) {
      return Euler<1>::State((exact(x, h) - exact(x, -h)) / (2 * h));
    }).first;
  };
  CHECK(std::log2(err(32) / err(64)) > 2.5);
}
