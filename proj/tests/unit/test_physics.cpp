#include <doctest.h>

#include <random>

#include "ecavdg/physics.hpp"
#include "helpers.hpp"

using namespace ecavdg;
using testing::random_euler_state;

namespace {

// Entropy flux F_m = -rho u_m s, written out independently of the law.
template <int D>
double entropy_flux(const Euler<D>& law, const typename Euler<D>::State& u, int m) {
  const double rho = u(0);
  double ke = 0.0;
  for (int i = 0; i < D; ++i) ke += 0.5 * u(1 + i) * u(1 + i) / rho;
  const double p = (law.gamma - 1.0) * (u(D + 1) - ke);
  return -u(1 + m) * (std::log(p) - law.gamma * std::log(rho));
}

template <int D>
void euler_algebra(unsigned seed) {
  Euler<D> law;
  std::mt19937 rng(seed);
  using State = typename Euler<D>::State;
  constexpr int n = D + 2;
  for (int trial = 0; trial < 1000; ++trial) {
    const State u = random_euler_state(law, rng);
    const State v = law.entropy_variables(u);
    const auto A = law.dudv(u);

    // v = dS/du, central differences
    for (int i = 0; i < n; ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(u(i)));
      State up = u, um = u;
      up(i) += h;
      um(i) -= h;
      const double fd = (law.entropy(up) - law.entropy(um)) / (2 * h);
      CHECK(std::abs(fd - v(i)) <= 1e-6 * std::max(1.0, std::abs(v(i))));
    }
    // psi_m = v . f_m - F_m
    for (int m = 0; m < D; ++m) {
      const double psi = v.dot(law.flux(u, m)) - entropy_flux(law, u, m);
      CHECK(std::abs(psi - law.potential(u, m)) <= 1e-10 * std::max(1.0, std::abs(psi)));
    }
    // dF/du = v^T df/du (the potential rule), FD in u
    for (int m = 0; m < D; ++m) {
      for (int i = 0; i < n; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(u(i)));
        State up = u, um = u;
        up(i) += h;
        um(i) -= h;
        const double dF = (entropy_flux(law, up, m) - entropy_flux(law, um, m)) / (2 * h);
        const double vdf = v.dot((law.flux(up, m) - law.flux(um, m)) / (2 * h));
        CHECK(std::abs(dF - vdf) <= 1e-6 * std::max(1.0, std::abs(dF)));
      }
    }
    // du/dv by FD of u(v); symmetric positive definite
    for (int j = 0; j < n; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(v(j)));
      State vp = v, vm = v;
      vp(j) += h;
      vm(j) -= h;
      const State col = (law.conservative_variables(vp) - law.conservative_variables(vm)) / (2 * h);
      CHECK((col - A.col(j)).norm() <= 1e-6 * std::max(1.0, A.col(j).norm()));
    }
    CHECK((A - A.transpose()).norm() <= 1e-12 * A.norm());
    Eigen::SelfAdjointEigenSolver<typename Euler<D>::Jacobian> es(A);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    // round trip
    const State back = law.conservative_variables(v);
    CHECK((back - u).norm() <= 1e-12 * u.norm());
  }
}

}  // namespace

TEST_CASE("euler entropy algebra 1D") { euler_algebra<1>(11); }
TEST_CASE("euler entropy algebra 2D") { euler_algebra<2>(12); }

TEST_CASE("burgers entropy algebra") {
  Burgers<2> law;
  const Burgers<2>::State u(0.7);
  CHECK(law.entropy_variables(u)(0) == 0.7);
  CHECK(law.potential(u, 0) == doctest::Approx(0.7 * 0.7 * 0.7 / 6.0));
  // psi = v f - F with F = u^3/3
  CHECK(law.potential(u, 1) == doctest::Approx(0.7 * 0.5 * 0.49 - 0.343 / 3.0));
}

TEST_CASE("numerical fluxes are consistent and conservative") {
  std::mt19937 rng(3);
  Euler<2> e2;
  Euler<1> e1;
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = random_euler_state(e2, rng);
    const auto b = random_euler_state(e2, rng);
    const double th = 2 * M_PI * trial / 500.0;
    const Normal n(std::cos(th), std::sin(th));
    for (FluxKind k : {FluxKind::hllc, FluxKind::lax_friedrichs}) {
      const auto faa = numerical_flux(e2, k, a, a, n);
      CHECK((faa - e2.normal_flux(a, n)).norm() <= 1e-12 * std::max(1.0, faa.norm()));
      const auto fab = numerical_flux(e2, k, a, b, n);
      const auto fba = numerical_flux(e2, k, b, a, Normal(-n));
      CHECK((fab + fba).norm() <= 1e-12 * std::max(1.0, fab.norm()));
    }
    const auto a1 = random_euler_state(e1, rng);
    const auto b1 = random_euler_state(e1, rng);
    const Normal n1(1.0, 0.0);
    const auto f = numerical_flux(e1, FluxKind::hllc, a1, b1, n1);
    const auto g = numerical_flux(e1, FluxKind::hllc, b1, a1, Normal(-n1));
    CHECK((f + g).norm() <= 1e-12 * std::max(1.0, f.norm()));
    // HLLC resolves a stationary contact exactly: flux = (0, p, 0)
    const auto cl = e1.from_primitive(1.5, Eigen::Matrix<double, 1, 1>(0.0), 1.0);
    const auto cr = e1.from_primitive(1.0, Eigen::Matrix<double, 1, 1>(0.0), 1.0);
    const auto fc = numerical_flux(e1, FluxKind::hllc, cl, cr, n1);
    CHECK(std::abs(fc(0)) < 1e-15);
    CHECK(fc(1) == doctest::Approx(1.0));
    CHECK(std::abs(fc(2)) < 1e-15);
  }
}

TEST_CASE("burgers EC flux satisfies the entropy conservation condition") {
  Burgers<2> law;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Burgers<2>::State a(U(rng)), b(U(rng));
    const Normal n(U(rng), U(rng));
    const auto f = numerical_flux(law, FluxKind::burgers_ec, a, b, n);
    const double lhs = (b(0) - a(0)) * f(0);
    const double rhs = (law.potential(b, 0) - law.potential(a, 0)) * (n.x() + n.y());
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
  CHECK_THROWS_AS(numerical_flux(law, FluxKind::hllc, Burgers<2>::State(1.0), Burgers<2>::State(1.0),
                                 Normal(1.0, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("inadmissible states are rejected") {
  Euler<1> law;
  Euler<1>::State u;
  u << -1.0, 0.0, 1.0;
  CHECK_FALSE(law.admissible(u));
  CHECK_THROWS_AS(law.entropy_variables(u), AdmissibilityError);
  Euler<1>::State v;
  v << 0.0, 0.0, 1.0;  // last entropy variable must be negative
  CHECK_THROWS_AS(law.conservative_variables(v), AdmissibilityError);
}

TEST_CASE("slip-wall mirror state") {
  Euler<2> law;
  const auto u = law.from_primitive(1.2, Eigen::Vector2d(0.3, -0.4), 0.9);
  const auto g = law.mirror(u, Normal(0.0, 1.0));
  CHECK(g(0) == u(0));
  CHECK(g(1) == u(1));
  CHECK(g(2) == -u(2));
  CHECK(g(3) == u(3));
}

TEST_CASE("initial conditions") {
  IsentropicVortex v;
  const auto far = v(4.9, 4.9, 0.0);
  CHECK(far.rho == doctest::Approx(1.0).epsilon(1e-4));
  const auto c = v(0.0, 0.0, 0.0);
  CHECK(c.rho < 1.0);
  CHECK(c.p == doctest::Approx(std::pow(c.rho, 1.4)));
  // translation at speed 1/gamma
  const auto moved = v(1.0 / 1.4, 1.0 / 1.4, 1.0);
  CHECK(moved.rho == doctest::Approx(c.rho));
  CHECK(density_wave(0.3, 10.0).rho == doctest::Approx(density_wave(-0.7, 0.0).rho));
  CHECK(stationary_contact(0.1).rho == 1.5);
  CHECK(stationary_contact(0.5).rho == 1.0);
  CHECK(shu_osher(-4.5).rho == doctest::Approx(3.857143));
  const auto sv = shock_vortex(1.5, 0.5);
  CHECK(sv.rho > 1.0);
}
