#include <doctest.h>

#include <cmath>

#include "ecavdg/refelem.hpp"

using namespace ecavdg;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Exact integral of (1+r)^a (1+s)^b over the bi-unit triangle.
double triangle_moment(int a, int b) {
  return 4.0 * std::pow(2.0, a + b) * factorial(a) * factorial(b) / factorial(a + b + 2);
}

double interval_moment(int k) { return k % 2 == 0 ? 2.0 / (k + 1) : 0.0; }

}  // namespace

TEST_CASE("gauss-legendre integrates monomials up to degree 2n-1") {
  for (int n = 1; n <= 8; ++n) {
    const auto q = quadrature::gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      const double s = (q.points.col(0).array().pow(k) * q.weights.array()).sum();
      CHECK(s == doctest::Approx(interval_moment(k)).epsilon(1e-13));
    }
  }
}

TEST_CASE("gauss-lobatto includes end points and integrates up to degree 2n-3") {
  for (int n = 2; n <= 8; ++n) {
    const auto q = quadrature::gauss_lobatto(n);
    CHECK(q.points.col(0).minCoeff() == doctest::Approx(-1.0));
    CHECK(q.points.col(0).maxCoeff() == doctest::Approx(1.0));
    for (int k = 0; k <= 2 * n - 3; ++k) {
      const double s = (q.points.col(0).array().pow(k) * q.weights.array()).sum();
      CHECK(s == doctest::Approx(interval_moment(k)).epsilon(1e-13));
    }
  }
  CHECK_THROWS(quadrature::gauss_lobatto(1));
}

TEST_CASE("collapsed triangle rule integrates total degree 2n-1") {
  for (int n = 1; n <= 6; ++n) {
    const auto q = quadrature::collapsed_triangle(n);
    CHECK(q.weights.sum() == doctest::Approx(2.0));
    for (int a = 0; a <= 2 * n - 1; ++a) {
      for (int b = 0; a + b <= 2 * n - 1; ++b) {
        const double s = ((1.0 + q.points.col(0).array()).pow(a) *
                          (1.0 + q.points.col(1).array()).pow(b) * q.weights.array())
                             .sum();
        CHECK(s == doctest::Approx(triangle_moment(a, b)).epsilon(1e-12));
      }
    }
    // every point inside the triangle
    CHECK(((q.points.col(0) + q.points.col(1)).array() <= 1e-14).all());
  }
}

TEST_CASE("modal bases are orthonormal") {
  for (int N = 0; N <= 5; ++N) {
    for (Shape s : {Shape::interval, Shape::triangle}) {
      const auto ref = build_reference_element(s, N, Formulation::modal);
      const int Np = s == Shape::interval ? N + 1 : (N + 1) * (N + 2) / 2;
      REQUIRE(ref->num_modes == Np);
      CHECK((ref->M - Eigen::MatrixXd::Identity(Np, Np)).norm() < 1e-12);
      CHECK((ref->Pq * ref->Vq - Eigen::MatrixXd::Identity(Np, Np)).norm() < 1e-12);
    }
  }
}

TEST_CASE("nodal formulation collocates at gauss-lobatto points") {
  const auto ref = build_reference_element(Shape::interval, 3, Formulation::nodal);
  CHECK((ref->Vq - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-14);
  CHECK((ref->Pq - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-14);
  const auto gll = quadrature::gauss_lobatto(4);
  CHECK((ref->M.diagonal() - gll.weights).norm() < 1e-14);
  CHECK_THROWS_AS(build_reference_element(Shape::triangle, 2, Formulation::nodal), std::invalid_argument);
}

TEST_CASE("derivative matrices differentiate polynomials exactly") {
  SUBCASE("interval") {
    for (Formulation f : {Formulation::modal, Formulation::nodal}) {
      const auto ref = build_reference_element(Shape::interval, 4, f);
      const Eigen::ArrayXd r = ref->volume.points.col(0).array();
      const Eigen::VectorXd p = project(*ref, (r.pow(4) - 2.0 * r.pow(3) + r).matrix());
      const Eigen::VectorXd dp = ref->Vq * (ref->Dr[0] * p);
      const Eigen::VectorXd exact = (4.0 * r.pow(3) - 6.0 * r.square() + 1.0).matrix();
      CHECK((dp - exact).norm() < 1e-11);
    }
  }
  SUBCASE("triangle") {
    const auto ref = build_reference_element(Shape::triangle, 3, Formulation::modal);
    const Eigen::ArrayXd r = ref->volume.points.col(0).array();
    const Eigen::ArrayXd s = ref->volume.points.col(1).array();
    const Eigen::VectorXd p = project(*ref, (r.square() * s + s.pow(3) - r).matrix());
    const Eigen::VectorXd dr = ref->Vq * (ref->Dr[0] * p);
    const Eigen::VectorXd ds = ref->Vq * (ref->Dr[1] * p);
    CHECK((dr - (2.0 * r * s - 1.0).matrix()).norm() < 1e-11);
    CHECK((ds - (r.square() + 3.0 * s.square()).matrix()).norm() < 1e-11);
  }
}

TEST_CASE("face interpolation and face rules") {
  const auto line = build_reference_element(Shape::interval, 3, Formulation::modal);
  REQUIRE(line->num_faces() == 2);
  Eigen::MatrixXd ends(2, 1);
  ends << -1.0, 1.0;
  const Eigen::MatrixXd V = line->eval_basis(ends);
  CHECK((line->Vf[0].row(0) - V.row(0)).norm() < 1e-13);
  CHECK((line->Vf[1].row(0) - V.row(1)).norm() < 1e-13);
  CHECK(reference_face_measure(Shape::interval) == 1.0);

  const auto tri = build_reference_element(Shape::triangle, 2, Formulation::modal);
  REQUIRE(tri->num_faces() == 3);
  for (int f = 0; f < 3; ++f) {
    CHECK(tri->faces[f].weights.sum() == doctest::Approx(2.0));
    // the constant mode is 1/sqrt(area) everywhere
    CHECK((tri->Vf[f].col(0).array() - 1.0 / std::sqrt(2.0)).abs().maxCoeff() < 1e-13);
  }
  CHECK(reference_face_measure(Shape::triangle) == 2.0);
}

TEST_CASE("lagrange basis interpolates its nodes") {
  Eigen::VectorXd nodes(4);
  nodes << -1.0, -0.3, 0.4, 1.0;
  const Eigen::MatrixXd L = poly::lagrange_basis(nodes, nodes);
  CHECK((L - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-14);
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(7, -1.0, 1.0);
  CHECK((poly::lagrange_basis(nodes, x).rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-13);
  CHECK(poly::lagrange_basis_grad(nodes, x).rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mode degrees and modal transfer") {
  const auto tri = build_reference_element(Shape::triangle, 3, Formulation::modal);
  REQUIRE(tri->mode_degree.size() == 10u);
  CHECK(tri->mode_degree.front() == 0);
  CHECK(tri->mode_degree.back() == 3);
  const auto nod = build_reference_element(Shape::interval, 3, Formulation::nodal);
  const auto mod = build_reference_element(Shape::interval, 3, Formulation::modal);
  // nodal values of the top Legendre mode transfer to a single modal coefficient
  const Eigen::VectorXd vals = nod->eval_basis(nod->volume.points).col(0);  // first Lagrange function
  const Eigen::VectorXd modal = nod->to_modal * Eigen::VectorXd::Unit(4, 0);
  const Eigen::VectorXd back = mod->eval_basis(nod->volume.points) * modal;
  CHECK((back - vals).norm() < 1e-12);
}
