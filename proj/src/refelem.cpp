#include "ecavdg/refelem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace ecavdg {

std::string_view to_string(Shape s) { return s == Shape::interval ? "interval" : "triangle"; }

std::string_view to_string(Formulation f) { return f == Formulation::modal ? "modal" : "nodal"; }

Formulation parse_formulation(std::string_view s) {
  if (s == "modal") return Formulation::modal;
  if (s == "nodal") return Formulation::nodal;
  throw std::invalid_argument("unknown formulation '" + std::string(s) + "'");
}

namespace quadrature {

QuadratureRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be >= 1");
  const double ab = alpha + beta;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double h = 2.0 * i + ab;
    if (i == 0 && std::abs(ab) < 1e-14) {
      J(0, 0) = (beta - alpha) / (ab + 2.0);
    } else {
      J(i, i) = (beta * beta - alpha * alpha) / (h * (h + 2.0));
    }
    if (i > 0) {
      const double k = i;
      const double b = 2.0 / h *
                       std::sqrt(k * (k + ab) * (k + alpha) * (k + beta) / ((h - 1.0) * (h + 1.0)));
      J(i, i - 1) = J(i - 1, i) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                     std::tgamma(ab + 2.0);
  QuadratureRule q;
  q.points = eig.eigenvalues();
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    q.weights(i) = mu0 * v0 * v0;
  }
  return q;
}

QuadratureRule gauss_legendre(int n) {
  QuadratureRule q = gauss_jacobi(n, 0.0, 0.0);
  // Newton polish on the nodes and closed-form weights.
  for (int i = 0; i < n; ++i) {
    double x = q.points(i, 0);
    for (int it = 0; it < 3; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 0 ? 1.0 : p1;
      const double pnm1 = p0;
      const double dp = n * (x * pn - pnm1) / (x * x - 1.0);
      x -= pn / dp;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    q.points(i, 0) = x;
    q.weights(i) = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n == 1) {
    q.points(0, 0) = 0.0;
    q.weights(0) = 2.0;
  }
  return q;
}

QuadratureRule gauss_lobatto(int n) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto: n must be >= 2");
  const int N = n - 1;
  QuadratureRule q;
  q.points.resize(n, 1);
  q.weights.resize(n);
  q.points(0, 0) = -1.0;
  q.points(N, 0) = 1.0;
  if (N > 1) {
    const QuadratureRule inner = gauss_jacobi(N - 1, 1.0, 1.0);
    for (int i = 0; i < N - 1; ++i) q.points(i + 1, 0) = inner.points(i, 0);
  }
  for (int i = 0; i < n; ++i) {
    const double x = q.points(i, 0);
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= N; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double pN = N == 0 ? 1.0 : p1;
    q.weights(i) = 2.0 / (N * (N + 1.0) * pN * pN);
  }
  return q;
}

QuadratureRule collapsed_triangle(int n) {
  const QuadratureRule qa = gauss_legendre(n);
  const QuadratureRule qb = gauss_jacobi(n, 1.0, 0.0);
  QuadratureRule q;
  q.points.resize(n * n, 2);
  q.weights.resize(n * n);
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = qa.points(i, 0);
      const double b = qb.points(j, 0);
      q.points(idx, 0) = 0.5 * (1.0 + a) * (1.0 - b) - 1.0;
      q.points(idx, 1) = b;
      q.weights(idx) = 0.5 * qa.weights(i) * qb.weights(j);
      ++idx;
    }
  }
  return q;
}

}  // namespace quadrature

namespace poly {

namespace {

std::vector<Eigen::VectorXd> jacobi_all(const Eigen::VectorXd& x, double a, double b, int n) {
  std::vector<Eigen::VectorXd> P;
  const double g0 = std::pow(2.0, a + b + 1.0) / (a + b + 1.0) * std::tgamma(a + 1.0) *
                    std::tgamma(b + 1.0) / std::tgamma(a + b + 1.0);
  P.push_back(Eigen::VectorXd::Constant(x.size(), 1.0 / std::sqrt(g0)));
  if (n == 0) return P;
  const double g1 = (a + 1.0) * (b + 1.0) / (a + b + 3.0) * g0;
  P.push_back((((a + b + 2.0) * x.array() / 2.0) + (a - b) / 2.0).matrix() / std::sqrt(g1));
  double aold = 2.0 / (2.0 + a + b) * std::sqrt((a + 1.0) * (b + 1.0) / (a + b + 3.0));
  for (int i = 1; i < n; ++i) {
    const double h1 = 2.0 * i + a + b;
    const double anew = 2.0 / (h1 + 2.0) *
                        std::sqrt((i + 1.0) * (i + 1.0 + a + b) * (i + 1.0 + a) * (i + 1.0 + b) /
                                  (h1 + 1.0) / (h1 + 3.0));
    const double bnew = -(a * a - b * b) / h1 / (h1 + 2.0);
    Eigen::VectorXd next =
        (-aold * P[i - 1].array() + (x.array() - bnew) * P[i].array()) / anew;
    P.push_back(std::move(next));
    aold = anew;
  }
  return P;
}

}  // namespace

Eigen::VectorXd jacobi(const Eigen::VectorXd& x, double alpha, double beta, int n) {
  return jacobi_all(x, alpha, beta, n)[n];
}

Eigen::VectorXd grad_jacobi(const Eigen::VectorXd& x, double alpha, double beta, int n) {
  if (n == 0) return Eigen::VectorXd::Zero(x.size());
  return std::sqrt(n * (n + alpha + beta + 1.0)) * jacobi(x, alpha + 1.0, beta + 1.0, n - 1);
}

Eigen::MatrixXd legendre_basis(const Eigen::VectorXd& x, int N) {
  const auto P = jacobi_all(x, 0.0, 0.0, N);
  Eigen::MatrixXd V(x.size(), N + 1);
  for (int j = 0; j <= N; ++j) V.col(j) = P[j];
  return V;
}

Eigen::MatrixXd legendre_basis_grad(const Eigen::VectorXd& x, int N) {
  Eigen::MatrixXd V(x.size(), N + 1);
  for (int j = 0; j <= N; ++j) V.col(j) = grad_jacobi(x, 0.0, 0.0, j);
  return V;
}

namespace {

void rs_to_ab(const Eigen::MatrixXd& rs, Eigen::VectorXd& a, Eigen::VectorXd& b) {
  const Eigen::Index n = rs.rows();
  a.resize(n);
  b.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = rs(i, 0), s = rs(i, 1);
    a(i) = std::abs(s - 1.0) > 1e-14 ? 2.0 * (1.0 + r) / (1.0 - s) - 1.0 : -1.0;
    b(i) = s;
  }
}

}  // namespace

Eigen::MatrixXd dubiner_basis(const Eigen::MatrixXd& rs, int N) {
  Eigen::VectorXd a, b;
  rs_to_ab(rs, a, b);
  const int Np = (N + 1) * (N + 2) / 2;
  Eigen::MatrixXd V(rs.rows(), Np);
  int col = 0;
  for (int deg = 0; deg <= N; ++deg) {
    for (int i = deg; i >= 0; --i) {
      const int j = deg - i;
      const Eigen::VectorXd h1 = jacobi(a, 0.0, 0.0, i);
      const Eigen::VectorXd h2 = jacobi(b, 2.0 * i + 1.0, 0.0, j);
      V.col(col++) = std::sqrt(2.0) * h1.array() * h2.array() * (1.0 - b.array()).pow(i);
    }
  }
  return V;
}

Eigen::MatrixXd dubiner_basis_grad(const Eigen::MatrixXd& rs, int N, int dir) {
  Eigen::VectorXd a, b;
  rs_to_ab(rs, a, b);
  const int Np = (N + 1) * (N + 2) / 2;
  Eigen::MatrixXd V(rs.rows(), Np);
  const Eigen::ArrayXd half_1mb = 0.5 * (1.0 - b.array());
  int col = 0;
  for (int deg = 0; deg <= N; ++deg) {
    for (int i = deg; i >= 0; --i) {
      const int j = deg - i;
      const Eigen::ArrayXd fa = jacobi(a, 0.0, 0.0, i).array();
      const Eigen::ArrayXd dfa = grad_jacobi(a, 0.0, 0.0, i).array();
      const Eigen::ArrayXd gb = jacobi(b, 2.0 * i + 1.0, 0.0, j).array();
      const Eigen::ArrayXd dgb = grad_jacobi(b, 2.0 * i + 1.0, 0.0, j).array();
      Eigen::ArrayXd d;
      if (dir == 0) {
        d = dfa * gb;
        if (i > 0) d *= half_1mb.pow(i - 1);
      } else {
        d = dfa * (gb * (0.5 * (1.0 + a.array())));
        if (i > 0) d *= half_1mb.pow(i - 1);
        Eigen::ArrayXd tmp = dgb * half_1mb.pow(i);
        if (i > 0) tmp -= 0.5 * i * gb * half_1mb.pow(i - 1);
        d += fa * tmp;
      }
      V.col(col++) = std::pow(2.0, i + 0.5) * d;
    }
  }
  return V;
}

Eigen::MatrixXd lagrange_basis(const Eigen::VectorXd& nodes, const Eigen::VectorXd& x) {
  const Eigen::Index n = nodes.size();
  Eigen::MatrixXd L(x.size(), n);
  for (Eigen::Index q = 0; q < x.size(); ++q) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double v = 1.0;
      for (Eigen::Index m = 0; m < n; ++m) {
        if (m != j) v *= (x(q) - nodes(m)) / (nodes(j) - nodes(m));
      }
      L(q, j) = v;
    }
  }
  return L;
}

Eigen::MatrixXd lagrange_basis_grad(const Eigen::VectorXd& nodes, const Eigen::VectorXd& x) {
  const Eigen::Index n = nodes.size();
  Eigen::MatrixXd D(x.size(), n);
  for (Eigen::Index q = 0; q < x.size(); ++q) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double sum = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == j) continue;
        double prod = 1.0 / (nodes(j) - nodes(k));
        for (Eigen::Index m = 0; m < n; ++m) {
          if (m != j && m != k) prod *= (x(q) - nodes(m)) / (nodes(j) - nodes(m));
        }
        sum += prod;
      }
      D(q, j) = sum;
    }
  }
  return D;
}

}  // namespace poly

double reference_face_measure(Shape shape) { return shape == Shape::interval ? 1.0 : 2.0; }

Eigen::MatrixXd ReferenceElement::eval_basis(const Eigen::MatrixXd& points) const {
  if (shape == Shape::triangle) return poly::dubiner_basis(points, degree);
  const Eigen::VectorXd x = points.col(0);
  if (formulation == Formulation::modal) return poly::legendre_basis(x, degree);
  return poly::lagrange_basis(volume.points.col(0), x);
}

Eigen::MatrixXd ReferenceElement::eval_basis_grad(const Eigen::MatrixXd& points, int dir) const {
  if (shape == Shape::triangle) return poly::dubiner_basis_grad(points, degree, dir);
  const Eigen::VectorXd x = points.col(0);
  if (formulation == Formulation::modal) return poly::legendre_basis_grad(x, degree);
  return poly::lagrange_basis_grad(volume.points.col(0), x);
}

RefElemPtr build_reference_element(Shape shape, int N, Formulation formulation) {
  if (N < 0) throw std::invalid_argument("polynomial degree must be >= 0");
  if (formulation == Formulation::nodal && shape != Shape::interval) {
    throw std::invalid_argument("nodal formulation is only supported on the interval");
  }
  if (formulation == Formulation::nodal && N < 1) {
    throw std::invalid_argument("nodal formulation requires N >= 1");
  }

  auto ref = std::make_shared<ReferenceElement>();
  ref->shape = shape;
  ref->degree = N;
  ref->formulation = formulation;
  ref->dim = shape == Shape::interval ? 1 : 2;
  ref->num_modes = shape == Shape::interval ? N + 1 : (N + 1) * (N + 2) / 2;

  if (shape == Shape::interval) {
    ref->volume = formulation == Formulation::modal ? quadrature::gauss_legendre(N + 2)
                                                    : quadrature::gauss_lobatto(N + 1);
    for (double x : {-1.0, 1.0}) {
      QuadratureRule f;
      f.points = Eigen::MatrixXd::Constant(1, 1, x);
      f.weights = Eigen::VectorXd::Ones(1);
      ref->faces.push_back(f);
    }
  } else {
    ref->volume = quadrature::collapsed_triangle(N + 1);
    const QuadratureRule edge = quadrature::gauss_legendre(N + 2);
    const double vx[3] = {-1.0, 1.0, -1.0};
    const double vy[3] = {-1.0, -1.0, 1.0};
    for (int f = 0; f < 3; ++f) {
      const int a = f, b = (f + 1) % 3;
      QuadratureRule fq;
      fq.points.resize(edge.size(), 2);
      fq.weights = edge.weights;
      for (int q = 0; q < edge.size(); ++q) {
        const double t = edge.points(q, 0);
        fq.points(q, 0) = 0.5 * (1.0 - t) * vx[a] + 0.5 * (1.0 + t) * vx[b];
        fq.points(q, 1) = 0.5 * (1.0 - t) * vy[a] + 0.5 * (1.0 + t) * vy[b];
      }
      ref->faces.push_back(fq);
    }
  }

  const Eigen::MatrixXd& pts = ref->volume.points;
  ref->Vq = ref->eval_basis(pts);
  for (int d = 0; d < ref->dim; ++d) ref->Vr.push_back(ref->eval_basis_grad(pts, d));
  const Eigen::MatrixXd W = ref->volume.weights.asDiagonal();
  ref->M = ref->Vq.transpose() * W * ref->Vq;
  ref->Minv = ref->M.inverse();
  ref->Pq = ref->Minv * ref->Vq.transpose() * W;
  for (int d = 0; d < ref->dim; ++d) ref->Dr.push_back(ref->Pq * ref->Vr[d]);
  for (const auto& f : ref->faces) ref->Vf.push_back(ref->eval_basis(f.points));

  // Orthonormal modal description used by the smoothness indicator.
  if (shape == Shape::interval) {
    for (int j = 0; j <= N; ++j) ref->mode_degree.push_back(j);
    if (formulation == Formulation::modal) {
      ref->to_modal = Eigen::MatrixXd::Identity(N + 1, N + 1);
    } else {
      ref->to_modal = poly::legendre_basis(pts.col(0), N).inverse();
    }
  } else {
    for (int deg = 0; deg <= N; ++deg)
      for (int i = 0; i <= deg; ++i) ref->mode_degree.push_back(deg);
    ref->to_modal = Eigen::MatrixXd::Identity(ref->num_modes, ref->num_modes);
  }
  return ref;
}

Eigen::MatrixXd project(const ReferenceElement& ref, const Eigen::MatrixXd& point_values) {
  if (point_values.rows() != ref.num_volume_points()) {
    throw std::invalid_argument("project: expected " + std::to_string(ref.num_volume_points()) +
                                " point values, got " + std::to_string(point_values.rows()));
  }
  return ref.Pq * point_values;
}

double integrate(const ReferenceElement& ref, const Eigen::VectorXd& point_values) {
  if (point_values.size() != ref.num_volume_points()) {
    throw std::invalid_argument("integrate: expected " + std::to_string(ref.num_volume_points()) +
                                " point values, got " + std::to_string(point_values.size()));
  }
  return ref.volume.weights.dot(point_values);
}

}  // namespace ecavdg
