#include "ecavdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace ecavdg {

std::string_view to_string(BoundaryKind b) { return b == BoundaryKind::periodic ? "periodic" : "wall"; }

BoundaryKind parse_boundary(std::string_view s) {
  if (s == "periodic") return BoundaryKind::periodic;
  if (s == "wall") return BoundaryKind::wall;
  throw std::invalid_argument("unknown boundary kind '" + std::string(s) + "'");
}

double Mesh::h_min() const {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& e : elements) h = std::min(h, e.diameter);
  return h;
}

double Mesh::h_max() const {
  double h = 0.0;
  for (const auto& e : elements) h = std::max(h, e.diameter);
  return h;
}

Mesh uniform_interval_mesh(double a, double b, int K, BoundaryKind boundary) {
  if (K < 2) throw std::invalid_argument("uniform_interval_mesh: K must be >= 2");
  if (!(a < b)) throw std::invalid_argument("uniform_interval_mesh: need a < b");
  Mesh mesh;
  mesh.dim = 1;
  mesh.shape = Shape::interval;
  mesh.lower = {a, 0.0};
  mesh.upper = {b, 0.0};
  mesh.boundary = {boundary, boundary};
  const double h = (b - a) / K;
  mesh.elements.resize(K);
  mesh.faces.assign(K, std::vector<FaceInfo>(2));
  for (int k = 0; k < K; ++k) {
    const double xl = a + k * h;
    const double xr = k == K - 1 ? b : a + (k + 1) * h;
    auto& e = mesh.elements[k];
    e.vertices = {{xl, 0.0}, {xr, 0.0}};
    e.origin = {0.5 * (xl + xr), 0.0};
    e.jacobian = Eigen::Matrix2d::Identity();
    e.jacobian(0, 0) = 0.5 * (xr - xl);
    e.inverse = e.jacobian.inverse();
    e.det = e.jacobian(0, 0);
    e.diameter = xr - xl;
    e.measure = xr - xl;

    FaceInfo& left = mesh.faces[k][0];
    FaceInfo& right = mesh.faces[k][1];
    left.normal = {-1.0, 0.0};
    right.normal = {1.0, 0.0};
    if (k > 0) {
      left.neighbor = k - 1;
      left.neighbor_face = 1;
    } else if (boundary == BoundaryKind::periodic) {
      left.neighbor = K - 1;
      left.neighbor_face = 1;
    } else {
      left.wall = true;
    }
    if (k < K - 1) {
      right.neighbor = k + 1;
      right.neighbor_face = 0;
    } else if (boundary == BoundaryKind::periodic) {
      right.neighbor = 0;
      right.neighbor_face = 0;
    } else {
      right.wall = true;
    }
  }
  return mesh;
}

Mesh uniform_triangle_mesh(const Eigen::Vector2d& lower, const Eigen::Vector2d& upper, int Kx,
                           int Ky, BoundaryKind x_boundary, BoundaryKind y_boundary,
                           bool flip_diagonal) {
  if (Kx < 2 || Ky < 2) throw std::invalid_argument("uniform_triangle_mesh: Kx, Ky must be >= 2");
  if (!(lower.x() < upper.x()) || !(lower.y() < upper.y())) {
    throw std::invalid_argument("uniform_triangle_mesh: degenerate rectangle");
  }
  Mesh mesh;
  mesh.dim = 2;
  mesh.shape = Shape::triangle;
  mesh.lower = lower;
  mesh.upper = upper;
  mesh.boundary = {x_boundary, y_boundary};
  const double dx = (upper.x() - lower.x()) / Kx;
  const double dy = (upper.y() - lower.y()) / Ky;
  auto vertex = [&](int i, int j) -> Eigen::Vector2d {
    const double x = i == Kx ? upper.x() : lower.x() + i * dx;
    const double y = j == Ky ? upper.y() : lower.y() + j * dy;
    return {x, y};
  };

  // Local vertices as grid indices; faces join local vertex f and f+1.
  std::vector<std::array<std::array<int, 2>, 3>> tri_idx;
  for (int j = 0; j < Ky; ++j) {
    for (int i = 0; i < Kx; ++i) {
      if (!flip_diagonal) {
        tri_idx.push_back({{{i, j}, {i + 1, j}, {i + 1, j + 1}}});
        tri_idx.push_back({{{i, j}, {i + 1, j + 1}, {i, j + 1}}});
      } else {
        tri_idx.push_back({{{i, j}, {i + 1, j}, {i, j + 1}}});
        tri_idx.push_back({{{i + 1, j}, {i + 1, j + 1}, {i, j + 1}}});
      }
    }
  }

  const int K = static_cast<int>(tri_idx.size());
  mesh.elements.resize(K);
  mesh.faces.assign(K, std::vector<FaceInfo>(3));
  // Edges are identified by their doubled midpoint index, wrapped on periodic
  // directions; this is unique on a structured grid.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;
  for (int k = 0; k < K; ++k) {
    auto& e = mesh.elements[k];
    const auto& t = tri_idx[k];
    e.vertices.clear();
    for (const auto& v : t) e.vertices.push_back(vertex(v[0], v[1]));
    const Eigen::Vector2d& v0 = e.vertices[0];
    const Eigen::Vector2d& v1 = e.vertices[1];
    const Eigen::Vector2d& v2 = e.vertices[2];
    e.jacobian.col(0) = 0.5 * (v1 - v0);
    e.jacobian.col(1) = 0.5 * (v2 - v0);
    e.origin = v0 + e.jacobian * Eigen::Vector2d(1.0, 1.0);
    e.det = e.jacobian.determinant();
    if (!(e.det > 0.0)) throw std::logic_error("uniform_triangle_mesh: non-positive Jacobian");
    e.inverse = e.jacobian.inverse();
    e.measure = 2.0 * e.det;
    e.diameter = std::max({(v1 - v0).norm(), (v2 - v1).norm(), (v0 - v2).norm()});

    for (int f = 0; f < 3; ++f) {
      const Eigen::Vector2d& a = e.vertices[f];
      const Eigen::Vector2d& b = e.vertices[(f + 1) % 3];
      const Eigen::Vector2d tangent = b - a;
      FaceInfo& fi = mesh.faces[k][f];
      fi.normal = Eigen::Vector2d(tangent.y(), -tangent.x()).normalized();
      fi.surface_jacobian = 0.5 * tangent.norm();

      int mx = t[f][0] + t[(f + 1) % 3][0];
      int my = t[f][1] + t[(f + 1) % 3][1];
      if (x_boundary == BoundaryKind::periodic) mx %= 2 * Kx;
      if (y_boundary == BoundaryKind::periodic) my %= 2 * Ky;
      edges[{mx, my}].push_back({k, f});
    }
  }
  for (const auto& [key, slots] : edges) {
    if (slots.size() == 2) {
      const auto [k0, f0] = slots[0];
      const auto [k1, f1] = slots[1];
      mesh.faces[k0][f0].neighbor = k1;
      mesh.faces[k0][f0].neighbor_face = f1;
      mesh.faces[k1][f1].neighbor = k0;
      mesh.faces[k1][f1].neighbor_face = f0;
    } else if (slots.size() == 1) {
      const auto [k0, f0] = slots[0];
      mesh.faces[k0][f0].wall = true;
    } else {
      throw std::logic_error("uniform_triangle_mesh: edge shared by more than two faces");
    }
  }
  return mesh;
}

Eigen::Vector2d default_switch_vector(int dim) {
  return dim == 1 ? Eigen::Vector2d(1.0, 0.0) : Eigen::Vector2d(2.0, 1.0);
}

Mesh assign_ldg_switches(Mesh mesh, const Eigen::Vector2d& v0, ViscousScheme scheme) {
  for (int k = 0; k < mesh.num_elements(); ++k) {
    bool has_outflow = false;
    for (auto& f : mesh.faces[k]) {
      if (scheme == ViscousScheme::br1) {
        f.beta = 0;
        continue;
      }
      const double s = mesh.dim == 1 ? v0.x() * f.normal.x() : v0.dot(f.normal);
      if (std::abs(s) < 1e-12) {
        throw std::invalid_argument(
            fmt::format("assign_ldg_switches: v0 orthogonal to a face normal on element {}", k));
      }
      f.beta = s > 0.0 ? 1 : -1;
      has_outflow = has_outflow || f.beta == 1;
    }
    if (scheme == ViscousScheme::ldg && !has_outflow) {
      throw std::invalid_argument(
          fmt::format("assign_ldg_switches: element {} has no face with beta = +1", k));
    }
  }
  return mesh;
}

void write_mesh_summary(std::ostream& os, const Mesh& mesh) {
  int hist[3] = {0, 0, 0};
  int walls = 0;
  for (const auto& fs : mesh.faces) {
    for (const auto& f : fs) {
      ++hist[f.beta + 1];
      walls += f.wall ? 1 : 0;
    }
  }
  os << fmt::format("dimension      {}\n", mesh.dim);
  os << fmt::format("elements       {}\n", mesh.num_elements());
  os << fmt::format("h_min          {:.17g}\n", mesh.h_min());
  os << fmt::format("h_max          {:.17g}\n", mesh.h_max());
  os << fmt::format("wall_faces     {}\n", walls);
  os << fmt::format("beta[-1]       {}\n", hist[0]);
  os << fmt::format("beta[0]        {}\n", hist[1]);
  os << fmt::format("beta[+1]       {}\n", hist[2]);
}

}  // namespace ecavdg
