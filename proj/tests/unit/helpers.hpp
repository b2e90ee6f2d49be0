#pragma once

#include <memory>
#include <random>

#include "ecavdg/discretization.hpp"
#include "ecavdg/mesh.hpp"
#include "ecavdg/physics.hpp"
#include "ecavdg/refelem.hpp"

namespace testing {

using namespace ecavdg;

inline std::shared_ptr<const Mesh> periodic_mesh(int dim, int cells, ViscousScheme s = ViscousScheme::ldg,
                                                 double a = 0.0, double b = 1.0) {
  Mesh m = dim == 1 ? uniform_interval_mesh(a, b, cells, BoundaryKind::periodic)
                    : uniform_triangle_mesh({a, a}, {b, b}, cells, cells, BoundaryKind::periodic,
                                            BoundaryKind::periodic);
  return std::make_shared<const Mesh>(assign_ldg_switches(std::move(m), default_switch_vector(dim), s));
}

template <int D>
typename Euler<D>::State random_euler_state(const Euler<D>& law, std::mt19937& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Eigen::Matrix<double, D, 1> vel;
  for (int m = 0; m < D; ++m) vel(m) = 2.0 * U(rng) - 1.0;
  return law.from_primitive(0.2 + 2.0 * U(rng), vel, 0.2 + 2.0 * U(rng));
}

/// Smooth admissible field with random Fourier-like content.
template <class Law>
SolutionField smooth_field(const Discretization<Law>& d, unsigned seed, double amp = 0.2) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double a = U(rng), b = U(rng), c = U(rng), ph = U(rng);
  using State = typename Law::State;
  return d.project([=, &d](double x, double y) {
    const double s = std::sin(2 * M_PI * x + ph) * std::cos(2 * M_PI * y * (Law::dim - 1) + a);
    if constexpr (Law::nvars == 1) {
      (void)d;
      return State(0.3 + amp * s + 0.1 * b);
    } else {
      Eigen::Matrix<double, Law::dim, 1> vel;
      for (int m = 0; m < Law::dim; ++m) vel(m) = 0.3 * c + amp * s * (m + 1);
      return d.law().from_primitive(1.0 + amp * s, vel, 1.0 + 0.5 * amp * std::cos(2 * M_PI * x));
    }
  });
}

}  // namespace testing
