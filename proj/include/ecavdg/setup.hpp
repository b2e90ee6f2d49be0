#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "ecavdg/config.hpp"
#include "ecavdg/discretization.hpp"

namespace ecavdg {

std::shared_ptr<const Mesh> build_mesh(const ExperimentConfig& cfg);
ViscosityOptions viscosity_options(const ExperimentConfig& cfg);

template <class Law>
Law make_law(const ExperimentConfig& cfg) {
  Law law;
  if constexpr (requires { law.gamma; }) law.gamma = cfg.gamma;
  return law;
}

template <class Law>
Discretization<Law> make_discretization(const ExperimentConfig& cfg) {
  const Shape shape = problem_dimension(cfg.problem) == 1 ? Shape::interval : Shape::triangle;
  return Discretization<Law>(make_law<Law>(cfg), build_reference_element(shape, cfg.N, cfg.formulation),
                             build_mesh(cfg), cfg.flux, viscosity_options(cfg));
}

template <class Law>
using StateFunction = std::function<typename Law::State(double, double)>;

/// Exact solution at time t (the initial condition at t = 0 for problems
/// without one).
template <class Law>
StateFunction<Law> solution_at(const ExperimentConfig& cfg, double t) {
  const Law law = make_law<Law>(cfg);
  using State = typename Law::State;
  if constexpr (Law::nvars == 1) {
    return [](double x, double y) { return State(burgers_gaussian(x, y)); };
  } else if constexpr (Law::dim == 1) {
    auto wrap = [law](Primitive1D p) {
      return law.from_primitive(p.rho, Eigen::Matrix<double, 1, 1>(p.u), p.p);
    };
    switch (cfg.problem) {
      case Problem::density_wave:
        return [=](double x, double) { return wrap(density_wave(x, t)); };
      case Problem::contact:
        return [=](double x, double) { return wrap(stationary_contact(x)); };
      case Problem::contact_smooth:
        return [=](double x, double) { return wrap(stationary_contact_smooth(x)); };
      default:
        return [=](double x, double) { return wrap(shu_osher(x)); };
    }
  } else {
    auto wrap = [law](Primitive2D p) {
      return law.from_primitive(p.rho, Eigen::Vector2d(p.u, p.v), p.p);
    };
    if (cfg.problem == Problem::vortex) {
      IsentropicVortex v{cfg.gamma, cfg.lower, cfg.upper};
      return [=](double x, double y) { return wrap(v(x, y, t)); };
    }
    const double g = cfg.gamma;
    return [=](double x, double y) { return wrap(shock_vortex(x, y, g)); };
  }
}

/// Calls f(Discretization<Law>&) with the conservation law of cfg.problem.
template <class F>
decltype(auto) dispatch(const ExperimentConfig& cfg, F&& f) {
  switch (cfg.problem) {
    case Problem::burgers2d: {
      auto d = make_discretization<Burgers<2>>(cfg);
      return f(d);
    }
    case Problem::vortex:
    case Problem::shock_vortex: {
      auto d = make_discretization<Euler<2>>(cfg);
      return f(d);
    }
    default: {
      auto d = make_discretization<Euler<1>>(cfg);
      return f(d);
    }
  }
}

}  // namespace ecavdg
