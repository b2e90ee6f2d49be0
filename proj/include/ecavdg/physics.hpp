#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "ecavdg/errors.hpp"

namespace ecavdg {

using Normal = Eigen::Vector2d;

enum class FluxKind { hllc, lax_friedrichs, burgers_ec };

std::string_view to_string(FluxKind f);
FluxKind parse_flux(std::string_view s);

/// Scalar Burgers equation with f_m(u) = u^2/2 in every direction,
/// entropy S = u^2/2 and potentials psi_m = u^3/6.
template <int D>
struct Burgers {
  static constexpr int dim = D;
  static constexpr int nvars = 1;
  using State = Eigen::Matrix<double, 1, 1>;
  using Jacobian = Eigen::Matrix<double, 1, 1>;

  static constexpr std::string_view name() { return D == 1 ? "burgers1d" : "burgers2d"; }

  bool admissible(const State& u) const { return std::isfinite(u(0)); }

  State flux(const State& u, int /*m*/) const { return State(0.5 * u(0) * u(0)); }

  State normal_flux(const State& u, const Normal& n) const {
    return State(0.5 * u(0) * u(0) * direction_sum(n));
  }

  double entropy(const State& u) const { return 0.5 * u(0) * u(0); }
  State entropy_variables(const State& u) const { return u; }
  State conservative_variables(const State& v) const { return v; }
  double potential(const State& u, int /*m*/) const { return u(0) * u(0) * u(0) / 6.0; }
  Jacobian dudv(const State& /*u*/) const { return Jacobian::Identity(); }

  double max_wave_speed(const State& u, const Normal& n) const {
    return std::abs(u(0) * direction_sum(n));
  }

  static double direction_sum(const Normal& n) { return D == 1 ? n.x() : n.x() + n.y(); }
};

/// Compressible Euler equations for an ideal gas, conserved variables
/// (rho, rho u_1, ..., rho u_D, E).
///
/// Entropy S = -rho s with s = log(p / rho^gamma). With this scaling the
/// entropy variables are v = (gamma - s - rho|u|^2/(2 rho e), rho u/(rho e),
/// -rho/(rho e)), the potentials are psi_m = (gamma-1) rho u_m and du/dv is
/// the Barth matrix divided by (gamma-1).
template <int D>
struct Euler {
  static constexpr int dim = D;
  static constexpr int nvars = D + 2;
  using State = Eigen::Matrix<double, D + 2, 1>;
  using Jacobian = Eigen::Matrix<double, D + 2, D + 2>;

  double gamma = 1.4;

  static constexpr std::string_view name() { return D == 1 ? "euler1d" : "euler2d"; }

  double kinetic(const State& u) const {
    return 0.5 * u.template segment<D>(1).squaredNorm() / u(0);
  }
  double internal_energy(const State& u) const { return u(D + 1) - kinetic(u); }
  double pressure(const State& u) const { return (gamma - 1.0) * internal_energy(u); }

  bool admissible(const State& u) const {
    return u.allFinite() && u(0) > 0.0 && internal_energy(u) > 0.0;
  }

  void require_admissible(const State& u) const {
    if (!admissible(u)) {
      throw AdmissibilityError(fmt::format("inadmissible Euler state (rho = {:.6g}, rho e = {:.6g})",
                                           u(0), internal_energy(u)));
    }
  }

  State from_primitive(double rho, const Eigen::Matrix<double, D, 1>& vel, double p) const {
    State u;
    u(0) = rho;
    u.template segment<D>(1) = rho * vel;
    u(D + 1) = p / (gamma - 1.0) + 0.5 * rho * vel.squaredNorm();
    return u;
  }

  State flux(const State& u, int m) const {
    const double rho = u(0);
    const double um = u(1 + m) / rho;
    const double p = pressure(u);
    State f = um * u;
    f(1 + m) += p;
    f(D + 1) += um * p;
    return f;
  }

  State normal_flux(const State& u, const Normal& n) const {
    const double rho = u(0);
    double un = 0.0;
    for (int m = 0; m < D; ++m) un += u(1 + m) / rho * n(m);
    const double p = pressure(u);
    State f = un * u;
    for (int m = 0; m < D; ++m) f(1 + m) += p * n(m);
    f(D + 1) += un * p;
    return f;
  }

  double physical_entropy(const State& u) const {
    return std::log(pressure(u)) - gamma * std::log(u(0));
  }

  double entropy(const State& u) const {
    require_admissible(u);
    return -u(0) * physical_entropy(u);
  }

  State entropy_variables(const State& u) const {
    require_admissible(u);
    const double rhoe = internal_energy(u);
    const double s = physical_entropy(u);
    State v;
    v(0) = gamma - s - kinetic(u) / rhoe;
    v.template segment<D>(1) = u.template segment<D>(1) / rhoe;
    v(D + 1) = -u(0) / rhoe;
    return v;
  }

  State conservative_variables(const State& v) const {
    const double v_last = v(D + 1);
    if (!(v_last < 0.0) || !v.allFinite()) {
      throw AdmissibilityError(
          fmt::format("entropy variables outside the admissible set (v_last = {:.6g})", v_last));
    }
    const double vm2 = v.template segment<D>(1).squaredNorm();
    const double s = gamma - v(0) + vm2 / (2.0 * v_last);
    const double rhoe =
        std::pow((gamma - 1.0) / (std::pow(-v_last, gamma) * std::exp(s)), 1.0 / (gamma - 1.0));
    State u;
    u(0) = -rhoe * v_last;
    u.template segment<D>(1) = rhoe * v.template segment<D>(1);
    u(D + 1) = rhoe * (1.0 - vm2 / (2.0 * v_last));
    return u;
  }

  double potential(const State& u, int m) const { return (gamma - 1.0) * u(1 + m); }

  Jacobian dudv(const State& u) const {
    require_admissible(u);
    const double rho = u(0);
    const double p = pressure(u);
    const double E = u(D + 1);
    const Eigen::Matrix<double, D, 1> vel = u.template segment<D>(1) / rho;
    const double a2 = gamma * p / rho;
    const double H = a2 / (gamma - 1.0) + 0.5 * vel.squaredNorm();
    Jacobian A;
    A(0, 0) = rho;
    for (int i = 0; i < D; ++i) {
      A(0, 1 + i) = A(1 + i, 0) = rho * vel(i);
      for (int j = 0; j < D; ++j) A(1 + i, 1 + j) = rho * vel(i) * vel(j) + (i == j ? p : 0.0);
      A(1 + i, D + 1) = A(D + 1, 1 + i) = vel(i) * (E + p);
    }
    A(0, D + 1) = A(D + 1, 0) = E;
    A(D + 1, D + 1) = rho * H * H - a2 * p / (gamma - 1.0);
    return A / (gamma - 1.0);
  }

  double sound_speed(const State& u) const { return std::sqrt(gamma * pressure(u) / u(0)); }

  double max_wave_speed(const State& u, const Normal& n) const {
    double un = 0.0;
    for (int m = 0; m < D; ++m) un += u(1 + m) / u(0) * n(m);
    return std::abs(un) + sound_speed(u);
  }

  /// Slip-wall ghost state: normal momentum reversed, density and pressure kept.
  State mirror(const State& u, const Normal& n) const {
    State g = u;
    double mn = 0.0;
    for (int m = 0; m < D; ++m) mn += u(1 + m) * n(m);
    for (int m = 0; m < D; ++m) g(1 + m) -= 2.0 * mn * n(m);
    return g;
  }
};

/// HLLC flux with Batten-style (Roe-average) wave-speed estimates.
template <int D>
typename Euler<D>::State hllc_flux(const Euler<D>& law, const typename Euler<D>::State& uL,
                                   const typename Euler<D>::State& uR, const Normal& n) {
  using State = typename Euler<D>::State;
  const double g = law.gamma;
  const double rhoL = uL(0), rhoR = uR(0);
  Eigen::Matrix<double, D, 1> velL = uL.template segment<D>(1) / rhoL;
  Eigen::Matrix<double, D, 1> velR = uR.template segment<D>(1) / rhoR;
  Eigen::Matrix<double, D, 1> nn = n.template head<D>();
  const double unL = velL.dot(nn), unR = velR.dot(nn);
  const double pL = law.pressure(uL), pR = law.pressure(uR);
  const double aL = std::sqrt(g * pL / rhoL), aR = std::sqrt(g * pR / rhoR);
  const double HL = (uL(D + 1) + pL) / rhoL, HR = (uR(D + 1) + pR) / rhoR;

  const double sqL = std::sqrt(rhoL), sqR = std::sqrt(rhoR);
  const Eigen::Matrix<double, D, 1> velRoe = (sqL * velL + sqR * velR) / (sqL + sqR);
  const double HRoe = (sqL * HL + sqR * HR) / (sqL + sqR);
  const double aRoe = std::sqrt(std::max((g - 1.0) * (HRoe - 0.5 * velRoe.squaredNorm()), 0.0));
  const double unRoe = velRoe.dot(nn);

  const double SL = std::min(unL - aL, unRoe - aRoe);
  const double SR = std::max(unR + aR, unRoe + aRoe);
  const State fL = law.normal_flux(uL, n);
  const State fR = law.normal_flux(uR, n);
  if (SL >= 0.0) return fL;
  if (SR <= 0.0) return fR;

  const double SM = (rhoR * unR * (SR - unR) - rhoL * unL * (SL - unL) + pL - pR) /
                    (rhoR * (SR - unR) - rhoL * (SL - unL));
  auto star = [&](const State& u, double rho, double un, double p, double S) {
    const double pstar = rho * (un - S) * (un - SM) + p;
    const double denom = S - SM;
    State us;
    us(0) = rho * (S - un) / denom;
    for (int m = 0; m < D; ++m) us(1 + m) = ((S - un) * u(1 + m) + (pstar - p) * nn(m)) / denom;
    us(D + 1) = ((S - un) * u(D + 1) - p * un + pstar * SM) / denom;
    return us;
  };
  if (SM >= 0.0) return fL + SL * (star(uL, rhoL, unL, pL, SL) - uL);
  return fR + SR * (star(uR, rhoR, unR, pR, SR) - uR);
}

template <class Law>
typename Law::State lax_friedrichs_flux(const Law& law, const typename Law::State& uL,
                                        const typename Law::State& uR, const Normal& n) {
  const double lambda = std::max(law.max_wave_speed(uL, n), law.max_wave_speed(uR, n));
  return 0.5 * (law.normal_flux(uL, n) + law.normal_flux(uR, n)) - 0.5 * lambda * (uR - uL);
}

/// Entropy-conservative Burgers flux (1/6)(uR^2 + uL uR + uL^2) * sum_m n_m.
template <int D>
typename Burgers<D>::State burgers_ec_flux(const typename Burgers<D>::State& uL,
                                           const typename Burgers<D>::State& uR, const Normal& n) {
  const double a = uL(0), b = uR(0);
  return typename Burgers<D>::State((b * b + a * b + a * a) / 6.0 * Burgers<D>::direction_sum(n));
}

/// Dispatches a numerical flux by kind; throws std::invalid_argument for
/// combinations that are not defined (e.g. HLLC for Burgers).
template <class Law>
typename Law::State numerical_flux(const Law& law, FluxKind kind, const typename Law::State& uL,
                                   const typename Law::State& uR, const Normal& n) {
  if (kind == FluxKind::lax_friedrichs) return lax_friedrichs_flux(law, uL, uR, n);
  if constexpr (requires { law.gamma; }) {
    if (kind == FluxKind::hllc) return hllc_flux<Law::dim>(law, uL, uR, n);
  } else {
    if (kind == FluxKind::burgers_ec) return burgers_ec_flux<Law::dim>(uL, uR, n);
  }
  throw std::invalid_argument(fmt::format("flux '{}' is not defined for {}", to_string(kind),
                                          Law::name()));
}

template <class Law>
void check_flux_supported(FluxKind kind) {
  if (kind == FluxKind::lax_friedrichs) return;
  constexpr bool is_euler = requires(Law l) { l.gamma; };
  if ((is_euler && kind == FluxKind::hllc) || (!is_euler && kind == FluxKind::burgers_ec)) return;
  throw std::invalid_argument(fmt::format("flux '{}' is not defined for {}", to_string(kind),
                                          Law::name()));
}

// ---------------------------------------------------------------------------
// Initial conditions and exact solutions (primitive variables).

struct Primitive1D {
  double rho, u, p;
};

struct Primitive2D {
  double rho, u, v, p;
};

/// Translating isentropic vortex. Mean flow rho = p = 1, u = v = 1/gamma;
/// tangential velocity r*Omega with Omega = alpha exp(-r^2/2) and alpha =
/// 5 exp(1/2) / (2 pi sqrt(gamma)); the temperature deficit is the one that
/// keeps the vortex in radial equilibrium, so the exact solution is a pure
/// translation. `period` wraps the vortex centre on a periodic box
/// (sum over the nearest images).
struct IsentropicVortex {
  double gamma = 1.4;
  Eigen::Vector2d lower{-5.0, -5.0};
  Eigen::Vector2d upper{5.0, 5.0};

  Primitive2D operator()(double x, double y, double t) const;
};

/// rho = 1 + 0.5 exp(-10 sin(pi x)^2) advected at u = 0.1 with p = 10.
Primitive1D density_wave(double x, double t);

/// Piecewise-constant stationary contact: (1.5,0,1) for |x| < 0.3, else (1,0,1).
Primitive1D stationary_contact(double x);
/// Piecewise-smooth stationary contact variant.
Primitive1D stationary_contact_smooth(double x);

Primitive1D shu_osher(double x);

/// Mach-1.1 stationary shock at x = 0.5 with a vortex at (0.25, 0.5).
Primitive2D shock_vortex(double x, double y, double gamma = 1.4);

double burgers_gaussian(double x, double y);

}  // namespace ecavdg
