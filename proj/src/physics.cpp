#include "ecavdg/physics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ecavdg {

std::string_view to_string(FluxKind f) {
  switch (f) {
    case FluxKind::hllc: return "hllc";
    case FluxKind::lax_friedrichs: return "lax-friedrichs";
    case FluxKind::burgers_ec: return "burgers-ec";
  }
  return "?";
}

FluxKind parse_flux(std::string_view s) {
  if (s == "hllc") return FluxKind::hllc;
  if (s == "lax-friedrichs" || s == "lf") return FluxKind::lax_friedrichs;
  if (s == "burgers-ec" || s == "ec") return FluxKind::burgers_ec;
  throw std::invalid_argument("unknown flux '" + std::string(s) + "'");
}

namespace {

// Nearest periodic image of d on a period of length L (L <= 0: no wrapping).
double wrap(double d, double L) {
  if (L <= 0.0) return d;
  return d - L * std::round(d / L);
}

}  // namespace

Primitive2D IsentropicVortex::operator()(double x, double y, double t) const {
  const double g = gamma;
  const double c = 1.0 / g;
  const Eigen::Vector2d centre = 0.5 * (lower + upper);
  const double dx = wrap(x - centre.x() - c * t, upper.x() - lower.x());
  const double dy = wrap(y - centre.y() - c * t, upper.y() - lower.y());
  const double alpha = 5.0 * std::exp(0.5) / (2.0 * std::numbers::pi * std::sqrt(g));
  const double omega = alpha * std::exp(-0.5 * (dx * dx + dy * dy));
  const double dT = -(g - 1.0) / (2.0 * g) * omega * omega;
  const double rho = std::pow(1.0 + dT, 1.0 / (g - 1.0));
  return {rho, c - dy * omega, c + dx * omega, std::pow(rho, g)};
}

Primitive1D density_wave(double x, double t) {
  const double s = std::sin(std::numbers::pi * (x - 0.1 * t));
  return {1.0 + 0.5 * std::exp(-10.0 * s * s), 0.1, 10.0};
}

Primitive1D stationary_contact(double x) {
  return std::abs(x) < 0.3 ? Primitive1D{1.5, 0.0, 1.0} : Primitive1D{1.0, 0.0, 1.0};
}

Primitive1D stationary_contact_smooth(double x) {
  const double s = std::sin(2.0 * std::numbers::pi * x);
  if (std::abs(x) < 0.3) return {1.0 + 0.5 * (s + std::abs(x)), 0.0, 1.0};
  return {1.0 + 0.5 * s, 0.0, 1.0};
}

Primitive1D shu_osher(double x) {
  if (x < -4.0) return {3.857143, 2.629369, 10.3333};
  return {1.0 + 0.2 * std::sin(5.0 * x), 0.0, 1.0};
}

Primitive2D shock_vortex(double x, double y, double g) {
  const double Ms = 1.1;
  const double rhoL = 1.0, uL = std::sqrt(g), pL = 1.0;
  const double ratio = (2.0 + (g - 1.0) * Ms * Ms) / ((g + 1.0) * Ms * Ms);  // rho_L / rho_R
  const double rhoR = rhoL / ratio;
  const double uR = uL * ratio;
  const double pR = pL * (1.0 + 2.0 * g / (g + 1.0) * (Ms * Ms - 1.0));

  const double xc = 0.25, yc = 0.5, eps = 0.3, alpha = 0.204, rc = 0.05;
  const double dx = x - xc, dy = y - yc;
  const double r = std::hypot(dx, dy);
  const double tau = r / rc;
  const double theta = std::atan2(dy, dx);
  const double vtheta = eps * tau * std::exp(alpha * (1.0 - tau * tau));
  const double dT =
      -(g - 1.0) * eps * eps * std::exp(2.0 * alpha * (1.0 - tau * tau)) / (4.0 * alpha * g);
  const double TL = pL / rhoL;
  const double factor = (TL + dT) / TL;
  const double rho_scale = std::pow(factor, 1.0 / (g - 1.0));
  const double p_scale = std::pow(factor, g / (g - 1.0));
  const double du = vtheta * std::sin(theta);
  const double dv = -vtheta * std::cos(theta);
  if (x < 0.5) return {rhoL * rho_scale, uL + du, dv, pL * p_scale};
  return {rhoR * rho_scale, uR + du, dv, pR * p_scale};
}

double burgers_gaussian(double x, double y) { return std::exp(-25.0 * (x * x + y * y)); }

}  // namespace ecavdg
