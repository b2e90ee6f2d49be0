#pragma once

#include <string_view>

#include "ecavdg/mesh.hpp"
#include "ecavdg/shockcap.hpp"

namespace ecavdg {

/// How the per-element viscosity coefficient is chosen.
enum class ViscosityMode { none, ecav, shock_capturing };

/// Regularisation of the ECAV denominator b^2 + delta: a fixed constant, or
/// the spacing of doubles at b (eps(b) = nextafter(b, inf) - b).
enum class RegularizationMode { absolute, ulp };

struct ViscosityOptions {
  ViscosityMode mode = ViscosityMode::none;
  RegularizationMode regularization = RegularizationMode::absolute;
  double delta = 1e-14;
  /// Shock-capturing ramp; eps0 <= 0 means h/(2N) per element.
  double sc_s0 = 0.0;
  double sc_kappa = 0.0;
  double sc_eps0 = 0.0;
  bool sc_defaults = true;
};

std::string_view to_string(ViscosityMode m);
std::string_view to_string(RegularizationMode r);
RegularizationMode parse_regularization(std::string_view s);

/// Entropy-correction coefficient a b / (b^2 + delta) with a = max(0, -delta_k).
/// Never negative.
double ecav_coefficient(double delta_k, double b, RegularizationMode mode, double delta = 1e-14);

}  // namespace ecavdg
