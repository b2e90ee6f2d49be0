#include "ecavdg/viscosity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ecavdg {

std::string_view to_string(ViscosityMode m) {
  switch (m) {
    case ViscosityMode::none: return "none";
    case ViscosityMode::ecav: return "ecav";
    case ViscosityMode::shock_capturing: return "sc";
  }
  return "?";
}

std::string_view to_string(RegularizationMode r) {
  return r == RegularizationMode::ulp ? "ulp" : "absolute";
}

RegularizationMode parse_regularization(std::string_view s) {
  if (s == "absolute" || s == "abs") return RegularizationMode::absolute;
  if (s == "ulp" || s == "eps") return RegularizationMode::ulp;
  throw std::invalid_argument("unknown regularization '" + std::string(s) + "'");
}

double ecav_coefficient(double delta_k, double b, RegularizationMode mode, double delta) {
  const double a = std::max(0.0, -delta_k);
  if (a == 0.0 || b <= 0.0) return 0.0;
  const double reg = mode == RegularizationMode::ulp
                         ? std::nextafter(b, std::numeric_limits<double>::infinity()) - b
                         : delta;
  return a * b / (b * b + reg);
}

}  // namespace ecavdg
