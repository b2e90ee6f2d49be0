#pragma once

#include <stdexcept>
#include <string>

namespace ecavdg {

/// A state left the admissible set (rho <= 0 or rho*e <= 0 for Euler).
/// `element` and `point` are -1 when the failing call was not made from
/// inside an element loop.
class AdmissibilityError : public std::runtime_error {
 public:
  AdmissibilityError(const std::string& what, int element = -1, int point = -1)
      : std::runtime_error(what), element_(element), point_(point) {}

  int element() const { return element_; }
  int point() const { return point_; }

 private:
  int element_;
  int point_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the time integrator when the step size falls below dt_min or
/// the state becomes non-finite.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ecavdg
