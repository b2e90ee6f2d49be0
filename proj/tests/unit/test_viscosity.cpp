#include <doctest.h>

#include <cmath>
#include <vector>

#include "ecavdg/shockcap.hpp"
#include "ecavdg/viscosity.hpp"

using namespace ecavdg;

TEST_CASE("ecav coefficient") {
  // a b / (b^2 + delta) with a = max(0, -delta_k)
  CHECK(ecav_coefficient(-2.0, 4.0, RegularizationMode::absolute, 1.0) == doctest::Approx(8.0 / 17.0));
  CHECK(ecav_coefficient(-1e-3, 1e-2, RegularizationMode::absolute, 1e-14) ==
        doctest::Approx(1e-5 / (1e-4 + 1e-14)));
  CHECK(ecav_coefficient(0.5, 1.0, RegularizationMode::absolute) == 0.0);
  CHECK(ecav_coefficient(0.0, 1.0, RegularizationMode::absolute) == 0.0);
  CHECK(ecav_coefficient(-1.0, 0.0, RegularizationMode::absolute) == 0.0);
  // ulp regularisation: denominator b^2 + (nextafter(b) - b)
  const double b = 3.0;
  const double ulp = std::nextafter(b, 10.0) - b;
  CHECK(ecav_coefficient(-6.0, b, RegularizationMode::ulp) == doctest::Approx(18.0 / (9.0 + ulp)));
  // with exact dissipation eps b = a whenever b^2 dominates the regulariser
  const double e = ecav_coefficient(-0.25, 2.0, RegularizationMode::absolute, 1e-14);
  CHECK(e * 2.0 == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(parse_regularization("eps") == RegularizationMode::ulp);
  CHECK_THROWS(parse_regularization("relative"));
}

TEST_CASE("smoothness indicator") {
  const std::vector<int> deg{0, 1, 2, 3};
  const std::vector<double> top{0.0, 0.0, 0.0, 1.0};
  CHECK(shockcap::smoothness_indicator(top, deg) == doctest::Approx(1.0));
  const std::vector<double> constant{1.0, 0.0, 0.0, 0.0};
  CHECK(shockcap::smoothness_indicator(constant, deg) == 0.0);
  const std::vector<double> zero{0.0, 0.0, 0.0, 0.0};
  CHECK(shockcap::smoothness_indicator(zero, deg) == 0.0);
  // top fraction 1/4; degree-2 fraction of the truncation 1/3
  const std::vector<double> mix{1.0, 1.0, 1.0, 1.0};
  CHECK(shockcap::smoothness_indicator(mix, deg) == doctest::Approx(1.0 / 3.0));
  // triangle degrees: top band is every mode of maximal degree
  const std::vector<int> tdeg{0, 1, 1, 2, 2, 2};
  const std::vector<double> tv{1.0, 0.0, 0.0, 0.0, 1.0, 1.0};
  CHECK(shockcap::smoothness_indicator(tv, tdeg) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("shock-capturing ramp") {
  const auto cfg = shockcap::default_config(3, 0.1);
  CHECK(cfg.s0 + cfg.kappa == doctest::Approx(-4.0 * std::log10(3.0)));
  CHECK(cfg.s0 - cfg.kappa == doctest::Approx(-11.0 * std::log10(3.0)));
  CHECK(cfg.eps0 == doctest::Approx(0.1 / 6.0));
  CHECK(shockcap::ramp_viscosity(0.0, cfg) == 0.0);
  CHECK(shockcap::ramp_viscosity(std::pow(10.0, cfg.s0 - cfg.kappa - 0.1), cfg) == 0.0);
  CHECK(shockcap::ramp_viscosity(std::pow(10.0, cfg.s0 + cfg.kappa + 0.1), cfg) == cfg.eps0);
  CHECK(shockcap::ramp_viscosity(std::pow(10.0, cfg.s0), cfg) == doctest::Approx(0.5 * cfg.eps0));
  // monotone in S
  double last = 0.0;
  for (double s = cfg.s0 - cfg.kappa; s <= cfg.s0 + cfg.kappa; s += 0.05) {
    const double e = shockcap::ramp_viscosity(std::pow(10.0, s), cfg);
    CHECK(e >= last - 1e-15);
    last = e;
  }
  CHECK_THROWS(shockcap::default_config(0, 0.1));
}
