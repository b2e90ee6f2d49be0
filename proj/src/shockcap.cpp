#include "ecavdg/shockcap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ecavdg::shockcap {

IndicatorConfig default_config(int N, double h) {
  if (N < 1) throw std::invalid_argument("shock capturing requires N >= 1");
  const double upper = -4.0 * std::log10(static_cast<double>(N));
  const double lower = -11.0 * std::log10(static_cast<double>(N));
  IndicatorConfig cfg;
  cfg.s0 = 0.5 * (upper + lower);
  cfg.kappa = 0.5 * (upper - lower);
  cfg.eps0 = h / (2.0 * N);
  return cfg;
}

double smoothness_indicator(std::span<const double> modal, std::span<const int> mode_degree) {
  if (modal.size() != mode_degree.size()) {
    throw std::invalid_argument("smoothness_indicator: size mismatch");
  }
  const int N = *std::max_element(mode_degree.begin(), mode_degree.end());
  double total = 0.0, up_to_nm1 = 0.0, up_to_nm2 = 0.0;
  for (std::size_t j = 0; j < modal.size(); ++j) {
    const double e = modal[j] * modal[j];
    total += e;
    if (mode_degree[j] <= N - 1) up_to_nm1 += e;
    if (mode_degree[j] <= N - 2) up_to_nm2 += e;
  }
  if (total <= 0.0) return 0.0;
  const double top = (total - up_to_nm1) / total;
  const double next = up_to_nm1 > 0.0 ? (up_to_nm1 - up_to_nm2) / up_to_nm1 : 0.0;
  return std::max(top, next);
}

double ramp_viscosity(double S, const IndicatorConfig& cfg) {
  if (S <= 0.0) return 0.0;
  const double s = std::log10(S);
  if (s < cfg.s0 - cfg.kappa) return 0.0;
  if (s > cfg.s0 + cfg.kappa) return cfg.eps0;
  return 0.5 * cfg.eps0 * (1.0 + std::sin(std::numbers::pi * (s - cfg.s0) / (2.0 * cfg.kappa)));
}

}  // namespace ecavdg::shockcap
