#pragma once

#include <span>

namespace ecavdg::shockcap {

/// Ramp parameters in log10 units; eps0 is the viscosity ceiling.
struct IndicatorConfig {
  double s0 = 0.0;
  double kappa = 1.0;
  double eps0 = 0.0;
};

/// Thresholds s0 + kappa = -4 log10 N and s0 - kappa = -11 log10 N with
/// eps0 = h / (2N).
IndicatorConfig default_config(int N, double h);

/// max(top-mode energy fraction, same fraction of the degree N-1 truncation)
/// for orthonormal modal coefficients. `mode_degree[j]` is the total degree
/// of mode j; the "top band" is every mode of maximal degree. Returns 0 for
/// a zero field.
double smoothness_indicator(std::span<const double> modal, std::span<const int> mode_degree);

/// 0 below s0 - kappa, eps0 above s0 + kappa, sine blend in between, with
/// s = log10(S) (S = 0 maps to 0).
double ramp_viscosity(double S, const IndicatorConfig& cfg);

}  // namespace ecavdg::shockcap
