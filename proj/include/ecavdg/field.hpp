#pragma once

#include <Eigen/Dense>

namespace ecavdg {

/// Coefficients of a DG field, stored element by element. Each element
/// block is a column-major (modes x variables) matrix, so the flat index of
/// (element k, variable i, mode j) is (k * nvars + i) * modes + j.
struct SolutionField {
  Eigen::VectorXd coeffs;
  int num_elements = 0;
  int nvars = 0;
  int num_modes = 0;

  SolutionField() = default;
  SolutionField(int K, int n, int Np)
      : coeffs(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K) * n * Np)),
        num_elements(K),
        nvars(n),
        num_modes(Np) {}

  Eigen::Map<Eigen::MatrixXd> element(int k) {
    return {coeffs.data() + static_cast<Eigen::Index>(k) * nvars * num_modes, num_modes, nvars};
  }
  Eigen::Map<const Eigen::MatrixXd> element(int k) const {
    return {coeffs.data() + static_cast<Eigen::Index>(k) * nvars * num_modes, num_modes, nvars};
  }

  double& operator()(int k, int i, int j) {
    return coeffs((static_cast<Eigen::Index>(k) * nvars + i) * num_modes + j);
  }
  double operator()(int k, int i, int j) const {
    return coeffs((static_cast<Eigen::Index>(k) * nvars + i) * num_modes + j);
  }

  bool all_finite() const { return coeffs.allFinite(); }
};

}  // namespace ecavdg
