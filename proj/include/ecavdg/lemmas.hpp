#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ecavdg/mesh.hpp"
#include "ecavdg/refelem.hpp"

namespace ecavdg {

/// Dissipation identity -sum_k (g, vh) = sum_k eps_k b_k on random periodic
/// fields, together with the cancellation of the two surface sums.
struct DissipationCheck {
  int trials = 0;
  double max_relative_residual = 0.0;
  double max_surface_residual = 0.0;  // |T1 + T2| / (|T1| + |T2|)
  double min_dissipation = 0.0;       // min over trials of sum eps b
  double min_viscous_work = 0.0;      // min over trials of -sum (g, vh)
  std::vector<std::string> cases;
  bool passed(double tol = 1e-10) const;
};

DissipationCheck check_dissipation_identity(unsigned seed, int trials);

/// Lower bound of ||theta|| / ||grad vh|| on a uniform mesh of spacing h.
struct GradientBoundCheck {
  int dim = 1;
  int N = 1;
  double h = 0.0;
  double infimum = 0.0;     // exact local infimum over all fields (principal angle)
  double random_min = 0.0;  // minimum over random discontinuous fields
};

/// Exact infimum of ||theta||_k / ||grad vh||_k over all fields, minimised
/// over the elements of `mesh`: the sine of the smallest principal angle
/// between grad P^N and the span of the face lifts with beta != 1.
double ldg_gradient_infimum(const Mesh& mesh, const ReferenceElement& ref);

GradientBoundCheck ldg_gradient_lower_bound_check(int dim, int N, int cells, unsigned seed,
                                                  int trials, ViscousScheme scheme = ViscousScheme::ldg);

/// Ratio ||theta|| / ||grad vh|| of the periodic BR-1 spurious mode on a 1D
/// mesh (odd N), and of the same field under LDG switches.
struct Br1Counterexample {
  int N = 0;
  double br1_ratio = 0.0;
  double ldg_ratio = 0.0;
};
Br1Counterexample br1_counterexample(int N, int K);

/// Projection-ratio check r_k >= 1 on random admissible Euler fields.
struct ProjectionRatioCheck {
  int fields = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};
ProjectionRatioCheck check_projection_ratios(unsigned seed, int fields);

struct LemmaReport {
  DissipationCheck lemma1;
  std::vector<GradientBoundCheck> lemma3;
  std::vector<Br1Counterexample> br1;
  ProjectionRatioCheck lemma4;

  /// Gradient lower bound: positive and varying by at most 20% across h.
  bool lemma3_passed() const;
  bool br1_passed() const;
  bool lemma4_passed() const;
  bool passed() const;
};

LemmaReport check_lemmas(unsigned seed, int trials);
void write_lemma_report(std::ostream& os, const LemmaReport& r);

}  // namespace ecavdg
