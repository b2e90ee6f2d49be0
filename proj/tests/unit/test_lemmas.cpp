#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ecavdg/lemmas.hpp"

using namespace ecavdg;

TEST_CASE("dissipation identity on random fields") {
  const auto r = check_dissipation_identity(3, 24);
  CHECK(r.trials == 24);
  CHECK(r.max_relative_residual < 1e-10);
  CHECK(r.max_surface_residual < 1e-12);
  CHECK(r.min_dissipation >= 0.0);
  CHECK(r.passed());
}

TEST_CASE("1D LDG gradient bound is h-independent and has a closed form for N = 1") {
  // N = 1: the worst field is the sawtooth, with ratio sqrt(3)/2
  for (int cells : {8, 16}) {
    const auto c = ldg_gradient_lower_bound_check(1, 1, cells, 1, 5);
    CHECK(c.infimum == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-10));
    CHECK(c.random_min >= c.infimum - 1e-12);
  }
  const auto a = ldg_gradient_lower_bound_check(2, 2, 4, 1, 2);
  const auto b = ldg_gradient_lower_bound_check(2, 2, 8, 1, 2);
  CHECK(a.infimum > 0.1);
  CHECK(a.infimum == doctest::Approx(b.infimum).epsilon(1e-8));
}

TEST_CASE("BR-1 spurious mode") {
  for (int N : {1, 3}) {
    const auto c = br1_counterexample(N, 6);
    CHECK(c.br1_ratio < 1e-10);
    CHECK(c.ldg_ratio > 0.5);
  }
}

TEST_CASE("projection ratio check") {
  const auto r = check_projection_ratios(5, 6);
  CHECK(r.fields == 6);
  CHECK(r.min_ratio >= 1.0 - 1e-12);
  CHECK(r.max_ratio < 2.0);
}

TEST_CASE("lemma report formatting") {
  LemmaReport rep;
  rep.lemma1 = check_dissipation_identity(1, 12);
  rep.br1.push_back(br1_counterexample(1, 4));
  std::ostringstream os;
  write_lemma_report(os, rep);
  CHECK(os.str().find("dissipation identity") != std::string::npos);
  CHECK_FALSE(rep.passed());  // no gradient-bound cases recorded
}
