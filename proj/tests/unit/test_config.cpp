#include <doctest.h>

#include <sstream>

#include "ecavdg/config.hpp"
#include "ecavdg/errors.hpp"

using namespace ecavdg;

TEST_CASE("every preset validates and round-trips through the config format") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    ExperimentConfig c = preset(name);
    CHECK_NOTHROW(c.validate());
    std::stringstream ss;
    write_config(ss, c);
    const ExperimentConfig back = read_config(ss);
    CHECK(back == c);
  }
  CHECK_THROWS_AS(preset("sod"), ConfigError);
}

TEST_CASE("reals round-trip exactly") {
  ExperimentConfig c = preset("density-wave");
  c.time.abstol = 0.1 + 0.2;
  c.gamma = 1.0 + 1.0 / 3.0;
  c.sc_override = true;
  c.sc_s0 = -3.1;
  c.sc_kappa = 1.7;
  c.sc_eps0 = 1.0 / 7.0;
  std::stringstream ss;
  write_config(ss, c);
  CHECK(ss.str().find("[sc]") != std::string::npos);
  CHECK(ss.str().find("eps0=0.14285714285714285") != std::string::npos);
  const ExperimentConfig back = read_config(ss);
  CHECK(back.time.abstol == c.time.abstol);
  CHECK(back.gamma == c.gamma);
  CHECK(back.sc_eps0 == c.sc_eps0);
  CHECK(back == c);
}

TEST_CASE("partial configs start from the problem preset") {
  std::istringstream is("[problem]\nproblem=shu-osher\n[discretization]\nN=2\n[sc]\ns0=-2\nkappa=1\neps0=0.01\n");
  const ExperimentConfig c = read_config(is);
  CHECK(c.problem == Problem::shu_osher);
  CHECK(c.N == 2);
  CHECK(c.K == 100);
  CHECK(c.sc_override);
  CHECK(c.sc_s0 == -2.0);
}

TEST_CASE("invalid configs are rejected") {
  auto bad = [](const std::string& text) {
    std::istringstream is(text);
    CHECK_THROWS_AS(read_config(is), ConfigError);
  };
  bad("[problem]\nproblem=sod\n");
  bad("[problem]\nproblem=vortex\n[extra]\nx=1\n");
  bad("[problem]\nproblem=vortex\n[discretization]\nN=two\n");
  bad("[problem]\nproblem=vortex\n[discretization]\nformulation=nodal\n");
  bad("[problem]\nproblem=burgers2d\n[discretization]\nflux=hllc\n");
  bad("[problem]\nproblem=contact\n[time]\nt_final=-1\n");
  bad("[discretization]\nN=2\n");
  CHECK_THROWS_AS(resolve_config("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("names") {
  for (auto p : {Problem::burgers2d, Problem::vortex, Problem::contact, Problem::contact_smooth,
                 Problem::shock_vortex, Problem::density_wave, Problem::shu_osher})
    CHECK(parse_problem(to_string(p)) == p);
  for (auto v : {ViscChoice::ecav_ldg, ViscChoice::ecav_br1, ViscChoice::sc, ViscChoice::none})
    CHECK(parse_visc_choice(to_string(v)) == v);
  CHECK(problem_dimension(Problem::vortex) == 2);
  CHECK(problem_dimension(Problem::shu_osher) == 1);
  CHECK(has_exact_solution(Problem::density_wave));
  CHECK_FALSE(has_exact_solution(Problem::shu_osher));
}

TEST_CASE("shipped preset files match the built-in presets") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    CHECK(load_config(std::string(ECAVDG_PRESET_DIR) + "/" + name + ".cfg") == preset(name));
  }
}
