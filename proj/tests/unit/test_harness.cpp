#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ecavdg/harness.hpp"

using namespace ecavdg;
namespace fs = std::filesystem;

namespace {

std::string first_line(const fs::path& p) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  return line;
}

}  // namespace

TEST_CASE("schlieren values") {
  const auto s = schlieren_values({0.0, 2.0, 4.0});
  CHECK(s[0] == doctest::Approx(1.0));
  CHECK(s[1] == doctest::Approx(std::exp(-5.0)));
  CHECK(s[2] == doctest::Approx(std::exp(-10.0)));
  for (double v : schlieren_values({3.0, 3.0})) CHECK(v == 1.0);
}

TEST_CASE("short contact run writes every artifact") {
  ExperimentConfig c = preset("contact");
  c.K = 20;
  c.time.t_final = 0.05;
  c.record_every = 10;
  const fs::path dir = fs::temp_directory_path() / "ecavdg_unit_contact";
  fs::remove_all(dir);
  c.output_dir = dir.string();
  const DiagnosticsRecord rec = run_experiment(c);
  CHECK(rec.completed);
  CHECK(rec.violations().empty());
  CHECK(rec.final_time == doctest::Approx(0.05));
  CHECK(rec.max_eps < 1e-20);
  CHECK(rec.l2_error < 1e-12);
  CHECK(first_line(dir / "timeseries.csv") == "t,max_eps,entropy_rate,lemma1_residual,r_min,r_max");
  CHECK(first_line(dir / "steps.csv") == "step,t,dt,accepted,err_estimate");
  CHECK(first_line(dir / "errors.csv") == "t,l2_error,rel_l2_error");
  CHECK(first_line(dir / "field.csv") == "element,x,y,rho,rhou,E");
  CHECK(fs::exists(dir / "mesh.txt"));
  CHECK(load_config((dir / "config.ini").string()) == rec.config);
  std::ifstream js(dir / "summary.json");
  const auto j = nlohmann::json::parse(js);
  CHECK(j["completed"].get<bool>());
  CHECK(j["accepted_steps"].get<long>() == rec.stats.accepted);
}

TEST_CASE("runs are deterministic") {
  ExperimentConfig c = preset("shu-osher");
  c.K = 40;
  c.N = 2;
  c.time.t_final = 0.05;
  const auto a = run_experiment(c);
  const auto b = run_experiment(c);
  REQUIRE(a.completed);
  CHECK(a.final_state.coeffs == b.final_state.coeffs);
  CHECK(a.stats.accepted == b.stats.accepted);
  CHECK(l2_distance(c, a.final_state, b.final_state) == 0.0);
}

TEST_CASE("comparison aligns two runs") {
  ExperimentConfig a = preset("density-wave");
  a.N = 2;
  a.K = 8;
  a.time.t_final = 0.2;
  ExperimentConfig b = a;
  b.visc = ViscChoice::none;
  const Comparison c = compare_runs(a, b);
  CHECK(c.a.completed);
  CHECK(c.b.completed);
  CHECK(c.difference_norm >= 0.0);
  CHECK(c.difference_norm < 1e-2);
  std::ostringstream os;
  write_comparison_summary_csv(os, c);
  CHECK(os.str().rfind("run,visc,completed", 0) == 0);
  b.N = 3;
  CHECK_THROWS(compare_runs(a, b));
}

TEST_CASE("convergence study on the density wave") {
  ExperimentConfig c = preset("density-wave");
  c.visc = ViscChoice::none;
  c.time.t_final = 0.1;
  c.time.abstol = 1e-10;
  c.time.reltol = 1e-10;
  const auto rows = convergence_study(c, {2}, {32, 64});
  REQUIRE(rows.size() == 2);
  CHECK(std::isnan(rows[0].order));
  CHECK(rows[1].order > 2.5);
  std::ostringstream os;
  write_convergence_csv(os, rows);
  CHECK(os.str().rfind("N,K,l2_error,order", 0) == 0);
}
