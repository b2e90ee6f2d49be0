#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ecavdg/mesh.hpp"
#include "ecavdg/physics.hpp"
#include "ecavdg/refelem.hpp"
#include "ecavdg/timeint.hpp"
#include "ecavdg/viscosity.hpp"

namespace ecavdg {

enum class Problem { burgers2d, vortex, contact, contact_smooth, shock_vortex, density_wave, shu_osher };

std::string_view to_string(Problem p);
Problem parse_problem(std::string_view s);
int problem_dimension(Problem p);
bool has_exact_solution(Problem p);

/// Viscous treatment selected on the command line / config file.
enum class ViscChoice { ecav_ldg, ecav_br1, sc, none };

std::string_view to_string(ViscChoice v);
ViscChoice parse_visc_choice(std::string_view s);

struct ExperimentConfig {
  std::string name;
  Problem problem = Problem::density_wave;
  int N = 3;
  Formulation formulation = Formulation::modal;
  FluxKind flux = FluxKind::hllc;
  double gamma = 1.4;

  // Mesh: K elements in 1D, Kx x Ky cells (2 triangles each) in 2D.
  int K = 16;
  int Ky = 0;  // 0: same as K
  Eigen::Vector2d lower{-1.0, -1.0};
  Eigen::Vector2d upper{1.0, 1.0};
  BoundaryKind boundary_x = BoundaryKind::periodic;
  BoundaryKind boundary_y = BoundaryKind::periodic;

  ViscChoice visc = ViscChoice::ecav_ldg;
  Eigen::Vector2d switch_vector{0.0, 0.0};  // zero: default for the dimension
  RegularizationMode regularization = RegularizationMode::absolute;
  double delta = 1e-14;
  bool sc_override = false;
  double sc_s0 = 0.0;
  double sc_kappa = 0.0;
  double sc_eps0 = 0.0;

  IntegratorConfig time;

  std::string output_dir;
  int record_every = 1;
  bool write_field = true;
  bool schlieren = false;
  bool lemma4 = true;

  int ky() const { return Ky > 0 ? Ky : K; }
  void validate() const;
};

/// Named presets reproducing the experiment suite.
std::vector<std::string> preset_names();
ExperimentConfig preset(std::string_view name);

/// INI-style config with sections [problem], [discretization], [mesh],
/// [viscosity], [sc], [time], [output]. Reals are written with 17
/// significant digits so write -> read round-trips exactly.
void write_config(std::ostream& os, const ExperimentConfig& cfg);
ExperimentConfig read_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);
void save_config(const std::string& path, const ExperimentConfig& cfg);

/// A preset name or a path to a config file.
ExperimentConfig resolve_config(const std::string& preset_or_path);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace ecavdg
