#include "ecavdg/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "ecavdg/errors.hpp"
#include "ecavdg/shockcap.hpp"

namespace ecavdg {

namespace pt = boost::property_tree;

std::string_view to_string(Problem p) {
  switch (p) {
    case Problem::burgers2d: return "burgers2d";
    case Problem::vortex: return "vortex";
    case Problem::contact: return "contact";
    case Problem::contact_smooth: return "contact-smooth";
    case Problem::shock_vortex: return "shock-vortex";
    case Problem::density_wave: return "density-wave";
    case Problem::shu_osher: return "shu-osher";
  }
  return "?";
}

Problem parse_problem(std::string_view s) {
  for (Problem p : {Problem::burgers2d, Problem::vortex, Problem::contact, Problem::contact_smooth,
                    Problem::shock_vortex, Problem::density_wave, Problem::shu_osher}) {
    if (to_string(p) == s) return p;
  }
  throw ConfigError("unknown problem '" + std::string(s) + "'");
}

int problem_dimension(Problem p) {
  return p == Problem::burgers2d || p == Problem::vortex || p == Problem::shock_vortex ? 2 : 1;
}

bool has_exact_solution(Problem p) {
  return p == Problem::vortex || p == Problem::contact || p == Problem::contact_smooth ||
         p == Problem::density_wave;
}

std::string_view to_string(ViscChoice v) {
  switch (v) {
    case ViscChoice::ecav_ldg: return "ecav-ldg";
    case ViscChoice::ecav_br1: return "ecav-br1";
    case ViscChoice::sc: return "sc";
    case ViscChoice::none: return "none";
  }
  return "?";
}

ViscChoice parse_visc_choice(std::string_view s) {
  for (ViscChoice v : {ViscChoice::ecav_ldg, ViscChoice::ecav_br1, ViscChoice::sc, ViscChoice::none})
    if (to_string(v) == s) return v;
  throw ConfigError("unknown viscosity mode '" + std::string(s) + "'");
}

void ExperimentConfig::validate() const {
  if (N < 0) throw ConfigError("N must be >= 0");
  if (formulation == Formulation::nodal && (problem_dimension(problem) != 1 || N < 1)) {
    throw ConfigError("nodal formulation needs a 1D problem and N >= 1");
  }
  if (K < 2 || ky() < 2) throw ConfigError("meshes need at least 2 elements per direction");
  if (!(upper.x() > lower.x()) || (problem_dimension(problem) == 2 && !(upper.y() > lower.y()))) {
    throw ConfigError("empty domain");
  }
  if (!(gamma > 1.0)) throw ConfigError("gamma must exceed 1");
  if (record_every < 1) throw ConfigError("record_every must be >= 1");
  if (!(time.t_final > 0.0)) throw ConfigError("t_final must be > 0");
  if (problem == Problem::burgers2d) {
    if (flux == FluxKind::hllc) throw ConfigError("HLLC is not defined for Burgers");
    if (boundary_x == BoundaryKind::wall || boundary_y == BoundaryKind::wall) {
      throw ConfigError("wall boundaries are not defined for Burgers");
    }
  } else if (flux == FluxKind::burgers_ec) {
    throw ConfigError("the Burgers EC flux is not defined for Euler");
  }
  if (visc == ViscChoice::sc && N < 1) throw ConfigError("shock capturing needs N >= 1");
  try {
    time.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::string> preset_names() {
  return {"burgers2d",    "vortex",       "contact",  "contact-smooth",
          "shock-vortex", "density-wave", "shu-osher"};
}

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig c;
  c.name = std::string(name);
  c.time.method = TimeMethod::ssprk43;
  c.time.abstol = 1e-6;
  c.time.reltol = 1e-4;
  if (name == "burgers2d") {
    c.problem = Problem::burgers2d;
    c.N = 3;
    c.K = 30;
    c.flux = FluxKind::burgers_ec;
    c.regularization = RegularizationMode::ulp;
    c.time.t_final = 0.77;
  } else if (name == "vortex") {
    c.problem = Problem::vortex;
    c.N = 2;
    c.K = 16;
    c.lower = {-10.0, -10.0};
    c.upper = {10.0, 10.0};
    c.time.method = TimeMethod::rk5_adaptive;
    c.time.abstol = 1e-10;
    c.time.reltol = 1e-8;
    c.time.t_final = 20.0;
    c.lemma4 = false;
  } else if (name == "contact" || name == "contact-smooth") {
    c.problem = name == "contact" ? Problem::contact : Problem::contact_smooth;
    c.N = name == "contact" ? 4 : 6;
    c.K = 80;
    c.time.method = TimeMethod::ssprk43_fixed;
    c.time.dt_init = 5e-4;
    c.time.t_final = 4.0;
    c.record_every = 40;
  } else if (name == "shock-vortex") {
    c.problem = Problem::shock_vortex;
    c.N = 2;
    c.K = 64;
    c.Ky = 32;
    c.lower = {0.0, 0.0};
    c.upper = {2.0, 1.0};
    c.boundary_y = BoundaryKind::wall;
    c.time.t_final = 0.7;
    c.schlieren = true;
    c.record_every = 5;
    c.lemma4 = false;
  } else if (name == "density-wave") {
    c.problem = Problem::density_wave;
    c.N = 5;
    c.K = 16;
    c.time.t_final = 25.0;
  } else if (name == "shu-osher") {
    c.problem = Problem::shu_osher;
    c.N = 3;
    c.K = 100;
    c.lower = {-5.0, 0.0};
    c.upper = {5.0, 0.0};
    c.time.t_final = 1.8;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  if (problem_dimension(c.problem) == 1) {
    c.lower.y() = 0.0;
    c.upper.y() = 0.0;
    c.Ky = 0;
  }
  return c;
}

namespace {

std::string real(double x) { return fmt::format("{:.17g}", x); }

double parse_real(const std::string& s, const char* key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, s));
  }
}

int parse_int(const std::string& s, const char* key) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", key, s));
  }
}

bool parse_bool(const std::string& s, const char* key) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, s));
}

}  // namespace

void write_config(std::ostream& os, const ExperimentConfig& c) {
  pt::ptree t;
  t.put("problem.name", c.name);
  t.put("problem.problem", std::string(to_string(c.problem)));
  t.put("problem.gamma", real(c.gamma));
  t.put("discretization.N", std::to_string(c.N));
  t.put("discretization.formulation", std::string(to_string(c.formulation)));
  t.put("discretization.flux", std::string(to_string(c.flux)));
  t.put("mesh.K", std::to_string(c.K));
  t.put("mesh.Ky", std::to_string(c.Ky));
  t.put("mesh.lower_x", real(c.lower.x()));
  t.put("mesh.lower_y", real(c.lower.y()));
  t.put("mesh.upper_x", real(c.upper.x()));
  t.put("mesh.upper_y", real(c.upper.y()));
  t.put("mesh.boundary_x", std::string(to_string(c.boundary_x)));
  t.put("mesh.boundary_y", std::string(to_string(c.boundary_y)));
  t.put("viscosity.mode", std::string(to_string(c.visc)));
  t.put("viscosity.switch_x", real(c.switch_vector.x()));
  t.put("viscosity.switch_y", real(c.switch_vector.y()));
  t.put("viscosity.regularization", std::string(to_string(c.regularization)));
  t.put("viscosity.delta", real(c.delta));
  if (c.sc_override) {
    t.put("sc.s0", real(c.sc_s0));
    t.put("sc.kappa", real(c.sc_kappa));
    t.put("sc.eps0", real(c.sc_eps0));
  }
  t.put("time.method", std::string(to_string(c.time.method)));
  t.put("time.abstol", real(c.time.abstol));
  t.put("time.reltol", real(c.time.reltol));
  t.put("time.dt", real(c.time.dt_init));
  t.put("time.dt_min", real(c.time.dt_min));
  t.put("time.dt_max", real(c.time.dt_max));
  t.put("time.t_final", real(c.time.t_final));
  t.put("time.safety", real(c.time.safety));
  t.put("time.max_steps", std::to_string(c.time.max_steps));
  t.put("output.dir", c.output_dir);
  t.put("output.record_every", std::to_string(c.record_every));
  t.put("output.field", c.write_field ? "true" : "false");
  t.put("output.schlieren", c.schlieren ? "true" : "false");
  t.put("output.lemma4", c.lemma4 ? "true" : "false");
  pt::write_ini(os, t);
}

ExperimentConfig read_config(std::istream& is) {
  pt::ptree t;
  try {
    pt::read_ini(is, t);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  static const std::vector<std::string> known_sections = {
      "problem", "discretization", "mesh", "viscosity", "sc", "time", "output"};
  for (const auto& [section, _] : t) {
    if (std::find(known_sections.begin(), known_sections.end(), section) == known_sections.end()) {
      throw ConfigError("unknown config section [" + section + "]");
    }
  }

  const std::string problem = t.get<std::string>("problem.problem", "");
  if (problem.empty()) throw ConfigError("config: missing problem.problem");
  // Start from the problem's preset so that omitted keys take sensible values.
  ExperimentConfig c = preset(to_string(parse_problem(problem)));
  auto str = [&](const char* key, std::string& out) {
    if (auto v = t.get_optional<std::string>(key)) out = *v;
  };
  auto num = [&](const char* key, double& out) {
    if (auto v = t.get_optional<std::string>(key)) out = parse_real(*v, key);
  };
  auto integer = [&](const char* key, int& out) {
    if (auto v = t.get_optional<std::string>(key)) out = parse_int(*v, key);
  };
  auto flag = [&](const char* key, bool& out) {
    if (auto v = t.get_optional<std::string>(key)) out = parse_bool(*v, key);
  };
  try {
    str("problem.name", c.name);
    num("problem.gamma", c.gamma);
    integer("discretization.N", c.N);
    if (auto v = t.get_optional<std::string>("discretization.formulation"))
      c.formulation = parse_formulation(*v);
    if (auto v = t.get_optional<std::string>("discretization.flux")) c.flux = parse_flux(*v);
    integer("mesh.K", c.K);
    integer("mesh.Ky", c.Ky);
    num("mesh.lower_x", c.lower.x());
    num("mesh.lower_y", c.lower.y());
    num("mesh.upper_x", c.upper.x());
    num("mesh.upper_y", c.upper.y());
    if (auto v = t.get_optional<std::string>("mesh.boundary_x")) c.boundary_x = parse_boundary(*v);
    if (auto v = t.get_optional<std::string>("mesh.boundary_y")) c.boundary_y = parse_boundary(*v);
    if (auto v = t.get_optional<std::string>("viscosity.mode")) c.visc = parse_visc_choice(*v);
    num("viscosity.switch_x", c.switch_vector.x());
    num("viscosity.switch_y", c.switch_vector.y());
    if (auto v = t.get_optional<std::string>("viscosity.regularization"))
      c.regularization = parse_regularization(*v);
    num("viscosity.delta", c.delta);
    if (t.get_child_optional("sc")) {
      c.sc_override = true;
      const auto d = shockcap::default_config(std::max(c.N, 1), 1.0);
      c.sc_s0 = d.s0;
      c.sc_kappa = d.kappa;
      c.sc_eps0 = 0.0;
      num("sc.s0", c.sc_s0);
      num("sc.kappa", c.sc_kappa);
      num("sc.eps0", c.sc_eps0);
    }
    if (auto v = t.get_optional<std::string>("time.method")) c.time.method = parse_time_method(*v);
    num("time.abstol", c.time.abstol);
    num("time.reltol", c.time.reltol);
    num("time.dt", c.time.dt_init);
    num("time.dt_min", c.time.dt_min);
    num("time.dt_max", c.time.dt_max);
    num("time.t_final", c.time.t_final);
    num("time.safety", c.time.safety);
    if (auto v = t.get_optional<std::string>("time.max_steps"))
      c.time.max_steps = parse_int(*v, "time.max_steps");
    str("output.dir", c.output_dir);
    integer("output.record_every", c.record_every);
    flag("output.field", c.write_field);
    flag("output.schlieren", c.schlieren);
    flag("output.lemma4", c.lemma4);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return read_config(in);
}

void save_config(const std::string& path, const ExperimentConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file '" + path + "'");
  write_config(out, cfg);
}

ExperimentConfig resolve_config(const std::string& preset_or_path) {
  for (const auto& n : preset_names())
    if (n == preset_or_path) return preset(n);
  if (std::filesystem::exists(preset_or_path)) return load_config(preset_or_path);
  throw ConfigError("'" + preset_or_path + "' is neither a preset nor a config file");
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  const auto& ta = a.time;
  const auto& tb = b.time;
  return a.name == b.name && a.problem == b.problem && a.N == b.N &&
         a.formulation == b.formulation && a.flux == b.flux && same(a.gamma, b.gamma) &&
         a.K == b.K && a.Ky == b.Ky && a.lower == b.lower && a.upper == b.upper &&
         a.boundary_x == b.boundary_x && a.boundary_y == b.boundary_y && a.visc == b.visc &&
         a.switch_vector == b.switch_vector && a.regularization == b.regularization &&
         same(a.delta, b.delta) && a.sc_override == b.sc_override &&
         (!a.sc_override || (same(a.sc_s0, b.sc_s0) && same(a.sc_kappa, b.sc_kappa) &&
                             same(a.sc_eps0, b.sc_eps0))) &&
         ta.method == tb.method && same(ta.abstol, tb.abstol) && same(ta.reltol, tb.reltol) &&
         same(ta.dt_init, tb.dt_init) && same(ta.dt_min, tb.dt_min) &&
         same(ta.dt_max, tb.dt_max) && same(ta.t_final, tb.t_final) &&
         same(ta.safety, tb.safety) && ta.max_steps == tb.max_steps &&
         a.output_dir == b.output_dir && a.record_every == b.record_every &&
         a.write_field == b.write_field && a.schlieren == b.schlieren && a.lemma4 == b.lemma4;
}

}  // namespace ecavdg
