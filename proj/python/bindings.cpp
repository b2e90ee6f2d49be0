#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ecavdg/config.hpp"
#include "ecavdg/harness.hpp"
#include "ecavdg/lemmas.hpp"
#include "ecavdg/physics.hpp"
#include "ecavdg/refelem.hpp"
#include "ecavdg/viscosity.hpp"

namespace py = pybind11;
using namespace ecavdg;

namespace {

std::string to_ini(const ExperimentConfig& c) {
  std::ostringstream os;
  write_config(os, c);
  return os.str();
}

ExperimentConfig from_ini(const std::string& s) {
  std::istringstream is(s);
  return read_config(is);
}

py::dict samples_to_dict(const std::vector<DiagnosticSample>& s) {
  std::vector<double> t, eps, rate, l1, rmin, rmax, err;
  for (const auto& x : s) {
    t.push_back(x.t);
    eps.push_back(x.max_eps);
    rate.push_back(x.entropy_rate);
    l1.push_back(x.lemma1_residual);
    rmin.push_back(x.r_min);
    rmax.push_back(x.r_max);
    err.push_back(x.rel_l2_error);
  }
  py::dict d;
  d["t"] = t;
  d["max_eps"] = eps;
  d["entropy_rate"] = rate;
  d["lemma1_residual"] = l1;
  d["r_min"] = rmin;
  d["r_max"] = rmax;
  d["rel_l2_error"] = err;
  return d;
}

template <int D>
Eigen::VectorXd euler_entropy_variables(const Eigen::VectorXd& u, double gamma) {
  if (u.size() != D + 2) throw py::value_error("state has the wrong length");
  Euler<D> law;
  law.gamma = gamma;
  return law.entropy_variables(u);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entropy-correction artificial viscosity DG solver";

  py::register_exception<AdmissibilityError>(m, "AdmissibilityError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ExperimentConfig>(m, "Config")
      .def_static("preset", [](const std::string& n) { return preset(n); })
      .def_static("from_ini", &from_ini)
      .def_static("load", &load_config)
      .def("to_ini", &to_ini)
      .def("save", [](const ExperimentConfig& c, const std::string& p) { save_config(p, c); })
      .def("validate", &ExperimentConfig::validate)
      .def_readwrite("name", &ExperimentConfig::name)
      .def_property("problem", [](const ExperimentConfig& c) { return std::string(to_string(c.problem)); },
                    [](ExperimentConfig& c, const std::string& s) { c.problem = parse_problem(s); })
      .def_readwrite("N", &ExperimentConfig::N)
      .def_readwrite("K", &ExperimentConfig::K)
      .def_readwrite("Ky", &ExperimentConfig::Ky)
      .def_property("formulation", [](const ExperimentConfig& c) { return std::string(to_string(c.formulation)); },
                    [](ExperimentConfig& c, const std::string& s) { c.formulation = parse_formulation(s); })
      .def_property("visc", [](const ExperimentConfig& c) { return std::string(to_string(c.visc)); },
                    [](ExperimentConfig& c, const std::string& s) { c.visc = parse_visc_choice(s); })
      .def_property("t_final", [](const ExperimentConfig& c) { return c.time.t_final; },
                    [](ExperimentConfig& c, double t) { c.time.t_final = t; })
      .def_readwrite("output_dir", &ExperimentConfig::output_dir)
      .def_readwrite("record_every", &ExperimentConfig::record_every)
      .def_readwrite("write_field", &ExperimentConfig::write_field)
      .def("__eq__", [](const ExperimentConfig& a, const ExperimentConfig& b) { return a == b; })
      .def("__repr__", [](const ExperimentConfig& c) {
        return "<Config " + c.name + " problem=" + std::string(to_string(c.problem)) +
               " N=" + std::to_string(c.N) + " K=" + std::to_string(c.K) + ">";
      });

  m.def("preset_names", &preset_names);

  m.def(
      "run",
      [](const ExperimentConfig& cfg) {
        DiagnosticsRecord rec;
        {
          py::gil_scoped_release release;
          rec = run_experiment(cfg);
        }
        py::dict d;
        d["completed"] = rec.completed;
        d["failure"] = rec.failure;
        d["final_time"] = rec.final_time;
        d["l2_error"] = rec.l2_error;
        d["rel_l2_error"] = rec.rel_l2_error;
        d["max_eps"] = rec.max_eps;
        d["max_entropy_rate"] = rec.max_entropy_rate;
        d["r_min"] = rec.r_min;
        d["r_max"] = rec.r_max;
        d["accepted_steps"] = rec.stats.accepted;
        d["rejected_steps"] = rec.stats.rejected;
        d["violations"] = rec.violations();
        d["samples"] = samples_to_dict(rec.samples);
        d["final_state"] = rec.final_state.coeffs;
        return d;
      },
      py::arg("config"), "Run one experiment and return its diagnostics.");

  m.def(
      "check_lemmas",
      [](unsigned seed, int trials) {
        LemmaReport r;
        {
          py::gil_scoped_release release;
          r = check_lemmas(seed, trials);
        }
        py::dict d;
        d["passed"] = r.passed();
        d["dissipation_residual"] = r.lemma1.max_relative_residual;
        d["dissipation_passed"] = r.lemma1.passed();
        d["gradient_bound_passed"] = r.lemma3_passed();
        d["br1_passed"] = r.br1_passed();
        d["projection_ratio_min"] = r.lemma4.min_ratio;
        d["projection_ratio_passed"] = r.lemma4_passed();
        std::ostringstream os;
        write_lemma_report(os, r);
        d["report"] = os.str();
        return d;
      },
      py::arg("seed") = 1, py::arg("trials") = 200);

  m.def("ecav_coefficient",
        [](double delta_k, double b, const std::string& mode, double delta) {
          return ecav_coefficient(delta_k, b, parse_regularization(mode), delta);
        },
        py::arg("delta_k"), py::arg("b"), py::arg("regularization") = "absolute", py::arg("delta") = 1e-14);

  m.def("schlieren_values", &schlieren_values);

  m.def(
      "reference_element",
      [](const std::string& shape, int N, const std::string& formulation) {
        const Shape s = shape == "triangle" ? Shape::triangle : Shape::interval;
        const auto ref = build_reference_element(s, N, parse_formulation(formulation));
        py::dict d;
        d["points"] = ref->volume.points;
        d["weights"] = ref->volume.weights;
        d["M"] = ref->M;
        d["Vq"] = ref->Vq;
        d["Pq"] = ref->Pq;
        d["Dr"] = ref->Dr;
        return d;
      },
      py::arg("shape"), py::arg("N"), py::arg("formulation") = "modal");

  m.def(
      "entropy_variables",
      [](const Eigen::VectorXd& u, double gamma) {
        return u.size() == 3 ? euler_entropy_variables<1>(u, gamma) : euler_entropy_variables<2>(u, gamma);
      },
      py::arg("u"), py::arg("gamma") = 1.4, "Euler entropy variables of a conservative state (1D or 2D).");
}
