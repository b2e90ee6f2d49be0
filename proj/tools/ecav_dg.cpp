// Command-line front end: run presets/config files, convergence studies,
// side-by-side comparisons and the lemma property suites.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ecavdg/config.hpp"
#include "ecavdg/errors.hpp"
#include "ecavdg/harness.hpp"
#include "ecavdg/lemmas.hpp"
#include "ecavdg/setup.hpp"

namespace {

using namespace ecavdg;

struct Overrides {
  std::string visc;
  std::string formulation;
  std::optional<int> N;
  std::optional<int> K;
  std::optional<double> t_final;
  std::optional<int> record_every;
  std::string out;

  void add_to(CLI::App* app) {
    app->add_option("--visc", visc, "ecav-ldg | ecav-br1 | sc | none");
    app->add_option("--formulation", formulation, "modal | nodal");
    app->add_option("--N", N, "polynomial degree");
    app->add_option("--K", K, "elements (1D) or cells per x-direction (2D)");
    app->add_option("--t-final", t_final, "final time");
    app->add_option("--record-every", record_every, "diagnostics stride in accepted steps");
    app->add_option("--out", out, "output directory");
  }

  void apply(ExperimentConfig& c) const {
    if (!visc.empty()) c.visc = parse_visc_choice(visc);
    if (!formulation.empty()) c.formulation = parse_formulation(formulation);
    if (N) c.N = *N;
    if (K) {
      if (c.Ky > 0) c.Ky = std::max(2, static_cast<int>(std::lround(double(c.Ky) * *K / c.K)));
      c.K = *K;
    }
    if (t_final) c.time.t_final = *t_final;
    if (record_every) c.record_every = *record_every;
    if (!out.empty()) c.output_dir = out;
  }
};

std::vector<int> parse_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

int report(const DiagnosticsRecord& rec) {
  fmt::print("{} ({}): t = {:.6g}, accepted {} rejected {}, max eps {:.3e}, max dS/dt {:.3e}",
             rec.config.name, to_string(rec.config.visc), rec.final_time, rec.stats.accepted,
             rec.stats.rejected, rec.max_eps, rec.max_entropy_rate);
  if (std::isfinite(rec.rel_l2_error)) fmt::print(", rel L2 {:.4e}", rec.rel_l2_error);
  if (std::isfinite(rec.r_min)) fmt::print(", r in [{:.6f}, {:.6f}]", rec.r_min, rec.r_max);
  fmt::print(" [{:.1f} s]\n", rec.wall_seconds);
  const auto v = rec.violations();
  for (const auto& msg : v) fmt::print(std::cerr, "violation: {}\n", msg);
  return v.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-correction artificial viscosity DG solver"};
  app.require_subcommand(1);

  std::string target;
  Overrides run_opts;
  bool print_mesh = false;
  auto* run = app.add_subcommand("run", "run a preset or config file");
  run->add_option("target", target, "preset name or config path")->required();
  run->add_flag("--mesh-summary", print_mesh, "print the mesh summary before running");
  run_opts.add_to(run);

  std::string conv_target, conv_N = "1,2,3", conv_K = "16,32";
  Overrides conv_opts;
  auto* converge = app.add_subcommand("converge", "h-refinement study");
  converge->add_option("target", conv_target, "preset name or config path")->required();
  converge->add_option("--Ns", conv_N, "comma-separated degrees");
  converge->add_option("--Ks", conv_K, "comma-separated element counts");
  conv_opts.add_to(converge);

  std::string cmp_a, cmp_b, cmp_visc_b;
  Overrides cmp_opts;
  auto* compare = app.add_subcommand("compare", "run two configurations and align their series");
  compare->add_option("a", cmp_a, "preset name or config path")->required();
  compare->add_option("b", cmp_b, "second config (defaults to the first)");
  compare->add_option("--visc-b", cmp_visc_b, "viscosity mode of the second run");
  cmp_opts.add_to(compare);

  unsigned seed = 1;
  int trials = 200;
  auto* lemmas = app.add_subcommand("check-lemmas", "dissipation identity, LDG gradient bound and projection-ratio checks");
  lemmas->add_option("--seed", seed, "random seed");
  lemmas->add_option("--trials", trials, "random fields for the dissipation identity");

  auto* presets = app.add_subcommand("presets", "list or export presets");
  std::string export_dir;
  presets->add_option("--export", export_dir, "write every preset as <dir>/<name>.cfg");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ExperimentConfig cfg = resolve_config(target);
      run_opts.apply(cfg);
      cfg.validate();
      if (print_mesh) write_mesh_summary(std::cout, *build_mesh(cfg));
      return report(run_experiment(cfg));
    }
    if (*converge) {
      ExperimentConfig cfg = resolve_config(conv_target);
      conv_opts.apply(cfg);
      const auto rows = convergence_study(cfg, parse_list(conv_N), parse_list(conv_K));
      write_convergence_csv(std::cout, rows);
      if (!cfg.output_dir.empty()) {
        std::ofstream f(std::filesystem::path(cfg.output_dir) / "convergence.csv");
        write_convergence_csv(f, rows);
      }
      return 0;
    }
    if (*compare) {
      ExperimentConfig a = resolve_config(cmp_a);
      cmp_opts.apply(a);
      ExperimentConfig b = cmp_b.empty() ? a : resolve_config(cmp_b);
      if (!cmp_b.empty()) cmp_opts.apply(b);
      if (!cmp_visc_b.empty()) b.visc = parse_visc_choice(cmp_visc_b);
      const std::string out = a.output_dir;
      if (!out.empty()) {
        a.output_dir = (std::filesystem::path(out) / "a").string();
        b.output_dir = (std::filesystem::path(out) / "b").string();
      }
      const Comparison c = compare_runs(a, b);
      write_comparison_summary_csv(std::cout, c);
      if (!out.empty()) {
        std::ofstream f(std::filesystem::path(out) / "comparison.csv");
        write_comparison_csv(f, c);
        std::ofstream s(std::filesystem::path(out) / "comparison_summary.csv");
        write_comparison_summary_csv(s, c);
      }
      const int ra = report(c.a);
      const int rb = report(c.b);
      return ra != 0 ? ra : rb;
    }
    if (*lemmas) {
      const LemmaReport r = check_lemmas(seed, trials);
      write_lemma_report(std::cout, r);
      return r.passed() ? 0 : 2;
    }
    if (*presets) {
      for (const auto& n : preset_names()) {
        fmt::print("{}\n", n);
        if (!export_dir.empty()) {
          std::filesystem::create_directories(export_dir);
          save_config((std::filesystem::path(export_dir) / (n + ".cfg")).string(), preset(n));
        }
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    fmt::print(std::cerr, "config error: {}\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
