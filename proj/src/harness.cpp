#include "ecavdg/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "ecavdg/errors.hpp"
#include "ecavdg/setup.hpp"

namespace ecavdg {

namespace fs = std::filesystem;

std::shared_ptr<const Mesh> build_mesh(const ExperimentConfig& cfg) {
  Mesh m = problem_dimension(cfg.problem) == 1
               ? uniform_interval_mesh(cfg.lower.x(), cfg.upper.x(), cfg.K, cfg.boundary_x)
               : uniform_triangle_mesh(cfg.lower, cfg.upper, cfg.K, cfg.ky(), cfg.boundary_x,
                                       cfg.boundary_y);
  const Eigen::Vector2d v0 =
      cfg.switch_vector.isZero() ? default_switch_vector(m.dim) : cfg.switch_vector;
  const ViscousScheme scheme = cfg.visc == ViscChoice::ecav_br1 ? ViscousScheme::br1 : ViscousScheme::ldg;
  return std::make_shared<const Mesh>(assign_ldg_switches(std::move(m), v0, scheme));
}

ViscosityOptions viscosity_options(const ExperimentConfig& cfg) {
  ViscosityOptions v;
  switch (cfg.visc) {
    case ViscChoice::ecav_ldg:
    case ViscChoice::ecav_br1: v.mode = ViscosityMode::ecav; break;
    case ViscChoice::sc: v.mode = ViscosityMode::shock_capturing; break;
    case ViscChoice::none: v.mode = ViscosityMode::none; break;
  }
  v.regularization = cfg.regularization;
  v.delta = cfg.delta;
  v.sc_defaults = !cfg.sc_override;
  v.sc_s0 = cfg.sc_s0;
  v.sc_kappa = cfg.sc_kappa;
  v.sc_eps0 = cfg.sc_eps0;
  return v;
}

std::vector<std::string> DiagnosticsRecord::violations() const {
  std::vector<std::string> out;
  if (!completed) out.push_back("run did not complete: " + failure);
  const bool ecav = config.visc == ViscChoice::ecav_ldg || config.visc == ViscChoice::ecav_br1;
  for (const auto& s : samples) {
    if (!std::isfinite(s.t) || !std::isfinite(s.max_eps) || !std::isfinite(s.entropy_rate)) {
      out.push_back(fmt::format("non-finite diagnostics at t = {:.17g}", s.t));
      break;
    }
  }
  if (ecav && max_entropy_rate > kEntropyRateTolerance) {
    out.push_back(fmt::format("entropy rate {:.6g} exceeds {:.1g}", max_entropy_rate,
                              kEntropyRateTolerance));
  }
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, s.lemma1_residual);
  if (worst > kLemma1Tolerance) {
    out.push_back(fmt::format("dissipation identity residual {:.6g} exceeds {:.1g}", worst,
                              kLemma1Tolerance));
  }
  if (std::isfinite(r_min) && r_min < 1.0 - 1e-10) {
    out.push_back(fmt::format("projection ratio r_k = {:.17g} < 1", r_min));
  }
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].t > samples[i - 1].t)) {
      out.push_back("sample times are not increasing");
      break;
    }
  }
  return out;
}

namespace {

std::vector<std::string> variable_names(Problem p) {
  if (p == Problem::burgers2d) return {"u"};
  if (problem_dimension(p) == 1) return {"rho", "rhou", "E"};
  return {"rho", "rhou", "rhov", "E"};
}

template <class Law>
DiagnosticSample take_sample(Discretization<Law>& disc, const ExperimentConfig& cfg,
                             const Eigen::VectorXd& coeffs, double t, long step,
                             Eigen::VectorXd& scratch) {
  DiagnosticSample s;
  s.t = t;
  s.step = step;
  RhsDiagnostics d;
  disc.rhs(coeffs, scratch, &d);
  s.max_eps = d.max_eps;
  s.entropy_rate = d.entropy_rate;
  const double scale = std::max(std::abs(d.dissipation), std::abs(d.viscous_work));
  s.lemma1_residual = scale > 0.0 ? std::abs(d.viscous_work - d.dissipation) / scale : 0.0;
  SolutionField u = disc.zero_field();
  u.coeffs = coeffs;
  if (cfg.lemma4) {
    const auto r = disc.projection_ratios(u);
    for (double x : r) {
      if (std::isnan(x)) continue;
      s.r_min = std::isnan(s.r_min) ? x : std::min(s.r_min, x);
      s.r_max = std::isnan(s.r_max) ? x : std::max(s.r_max, x);
    }
  }
  if (has_exact_solution(cfg.problem)) {
    const auto [err, norm] = disc.l2_error(u, solution_at<Law>(cfg, t));
    s.l2_error = err;
    s.rel_l2_error = norm > 0.0 ? err / norm : err;
  }
  return s;
}

template <class Law>
std::vector<std::array<double, 3>> schlieren_points(const Discretization<Law>& disc,
                                                    const SolutionField& u) {
  std::vector<std::array<double, 3>> pts;
  std::vector<double> g;
  for (int k = 0; k < disc.num_elements(); ++k) {
    const Eigen::MatrixXd grad = disc.volume_gradient(u, k, 0);
    const Eigen::MatrixXd& x = disc.volume_points(k);
    for (Eigen::Index q = 0; q < grad.rows(); ++q) {
      pts.push_back({x(q, 0), x(q, 1), 0.0});
      g.push_back(grad.row(q).norm());
    }
  }
  const std::vector<double> v = schlieren_values(g);
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i][2] = v[i];
  return pts;
}

template <class Law>
void write_field_csv(std::ostream& os, const Discretization<Law>& disc, const SolutionField& u,
                     const std::vector<std::string>& names) {
  fmt::print(os, "element,x,y");
  for (const auto& n : names) fmt::print(os, ",{}", n);
  fmt::print(os, "\n");
  for (int k = 0; k < disc.num_elements(); ++k) {
    const Eigen::MatrixXd vals = disc.volume_values(u, k);
    const Eigen::MatrixXd& x = disc.volume_points(k);
    for (Eigen::Index q = 0; q < vals.rows(); ++q) {
      fmt::print(os, "{},{:.17g},{:.17g}", k, x(q, 0), x(q, 1));
      for (Eigen::Index i = 0; i < vals.cols(); ++i) fmt::print(os, ",{:.17g}", vals(q, i));
      fmt::print(os, "\n");
    }
  }
}

template <class Law>
void run_impl(Discretization<Law>& disc, const ExperimentConfig& cfg, DiagnosticsRecord& rec) {
  SolutionField u = disc.project(solution_at<Law>(cfg, 0.0));
  Eigen::VectorXd coeffs = u.coeffs;
  Eigen::VectorXd scratch(coeffs.size());

  auto record = [&](double t, const Eigen::VectorXd& c, long step) {
    rec.samples.push_back(take_sample(disc, cfg, c, t, step, scratch));
    return true;
  };

  IntegratorConfig tc = cfg.time;
  tc.callback_every = cfg.record_every;
  const RhsFunction rhs = [&](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
    disc.rhs(x, dx);
  };

  try {
    record(0.0, coeffs, 0);
    rec.stats = integrate(rhs, coeffs, 0.0, tc, record, &rec.steps);
    rec.completed = true;
    rec.final_time = rec.stats.t;
  } catch (const std::exception& e) {
    rec.failure = e.what();
    rec.final_time = rec.samples.empty() ? 0.0 : rec.samples.back().t;
    rec.stats.accepted = std::count_if(rec.steps.begin(), rec.steps.end(),
                                       [](const StepRecord& s) { return s.accepted; });
    rec.stats.rejected = static_cast<long>(rec.steps.size()) - rec.stats.accepted;
  }
  if (rec.completed && (rec.samples.empty() || rec.samples.back().t < rec.final_time)) {
    try {
      record(rec.final_time, coeffs, rec.stats.accepted);
    } catch (const std::exception& e) {
      rec.completed = false;
      rec.failure = e.what();
    }
  }
  rec.final_state = disc.zero_field();
  rec.final_state.coeffs = coeffs;

  for (const auto& s : rec.samples) {
    rec.max_eps = std::max(rec.max_eps, s.max_eps);
    rec.max_entropy_rate = std::max(rec.max_entropy_rate, s.entropy_rate);
    if (!std::isnan(s.r_min)) rec.r_min = std::isnan(rec.r_min) ? s.r_min : std::min(rec.r_min, s.r_min);
    if (!std::isnan(s.r_max)) rec.r_max = std::isnan(rec.r_max) ? s.r_max : std::max(rec.r_max, s.r_max);
  }
  if (rec.completed && !rec.samples.empty()) {
    rec.l2_error = rec.samples.back().l2_error;
    rec.rel_l2_error = rec.samples.back().rel_l2_error;
  }
  if constexpr (Law::dim == 2 && Law::nvars == 4) {
    if (cfg.schlieren) rec.schlieren = schlieren_points(disc, rec.final_state);
  }

  if (!cfg.output_dir.empty()) {
    const fs::path dir(cfg.output_dir);
    std::ofstream f(dir / "field.csv");
    write_field_csv(f, disc, rec.final_state, variable_names(cfg.problem));
    std::ofstream m(dir / "mesh.txt");
    write_mesh_summary(m, disc.mesh());
  }
}

void write_outputs(const DiagnosticsRecord& rec) {
  const auto& cfg = rec.config;
  const fs::path dir(cfg.output_dir);
  save_config((dir / "config.ini").string(), cfg);
  {
    std::ofstream f(dir / "timeseries.csv");
    write_timeseries_csv(f, rec);
  }
  if (has_exact_solution(cfg.problem)) {
    std::ofstream f(dir / "errors.csv");
    write_errors_csv(f, rec);
  }
  {
    std::ofstream f(dir / "steps.csv");
    write_step_log(f, rec.steps);
  }
  if (!rec.schlieren.empty()) {
    std::ofstream f(dir / "schlieren.csv");
    fmt::print(f, "x,y,schlieren\n");
    for (const auto& p : rec.schlieren) fmt::print(f, "{:.17g},{:.17g},{:.17g}\n", p[0], p[1], p[2]);
  }
  nlohmann::ordered_json j;
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(); };
  j["preset"] = cfg.name;
  j["problem"] = std::string(to_string(cfg.problem));
  j["completed"] = rec.completed;
  j["failure"] = rec.failure;
  j["final_time"] = rec.final_time;
  j["accepted_steps"] = rec.stats.accepted;
  j["rejected_steps"] = rec.stats.rejected;
  j["rhs_evaluations"] = rec.stats.rhs_evaluations;
  j["l2_error"] = num(rec.l2_error);
  j["relative_l2_error"] = num(rec.rel_l2_error);
  j["max_eps"] = rec.max_eps;
  j["max_entropy_rate"] = num(rec.max_entropy_rate);
  j["r_min"] = num(rec.r_min);
  j["r_max"] = num(rec.r_max);
  j["wall_seconds"] = rec.wall_seconds;
  j["violations"] = rec.violations();
  std::ofstream f(dir / "summary.json");
  f << j.dump(2) << "\n";
}

}  // namespace

DiagnosticsRecord run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.output_dir.empty()) fs::create_directories(cfg.output_dir);
  DiagnosticsRecord rec;
  rec.config = cfg;
  const auto start = std::chrono::steady_clock::now();
  dispatch(cfg, [&](auto& disc) { run_impl(disc, cfg, rec); });
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!cfg.output_dir.empty()) write_outputs(rec);
  return rec;
}

double l2_distance(const ExperimentConfig& cfg, const SolutionField& a, const SolutionField& b) {
  if (a.coeffs.size() != b.coeffs.size()) throw std::invalid_argument("l2_distance: size mismatch");
  return dispatch(cfg, [&](auto& disc) {
    double total = 0.0;
    const Eigen::MatrixXd& M = disc.ref().M;
    for (int k = 0; k < disc.num_elements(); ++k) {
      const Eigen::MatrixXd d = a.element(k) - b.element(k);
      total += disc.jacobian(k) * (d.cwiseProduct(M * d)).sum();
    }
    return std::sqrt(total);
  });
}

std::vector<ConvergenceRow> convergence_study(const ExperimentConfig& base,
                                              const std::vector<int>& Ns,
                                              const std::vector<int>& Ks) {
  if (!has_exact_solution(base.problem)) {
    throw ConfigError(fmt::format("problem '{}' has no exact solution", to_string(base.problem)));
  }
  std::vector<ConvergenceRow> rows;
  for (int N : Ns) {
    double prev_err = kNaN;
    int prev_K = 0;
    for (int K : Ks) {
      ExperimentConfig c = base;
      c.N = N;
      c.K = K;
      if (base.Ky > 0) c.Ky = std::max(2, static_cast<int>(std::lround(double(base.Ky) * K / base.K)));
      c.record_every = std::numeric_limits<int>::max() / 2;
      c.lemma4 = false;
      c.output_dir = base.output_dir.empty()
                         ? std::string()
                         : (fs::path(base.output_dir) / fmt::format("N{}_K{}", N, K)).string();
      const DiagnosticsRecord rec = run_experiment(c);
      if (!rec.completed) {
        throw IntegrationError(fmt::format("convergence run N={} K={} failed: {}", N, K, rec.failure));
      }
      ConvergenceRow row;
      row.N = N;
      row.K = K;
      row.l2_error = rec.rel_l2_error;
      row.steps = rec.stats.accepted;
      row.seconds = rec.wall_seconds;
      if (prev_K > 0) row.order = std::log(prev_err / row.l2_error) / std::log(double(K) / prev_K);
      prev_err = row.l2_error;
      prev_K = K;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  fmt::print(os, "N,K,l2_error,order,accepted_steps,seconds\n");
  for (const auto& r : rows) {
    fmt::print(os, "{},{},{:.17g},{},{},{:.6g}\n", r.N, r.K, r.l2_error,
               std::isnan(r.order) ? std::string() : fmt::format("{:.17g}", r.order), r.steps,
               r.seconds);
  }
}

Comparison compare_runs(const ExperimentConfig& a, const ExperimentConfig& b) {
  if (a.problem != b.problem || a.N != b.N || a.K != b.K || a.ky() != b.ky() ||
      a.formulation != b.formulation || a.lower != b.lower || a.upper != b.upper) {
    throw ConfigError("compare: both runs must share problem, mesh, degree and formulation");
  }
  Comparison c;
  c.a = run_experiment(a);
  c.b = run_experiment(b);
  if (c.a.completed && c.b.completed) c.difference_norm = l2_distance(a, c.a.final_state, c.b.final_state);
  return c;
}

namespace {

double interpolate(const std::vector<DiagnosticSample>& s, double t,
                   double DiagnosticSample::*field) {
  if (s.empty()) return kNaN;
  auto it = std::lower_bound(s.begin(), s.end(), t,
                             [](const DiagnosticSample& x, double v) { return x.t < v; });
  if (it == s.end()) return s.back().*field;
  if (it->t == t || it == s.begin()) return (*it).*field;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return (1.0 - w) * (lo.*field) + w * (hi.*field);
}

}  // namespace

void write_comparison_csv(std::ostream& os, const Comparison& c) {
  fmt::print(os,
             "t,max_eps_a,max_eps_b,entropy_rate_a,entropy_rate_b,l2_error_a,l2_error_b\n");
  const auto& sa = c.a.samples;
  const auto& sb = c.b.samples;
  if (sa.empty() || sb.empty()) return;
  const double t0 = std::max(sa.front().t, sb.front().t);
  const double t1 = std::min(sa.back().t, sb.back().t);
  std::set<double> times;
  for (const auto& s : sa)
    if (s.t >= t0 && s.t <= t1) times.insert(s.t);
  for (const auto& s : sb)
    if (s.t >= t0 && s.t <= t1) times.insert(s.t);
  for (double t : times) {
    fmt::print(os, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", t,
               interpolate(sa, t, &DiagnosticSample::max_eps),
               interpolate(sb, t, &DiagnosticSample::max_eps),
               interpolate(sa, t, &DiagnosticSample::entropy_rate),
               interpolate(sb, t, &DiagnosticSample::entropy_rate),
               interpolate(sa, t, &DiagnosticSample::l2_error),
               interpolate(sb, t, &DiagnosticSample::l2_error));
  }
}

void write_comparison_summary_csv(std::ostream& os, const Comparison& c) {
  fmt::print(os, "run,visc,completed,accepted_steps,rejected_steps,l2_error,rel_l2_error,max_eps,difference_norm\n");
  for (const auto* r : {&c.a, &c.b}) {
    fmt::print(os, "{},{},{},{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", r == &c.a ? "a" : "b",
               to_string(r->config.visc), r->completed ? 1 : 0, r->stats.accepted,
               r->stats.rejected, r->l2_error, r->rel_l2_error, r->max_eps, c.difference_norm);
  }
}

std::vector<double> schlieren_values(const std::vector<double>& g) {
  std::vector<double> out(g.size(), 1.0);
  if (g.empty()) return out;
  const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
  const double gmin = *lo, gmax = *hi;
  if (!(gmax > gmin)) return out;
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::exp(-10.0 * (g[i] - gmin) / (gmax - gmin));
  return out;
}

void write_timeseries_csv(std::ostream& os, const DiagnosticsRecord& rec) {
  fmt::print(os, "t,max_eps,entropy_rate,lemma1_residual,r_min,r_max\n");
  for (const auto& s : rec.samples) {
    fmt::print(os, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", s.t, s.max_eps,
               s.entropy_rate, s.lemma1_residual, s.r_min, s.r_max);
  }
}

void write_errors_csv(std::ostream& os, const DiagnosticsRecord& rec) {
  fmt::print(os, "t,l2_error,rel_l2_error\n");
  for (const auto& s : rec.samples) {
    fmt::print(os, "{:.17g},{:.17g},{:.17g}\n", s.t, s.l2_error, s.rel_l2_error);
  }
}

}  // namespace ecavdg
