#include "ecavdg/timeint.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ecavdg/errors.hpp"

namespace ecavdg {

std::string_view to_string(TimeMethod m) {
  switch (m) {
    case TimeMethod::ssprk43: return "ssprk43";
    case TimeMethod::rk5_adaptive: return "rk5_adaptive";
    case TimeMethod::ssprk43_fixed: return "ssprk43_fixed";
    case TimeMethod::rk4_fixed: return "rk4_fixed";
  }
  return "?";
}

TimeMethod parse_time_method(std::string_view s) {
  if (s == "ssprk43") return TimeMethod::ssprk43;
  if (s == "rk5_adaptive" || s == "rk5") return TimeMethod::rk5_adaptive;
  if (s == "ssprk43_fixed") return TimeMethod::ssprk43_fixed;
  if (s == "rk4_fixed" || s == "rk4") return TimeMethod::rk4_fixed;
  throw std::invalid_argument("unknown time integration method '" + std::string(s) + "'");
}

bool is_adaptive(TimeMethod m) {
  return m == TimeMethod::ssprk43 || m == TimeMethod::rk5_adaptive;
}

void IntegratorConfig::validate() const {
  if (!(abstol > 0.0) || !(reltol > 0.0)) throw std::invalid_argument("tolerances must be > 0");
  if (!(dt_min > 0.0) || !(dt_min <= dt_max)) throw std::invalid_argument("need 0 < dt_min <= dt_max");
  if (!is_adaptive(method) && !(dt_init > 0.0)) {
    throw std::invalid_argument("fixed-step methods need dt > 0");
  }
  if (callback_every < 1) throw std::invalid_argument("callback cadence must be >= 1");
}

namespace {

class Stepper {
 public:
  Stepper(const RhsFunction& rhs, TimeMethod method, Eigen::Index n) : rhs_(rhs), method_(method) {
    for (auto& k : k_) k.resize(n);
    tmp_.resize(n);
  }

  long evaluations() const { return evals_; }

  /// One step of size h from (t, u) into unew; err receives unew - uhat for
  /// embedded methods.
  void step(double t, const Eigen::VectorXd& u, double h, Eigen::VectorXd& unew,
            Eigen::VectorXd* err) {
    switch (method_) {
      case TimeMethod::ssprk43:
      case TimeMethod::ssprk43_fixed: ssprk43(t, u, h, unew, err); break;
      case TimeMethod::rk4_fixed: rk4(t, u, h, unew); break;
      case TimeMethod::rk5_adaptive: dopri5(t, u, h, unew, err); break;
    }
  }

  void invalidate_fsal() { fsal_valid_ = false; }
  void accept_fsal() {
    if (method_ == TimeMethod::rk5_adaptive) {
      std::swap(k_[0], k_[6]);
      fsal_valid_ = true;
    }
  }

 private:
  void eval(double t, const Eigen::VectorXd& u, Eigen::VectorXd& k) {
    rhs_(t, u, k);
    ++evals_;
  }

  void ssprk43(double t, const Eigen::VectorXd& u, double h, Eigen::VectorXd& unew,
               Eigen::VectorXd* err) {
    auto& k1 = k_[0];
    auto& k2 = k_[1];
    auto& k3 = k_[2];
    auto& k4 = k_[3];
    eval(t, u, k1);
    tmp_ = u + 0.5 * h * k1;
    eval(t + 0.5 * h, tmp_, k2);
    tmp_ += 0.5 * h * k2;
    eval(t + h, tmp_, k3);
    tmp_ = u + (h / 6.0) * (k1 + k2 + k3);
    eval(t + 0.5 * h, tmp_, k4);
    unew = tmp_ + 0.5 * h * k4;
    if (err) *err = h * (0.25 * k4 - (k1 + k2 + k3) / 12.0);
  }

  void rk4(double t, const Eigen::VectorXd& u, double h, Eigen::VectorXd& unew) {
    auto& k1 = k_[0];
    auto& k2 = k_[1];
    auto& k3 = k_[2];
    auto& k4 = k_[3];
    eval(t, u, k1);
    tmp_ = u + 0.5 * h * k1;
    eval(t + 0.5 * h, tmp_, k2);
    tmp_ = u + 0.5 * h * k2;
    eval(t + 0.5 * h, tmp_, k3);
    tmp_ = u + h * k3;
    eval(t + h, tmp_, k4);
    unew = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  void dopri5(double t, const Eigen::VectorXd& u, double h, Eigen::VectorXd& unew,
              Eigen::VectorXd* err) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    auto& k = k_;
    if (!fsal_valid_) eval(t, u, k[0]);
    fsal_valid_ = false;
    tmp_ = u + h * a21 * k[0];
    eval(t + c2 * h, tmp_, k[1]);
    tmp_ = u + h * (a31 * k[0] + a32 * k[1]);
    eval(t + c3 * h, tmp_, k[2]);
    tmp_ = u + h * (a41 * k[0] + a42 * k[1] + a43 * k[2]);
    eval(t + c4 * h, tmp_, k[3]);
    tmp_ = u + h * (a51 * k[0] + a52 * k[1] + a53 * k[2] + a54 * k[3]);
    eval(t + c5 * h, tmp_, k[4]);
    tmp_ = u + h * (a61 * k[0] + a62 * k[1] + a63 * k[2] + a64 * k[3] + a65 * k[4]);
    eval(t + h, tmp_, k[5]);
    unew = u + h * (b1 * k[0] + b3 * k[2] + b4 * k[3] + b5 * k[4] + b6 * k[5]);
    eval(t + h, unew, k[6]);
    if (err) {
      *err = h * (e1 * k[0] + e3 * k[2] + e4 * k[3] + e5 * k[4] + e6 * k[5] + e7 * k[6]);
    }
  }

  const RhsFunction& rhs_;
  TimeMethod method_;
  std::array<Eigen::VectorXd, 7> k_;
  Eigen::VectorXd tmp_;
  long evals_ = 0;
  bool fsal_valid_ = false;
};

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1,
                  double abstol, double reltol) {
  if (err.size() == 0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = abstol + reltol * std::max(std::abs(u0(i)), std::abs(u1(i)));
    const double r = err(i) / sc;
    sum += r * r;
  }
  const double e = std::sqrt(sum / static_cast<double>(err.size()));
  return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
}

/// Starting step size (Hairer, Norsett & Wanner, II.4).
double initial_step(const RhsFunction& rhs, const Eigen::VectorXd& u, double t, double T,
                    int order, const IntegratorConfig& cfg, long& evals) {
  Eigen::VectorXd f0(u.size()), f1(u.size());
  try {
    rhs(t, u, f0);
  } catch (const AdmissibilityError& e) {
    throw IntegrationError(fmt::format("initial state rejected at t = {:.17g}: {}", t, e.what()));
  }
  ++evals;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(u.size());
  const double d0 = error_norm(u, u, zero, cfg.abstol, cfg.reltol);
  const double d1 = error_norm(f0, u, zero, cfg.abstol, cfg.reltol);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min({h0, T - t, cfg.dt_max});
  const Eigen::VectorXd u1 = u + h0 * f0;
  try {
    rhs(t + h0, u1, f1);
  } catch (const AdmissibilityError&) {
    return h0;
  }
  ++evals;
  const double d2 = error_norm(f1 - f0, u, zero, cfg.abstol, cfg.reltol) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, 1e-3 * h0)
                                : std::pow(0.01 / dm, 1.0 / (order + 1));
  return std::min({100.0 * h0, h1, T - t, cfg.dt_max});
}

bool notify(const StepCallback& cb, double t, const Eigen::VectorXd& u, long n, int every,
            bool final_step) {
  if (!cb) return true;
  if (n % every != 0 && !final_step) return true;
  return cb(t, u, n);
}

}  // namespace

IntegrationStats integrate(const RhsFunction& rhs, Eigen::VectorXd& u, double t0,
                           const IntegratorConfig& cfg, const StepCallback& callback,
                           std::vector<StepRecord>* log) {
  cfg.validate();
  if (!is_adaptive(cfg.method)) {
    return integrate_fixed(rhs, u, t0, cfg.t_final, cfg.dt_init, cfg.method, callback,
                           cfg.callback_every, log);
  }
  const double T = cfg.t_final;
  IntegrationStats stats;
  stats.t = t0;
  if (!(T > t0)) return stats;

  const int order = cfg.method == TimeMethod::rk5_adaptive ? 4 : 2;
  const double q = order + 1.0;
  const double beta1 = 0.7 / q, beta2 = 0.4 / q;

  Stepper stepper(rhs, cfg.method, u.size());
  long extra_evals = 0;
  double dt = cfg.dt_init > 0.0 ? cfg.dt_init : initial_step(rhs, u, t0, T, order, cfg, extra_evals);
  double err_prev = 1.0;
  double t = t0;
  Eigen::VectorXd unew(u.size()), err(u.size());

  while (t < T) {
    if (stats.accepted >= cfg.max_steps) {
      throw IntegrationError(fmt::format("maximum number of accepted steps ({}) reached at t = {:.17g}",
                                         cfg.max_steps, t));
    }
    double h = std::min(dt, cfg.dt_max);
    const bool landing = h >= T - t;
    if (landing) h = T - t;
    if (h < cfg.dt_min && !landing) {
      throw IntegrationError(fmt::format(
          "step size {:.6g} fell below dt_min = {:.6g} at t = {:.17g}", h, cfg.dt_min, t));
    }

    double e;
    try {
      stepper.step(t, u, h, unew, &err);
      e = unew.allFinite() ? error_norm(err, u, unew, cfg.abstol, cfg.reltol)
                           : std::numeric_limits<double>::infinity();
    } catch (const AdmissibilityError&) {
      e = std::numeric_limits<double>::infinity();
    }

    if (e <= 1.0) {
      u.swap(unew);
      t = landing ? T : t + h;
      ++stats.accepted;
      stepper.accept_fsal();
      if (log) log->push_back({stats.accepted + stats.rejected, t, h, true, e});
      const double e_safe = std::max(e, 1e-10);
      double fac = cfg.safety * std::pow(e_safe, -beta1) * std::pow(err_prev, beta2);
      fac = std::clamp(fac, 0.2, 5.0);
      err_prev = std::max(e, 1e-4);
      if (!landing || h >= dt) dt = h * fac;
      if (!notify(callback, t, u, stats.accepted, cfg.callback_every, t >= T)) break;
    } else {
      ++stats.rejected;
      stepper.invalidate_fsal();
      if (log) log->push_back({stats.accepted + stats.rejected, t, h, false, e});
      const double fac = std::isfinite(e) ? std::max(0.2, cfg.safety * std::pow(e, -1.0 / q)) : 0.25;
      dt = h * fac;
    }
  }
  stats.t = t;
  stats.rhs_evaluations = stepper.evaluations() + extra_evals;
  return stats;
}

IntegrationStats integrate_fixed(const RhsFunction& rhs, Eigen::VectorXd& u, double t0,
                                 double t_final, double dt, TimeMethod method,
                                 const StepCallback& callback, int callback_every,
                                 std::vector<StepRecord>* log) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_fixed: dt must be > 0");
  if (method == TimeMethod::ssprk43) method = TimeMethod::ssprk43_fixed;
  if (method == TimeMethod::rk5_adaptive) {
    throw std::invalid_argument("rk5_adaptive has no fixed-step mode");
  }
  IntegrationStats stats;
  stats.t = t0;
  const double span = t_final - t0;
  if (!(span > 0.0)) return stats;

  long n = static_cast<long>(std::llround(span / dt));
  double h = dt;
  double last = dt;
  if (std::abs(n * dt - span) <= 1e-10 * span) {
    h = span / static_cast<double>(n);
    last = h;
  } else {
    n = static_cast<long>(std::floor(span / dt)) + 1;
    last = span - (n - 1) * dt;
  }

  Stepper stepper(rhs, method, u.size());
  Eigen::VectorXd unew(u.size());
  double t = t0;
  for (long s = 0; s < n; ++s) {
    const double hs = s + 1 == n ? last : h;
    stepper.step(t, u, hs, unew, nullptr);
    if (!unew.allFinite()) {
      throw IntegrationError(fmt::format("non-finite state after step {} at t = {:.17g}", s + 1, t));
    }
    u.swap(unew);
    t = s + 1 == n ? t_final : t0 + (s + 1) * h;
    ++stats.accepted;
    if (log) log->push_back({stats.accepted, t, hs, true, 0.0});
    if (!notify(callback, t, u, stats.accepted, callback_every, s + 1 == n)) break;
  }
  stats.t = t;
  stats.rhs_evaluations = stepper.evaluations();
  return stats;
}

void write_step_log(std::ostream& os, const std::vector<StepRecord>& log) {
  fmt::print(os, "step,t,dt,accepted,err_estimate\n");
  for (const auto& r : log) {
    fmt::print(os, "{},{:.17g},{:.17g},{},{:.17g}\n", r.step, r.t, r.dt, r.accepted ? 1 : 0,
               r.error);
  }
}

}  // namespace ecavdg
