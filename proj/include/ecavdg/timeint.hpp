#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ecavdg {

enum class TimeMethod { ssprk43, rk5_adaptive, ssprk43_fixed, rk4_fixed };

std::string_view to_string(TimeMethod m);
TimeMethod parse_time_method(std::string_view s);
bool is_adaptive(TimeMethod m);

struct IntegratorConfig {
  TimeMethod method = TimeMethod::ssprk43;
  double abstol = 1e-6;
  double reltol = 1e-4;
  double dt_init = 0.0;  // <= 0: automatic first guess (adaptive) ; required for fixed
  double dt_min = 1e-14;
  double dt_max = std::numeric_limits<double>::infinity();
  double t_final = 0.0;
  double safety = 0.9;
  long max_steps = 10'000'000;  // accepted steps
  int callback_every = 1;  // callback after every n-th accepted step (and at t_final)

  void validate() const;
};

struct StepRecord {
  long step = 0;
  double t = 0.0;  // time at the end of an accepted step, start time of a rejected one
  double dt = 0.0;
  bool accepted = false;
  double error = 0.0;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
  double t = 0.0;
};

/// du/dt = rhs(t, u). May throw AdmissibilityError for inadmissible stages;
/// adaptive methods treat that as a rejected step.
using RhsFunction = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;
/// Called with (t, u, accepted step count). Returning false stops the march.
using StepCallback = std::function<bool(double, const Eigen::VectorXd&, long)>;

/// Advances u from t0 to cfg.t_final. u holds the last accepted state even
/// when an IntegrationError is thrown (dt below dt_min, non-finite state).
IntegrationStats integrate(const RhsFunction& rhs, Eigen::VectorXd& u, double t0,
                           const IntegratorConfig& cfg, const StepCallback& callback = {},
                           std::vector<StepRecord>* log = nullptr);

/// Fixed-step march with SSPRK43 stages (or classic RK4). A final shorter
/// step is taken only when dt does not divide the interval.
IntegrationStats integrate_fixed(const RhsFunction& rhs, Eigen::VectorXd& u, double t0,
                                 double t_final, double dt, TimeMethod method,
                                 const StepCallback& callback = {}, int callback_every = 1,
                                 std::vector<StepRecord>* log = nullptr);

void write_step_log(std::ostream& os, const std::vector<StepRecord>& log);

}  // namespace ecavdg
