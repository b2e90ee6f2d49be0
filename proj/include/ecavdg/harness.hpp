#pragma once

#include <array>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "ecavdg/config.hpp"
#include "ecavdg/field.hpp"
#include "ecavdg/timeint.hpp"

namespace ecavdg {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct DiagnosticSample {
  long step = 0;
  double t = 0.0;
  double max_eps = 0.0;
  double entropy_rate = 0.0;     // sum_k (du/dt, vh)
  double lemma1_residual = 0.0;  // |-sum(g, vh) - sum eps b| / max(sum eps b, tiny)
  double r_min = kNaN;
  double r_max = kNaN;
  double l2_error = kNaN;
  double rel_l2_error = kNaN;
};

struct DiagnosticsRecord {
  ExperimentConfig config;
  std::vector<DiagnosticSample> samples;
  std::vector<StepRecord> steps;
  IntegrationStats stats;
  bool completed = false;
  std::string failure;
  double final_time = 0.0;
  double l2_error = kNaN;      // at the final time, when an exact solution exists
  double rel_l2_error = kNaN;
  double max_eps = 0.0;        // over all samples
  double max_entropy_rate = -std::numeric_limits<double>::infinity();
  double r_min = kNaN;
  double r_max = kNaN;
  double wall_seconds = 0.0;
  SolutionField final_state;
  std::vector<std::array<double, 3>> schlieren;  // x, y, value at the final time

  /// Invariant violations (empty when the run is clean).
  std::vector<std::string> violations() const;
};

inline constexpr double kEntropyRateTolerance = 1e-10;
inline constexpr double kLemma1Tolerance = 1e-8;

/// Runs one experiment. Artifacts are written to config.output_dir when it
/// is non-empty (created if needed). Solver failures are recorded, not
/// thrown; configuration errors throw ConfigError.
DiagnosticsRecord run_experiment(const ExperimentConfig& cfg);

/// L2 distance between two fields of the same configuration, over all
/// conservative variables.
double l2_distance(const ExperimentConfig& cfg, const SolutionField& a, const SolutionField& b);

struct ConvergenceRow {
  int N = 0;
  int K = 0;
  double l2_error = 0.0;  // relative
  double order = kNaN;
  long steps = 0;
  double seconds = 0.0;
};

/// h-refinement study; order = log2(e_K / e_2K) scaled by log(K2/K1).
std::vector<ConvergenceRow> convergence_study(const ExperimentConfig& base,
                                              const std::vector<int>& Ns,
                                              const std::vector<int>& Ks);
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

struct Comparison {
  DiagnosticsRecord a;
  DiagnosticsRecord b;
  double difference_norm = kNaN;  // ||u_a - u_b|| at the final time
};

/// Runs both configurations (same problem, mesh and degree required).
Comparison compare_runs(const ExperimentConfig& a, const ExperimentConfig& b);
/// Aligned series: both records linearly interpolated to the union of their
/// sample times (restricted to the common time span).
void write_comparison_csv(std::ostream& os, const Comparison& c);
/// One row per run (step counts, final error, max eps) plus the difference norm.
void write_comparison_summary_csv(std::ostream& os, const Comparison& c);

/// rho^schl = exp(-10 (g - gmin)/(gmax - gmin)); 1 everywhere if gmax == gmin.
std::vector<double> schlieren_values(const std::vector<double>& g);

void write_timeseries_csv(std::ostream& os, const DiagnosticsRecord& rec);
void write_errors_csv(std::ostream& os, const DiagnosticsRecord& rec);

}  // namespace ecavdg
