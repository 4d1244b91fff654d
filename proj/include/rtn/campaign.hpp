#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtn/rand_gauss.hpp"

namespace rtn {

enum class ExperimentKind {
  mps_gap,
  peps_gap,
  peps_gap_independent,
  parent_gap_mps,
  parent_gap_peps,
  correlations,
  expander,
  wishart_check,
  overlap_check,
  trace_check,
  peps_cp_check
};

std::string to_string(ExperimentKind k);
ExperimentKind parse_experiment(const std::string& s);
std::vector<ExperimentKind> all_experiments();

struct Tolerances {
  double trace_eps = 0.1;          // trace_check: threshold (1 + eps)^2
  double overlap_tol = 0.01;       // overlap_check: |mean - 1|
  double ground_energy = 1e-6;     // parent gaps
  double tp_residual = 1e-10;      // expander
  double expander_eps = 0.1;       // expander: |lambda_2| ceiling
  double purity_factor = 2.0;      // expander: purity <= factor / D
  double fit_rel = 0.15;           // correlations: fitted rate vs -ln|lambda2/lambda1|
  double fixed_point_tol = 1e-12;  // expander iteration
  double peps_cp_fallback = 0.5;   // peps_cp: lambda_min floor when the bound is vacuous
};

struct TrialPoint {
  int d = 0, D = 0, N = 0;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::mps_gap;
  int d = 0, D = 0, N = 0;
  int trials = 1;
  std::uint64_t master_seed = 0;
  int threads = 1;
  Tolerances tol;
  std::string sweep_param;  // "", "d", "D" or "N"
  std::vector<int> sweep_values;
  std::string output_dir = ".";

  std::vector<TrialPoint> points() const;
  void validate() const;  // throws InvalidParameter
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

// ---- experiments ---------------------------------------------------------------

struct TrialOutput {
  std::vector<double> values;                  // one per experiment column
  std::vector<std::vector<double>> long_rows;  // detail rows without the leading seed column
};

std::vector<std::string> experiment_columns(ExperimentKind k);
// detail table (empty if none), e.g. correlation profiles
std::vector<std::string> experiment_long_columns(ExperimentKind k);
TrialOutput run_trial(ExperimentKind k, const TrialPoint& p, const SeedSpec& seed, const Tolerances& tol);

// ---- campaign ------------------------------------------------------------------

struct TrialRecord {
  std::uint64_t trial_index = 0;
  std::uint64_t derived_seed = 0;
  TrialPoint point;
  std::vector<double> values;
  std::vector<std::vector<double>> long_rows;
  bool flagged = false;
  std::string flag_reason;
  double wall_time_ms = 0.0;
};

struct CampaignResult {
  std::vector<TrialRecord> records;
  nlohmann::json summary;
  bool failed = false;
  std::string csv_path, long_csv_path, summary_path, timing_path;
};

// Runs every trial (parallel over trials, results ordered by trial index) and writes
// <experiment>.csv, optional <experiment>_detail.csv, <experiment>_summary.json and
// <experiment>_timing.csv into output_dir. Only the timing file depends on the machine.
CampaignResult run_campaign(const ExperimentConfig& c, bool write_files = true);

std::string records_to_csv(const ExperimentConfig& c, const std::vector<TrialRecord>& records);
// Round-trip formatting used for every real written to CSV.
std::string format_real(double v);

// Monte Carlo margin 2 sqrt(p(1-p)/n) + 0.01
double mc_margin(double p, int n);

}  // namespace rtn
