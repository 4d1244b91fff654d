#pragma once

#include <map>
#include <string>
#include <vector>

namespace rtn {

// Closed-form bound expressions with every stated numeric constant. Bounds that
// involve unspecified universal constants are reported structurally: computable
// is false, value is NaN, and `form` / `exponent` describe the dependence.
struct BoundReport {
  std::string name;
  bool computable = false;
  double value = 0.0;              // threshold or gap lower bound
  bool probability_known = false;  // false when the probability involves unknown constants
  double probability_raw = 0.0;    // failure-probability expression before clamping
  double probability_bound = 1.0;  // clamped to [0, 1]
  bool vacuous = true;             // probability >= 1, unknown, or gap expression <= 0
  std::string claim;               // "high_probability", "expectation", "structural"
  std::string form;
  double exponent = 0.0;           // D-exponent for structural forms
  std::map<std::string, double> inputs;
};

// kinds: mps_gap, wishart, mps_cp, mps_1, mps_2, trace_t, peps_cp, peps_1, peps_2, peps_gap,
// gap_h, gap_h_peps, p_pi, pi_commute, pi_commute_peps, correlation_decay
// params by name: d, D, N, n, s, eps
BoundReport bound_table(const std::string& kind, const std::map<std::string, double>& params);
std::vector<std::string> bound_kinds();

}  // namespace rtn
