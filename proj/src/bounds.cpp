#include "rtn/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rtn/types.hpp"

namespace rtn {

namespace {

double need(const std::map<std::string, double>& p, const char* key) {
  auto it = p.find(key);
  if (it == p.end()) throw InvalidParameter(std::string("bound_table: missing parameter '") + key + "'");
  if (!std::isfinite(it->second)) throw InvalidParameter(std::string("bound_table: non-finite '") + key + "'");
  return it->second;
}

void set_probability(BoundReport& r, double raw) {
  r.probability_known = true;
  r.probability_raw = raw;
  r.probability_bound = std::clamp(raw, 0.0, 1.0);
  r.vacuous = raw >= 1.0;
}

void structural(BoundReport& r, std::string form, double exponent) {
  r.claim = "structural";
  r.computable = false;
  r.value = std::numeric_limits<double>::quiet_NaN();
  r.probability_known = false;
  r.vacuous = true;
  r.form = std::move(form);
  r.exponent = exponent;
}

}  // namespace

std::vector<std::string> bound_kinds() {
  return {"mps_gap", "wishart", "mps_cp",  "mps_1", "mps_2",      "trace_t", "peps_cp",         "peps_1",
          "peps_2",  "peps_gap", "gap_h",  "gap_h_peps", "p_pi", "pi_commute", "pi_commute_peps", "correlation_decay"};
}

BoundReport bound_table(const std::string& kind, const std::map<std::string, double>& p) {
  BoundReport r;
  r.name = kind;
  r.inputs = p;
  r.claim = "high_probability";
  if (kind == "mps_gap") {
    const double d = need(p, "d"), D = need(p, "D");
    r.computable = true;
    r.value = 1.0 - 95.0 / std::sqrt(d);
    r.form = "Delta(T) >= 1 - 95/sqrt(d)";
    set_probability(r, 10.0 * std::exp(-D / 72.0));
    if (r.value <= 0.0) r.vacuous = true;
  } else if (kind == "wishart") {
    const double n = need(p, "n"), s = need(p, "s");
    r.computable = true;
    r.value = 6.0 * std::sqrt(n / s);
    r.form = "||W/s - Id|| <= 6 sqrt(n/s)";
    set_probability(r, 2.0 * std::exp(-n / 4.0));
  } else if (kind == "mps_cp") {
    const double d = need(p, "d"), D = need(p, "D");
    r.computable = true;
    r.value = 6.0 / std::sqrt(d);
    r.form = "||T(Id) - Id|| <= 6/sqrt(d)";
    set_probability(r, 2.0 * std::exp(-D / 4.0));
  } else if (kind == "mps_1") {
    r.claim = "expectation";
    r.computable = true;
    r.value = 1.0;
    r.form = "E <psi|T|psi> = 1";
    r.probability_known = true;
    r.probability_raw = 0.0;
    r.probability_bound = 0.0;
    r.vacuous = false;
  } else if (kind == "mps_2") {
    const double d = need(p, "d");
    r.claim = "expectation";
    r.computable = true;
    r.value = 40.0 / std::sqrt(d);
    r.form = "E ||T(Id - psi psi*)|| <= 40/sqrt(d)";
    r.probability_known = true;
    r.probability_raw = 0.0;
    r.probability_bound = 0.0;
    r.vacuous = false;
  } else if (kind == "trace_t") {
    const double d = need(p, "d"), eps = need(p, "eps");
    r.computable = true;
    r.value = (1.0 + eps) * (1.0 + eps);
    r.form = "Tr(T) <= (1 + eps)^2";
    set_probability(r, std::exp(-d * eps * eps));
  } else if (kind == "peps_cp") {
    const double d = need(p, "d"), D = need(p, "D"), N = need(p, "N");
    r.computable = true;
    r.value = std::pow(1.0 + 28.0 * D / std::sqrt(d), N) * 28.0 / std::sqrt(d);
    r.form = "T_N(Id) >= (1 - (1 + 28D/sqrt(d))^N 28/sqrt(d)) Id; probability (D+1)^{2N}(N+2)e^{-cD}, c unknown";
    r.probability_known = false;
    r.vacuous = true;
    r.inputs["lower_bound"] = 1.0 - r.value;
  } else if (kind == "peps_1") {
    const double d = need(p, "d"), D = need(p, "D"), N = need(p, "N");
    r.computable = true;
    r.value = 42.0 * N / std::sqrt(d) + D * D * std::pow(84.0 / std::sqrt(d), N);
    r.form = "|<psi^N|T_N|psi^N> - 1| <= 42N/sqrt(d) + D^2 (84/sqrt(d))^N";
    set_probability(r, 6.0 * std::exp(-D * D * D / 72.0));
  } else if (kind == "peps_2") {
    const double d = need(p, "d"), D = need(p, "D"), N = need(p, "N");
    r.computable = false;
    r.value = std::numeric_limits<double>::quiet_NaN();
    r.form = "(1 + eta)(1 + 93D/sqrt(d))^N 60N/sqrt(d), eta = (4 sqrt(d) N)^{2(N+1)} (1 + 41/sqrt(d))^{N-1} "
             "(20N/sqrt(d)) e^{-cD^3/d}, c unknown";
    r.inputs["value_if_eta_zero"] = std::pow(1.0 + 93.0 * D / std::sqrt(d), N) * 60.0 * N / std::sqrt(d);
    r.inputs["eta_prefactor"] = std::pow(4.0 * std::sqrt(d) * N, 2.0 * (N + 1)) *
                                std::pow(1.0 + 41.0 / std::sqrt(d), N - 1) * 20.0 * N / std::sqrt(d);
    r.probability_known = false;
    r.vacuous = true;
  } else if (kind == "peps_gap") {
    const double d = need(p, "d"), D = need(p, "D"), N = need(p, "N");
    const double sd = std::sqrt(d);
    const double base = 1.0 - 2.0 * std::pow(1.0 + 28.0 * D / sd, N) * 28.0 / sd - 42.0 * N / sd -
                        D * D * std::pow(84.0 / sd, N);
    const double third = 3.0 * std::pow(1.0 + 93.0 * D / sd, N) * 60.0 * N / sd;
    r.computable = false;
    r.value = std::numeric_limits<double>::quiet_NaN();
    r.form = "1 - 2(1+28D/sqrt(d))^N 28/sqrt(d) - 42N/sqrt(d) - D^2(84/sqrt(d))^N - 3(1+eta)(1+93D/sqrt(d))^N 60N/sqrt(d)";
    r.inputs["value_if_eta_zero"] = base - third;
    r.probability_known = false;
    r.vacuous = true;
  } else if (kind == "gap_h" || kind == "p_pi" || kind == "pi_commute") {
    const double d = need(p, "d"), D = need(p, "D");
    const double tau = std::log(d) / (2.0 * std::log(D));
    r.inputs["tau"] = tau;
    if (kind == "gap_h")
      structural(r, "Delta(H) >= 1 - C / D^(tau - 5), d = D^(2 tau)", tau - 5.0);
    else if (kind == "p_pi")
      structural(r, "||P~ - Pi|| <= C / D^(tau - 5), d = D^(2 tau)", tau - 5.0);
    else
      structural(r, "||[Pi_12, Pi_23]|| <= C / D^(tau - 5), d = D^(2 tau)", tau - 5.0);
  } else if (kind == "gap_h_peps" || kind == "pi_commute_peps") {
    const double d = need(p, "d"), D = need(p, "D");
    const double tau = std::log(d) / (4.0 * std::log(D));
    r.inputs["tau"] = tau;
    structural(r,
               kind == "gap_h_peps" ? "Delta(H) >= 1 - C / D^(2 tau - 13), d = D^(4 tau)"
                                    : "||[Pi^o1_12, Pi^o2_23]|| <= C / D^(2 tau - 13), d = D^(4 tau)",
               2.0 * tau - 13.0);
  } else if (kind == "correlation_decay") {
    const double d = need(p, "d");
    structural(r, "gamma(k) <= C' (C / sqrt(d))^k", 0.0);
    r.inputs["inv_sqrt_d"] = 1.0 / std::sqrt(d);
  } else {
    throw InvalidParameter("bound_table: unknown bound '" + kind + "'");
  }
  return r;
}

}  // namespace rtn
