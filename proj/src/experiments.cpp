// Per-trial measurement routines for the campaign runner. Each experiment has a
// fixed column list; run_trial returns values in exactly that order.

#include <algorithm>
#include <cmath>

#include "rtn/campaign.hpp"
#include "rtn/correlations.hpp"
#include "rtn/expander.hpp"
#include "rtn/parent_ham.hpp"
#include "rtn/transfer.hpp"

namespace rtn {

namespace {

double transfer_trace(const TransferOperator& T) {
  double s = 0.0;
  for (const auto& k : T.kraus()) s += std::norm(k.trace());
  return s * T.prefactor();
}

std::vector<double> gap_values(const TransferGap& g) {
  const auto& s = g.summary;
  const auto& c = g.certificate;
  return {s.lambda1.real(), s.lambda1.imag(), s.lambda2_modulus, s.gap,
          s.method == SolveMethod::iterative ? 1.0 : 0.0,
          c.delta, c.epsilon, c.eta, c.bound, c.applicable ? 1.0 : 0.0};
}

const std::vector<std::string> kGapCols = {"lambda1_re", "lambda1_im",   "lambda2_modulus", "gap",
                                           "iterative",  "cert_delta",   "cert_epsilon",    "cert_eta",
                                           "cert_bound", "cert_applicable"};

// observable pairs probed in the correlation experiment (ids of sparse_observable)
const std::vector<std::pair<int, int>> kObsPairs = {{0, 0}, {0, 2}, {2, 2}, {1, 3}, {4, 5}, {0, 4}};

TrialOutput mps_gap_trial(const TrialPoint& p, const SeedSpec& seed) {
  MpsTensor t = sample_mps_tensor(seed, p.d, p.D);
  TransferOperator T = mps_transfer(t);
  TransferGap g = transfer_gap(T);
  TrialOutput o;
  o.values = gap_values(g);
  const int D = T.dim();
  const double cp = operator_norm(apply_cp(T, Mat::Identity(D, D)) - Mat::Identity(D, D));
  auto [right, left] = deflated_norms(T);
  o.values.insert(o.values.end(), {cp, right, left, overlap_psi(T)});
  return o;
}

TrialOutput peps_gap_trial(const TrialPoint& p, const SeedSpec& seed, bool independent) {
  std::vector<PepsTensor> ts;
  if (independent) {
    for (int i = 0; i < p.N; ++i) ts.push_back(sample_peps_tensor(seed.with_label("row-" + std::to_string(i)), p.d, p.D));
  }
  TransferOperator T = independent ? peps_transfer_independent(ts) : peps_transfer(sample_peps_tensor(seed, p.d, p.D), p.N);
  TransferGap g = transfer_gap(T);
  TrialOutput o;
  o.values = gap_values(g);
  const int n = T.dim();
  o.values.push_back(overlap_psi(T));
  o.values.push_back(lambda_min_hermitian(apply_cp(T, Mat::Identity(n, n))));
  return o;
}

TrialOutput parent_mps_trial(const TrialPoint& p, const SeedSpec& seed, const Tolerances& tol) {
  MpsTensor t = sample_mps_tensor(seed, p.d, p.D);
  ParentHamiltonian H = ParentHamiltonian::ring(t, p.N);
  const GroundProjector& g = H.projectors()[0];
  if (g.rank_deficient) throw DegenerateSample("two-site map rank deficient");
  HamiltonianGap hg = hamiltonian_gap(H, GapMethod::automatic, tol.ground_energy * 1e-3);
  TrialOutput o;
  o.values = {double(g.rank), double(g.expected_rank), g.ptilde_distance, commutator_norm_mps(t),
              hg.ground_energy, hg.gap, double(int(hg.method))};
  return o;
}

TrialOutput parent_peps_trial(const TrialPoint& p, const SeedSpec& seed, const Tolerances& tol) {
  PepsTensor t = sample_peps_tensor(seed, p.d, p.D);
  ParentHamiltonian H = ParentHamiltonian::torus(t, p.N);
  const auto& ph = H.projectors()[0];
  const auto& pv = H.projectors()[1];
  if (ph.rank_deficient || pv.rank_deficient) throw DegenerateSample("PEPS two-site map rank deficient");
  HamiltonianGap hg = hamiltonian_gap(H, GapMethod::automatic, tol.ground_energy * 1e-3);
  TrialOutput o;
  o.values = {double(ph.rank), double(pv.rank), ph.ptilde_distance, pv.ptilde_distance,
              commutator_norm(ph), commutator_norm(pv), hg.ground_energy, hg.gap};
  return o;
}

TrialOutput correlations_trial(const TrialPoint& p, const SeedSpec& seed) {
  MpsTensor t = sample_mps_tensor(seed, p.d, p.D);
  TransferOperator T = mps_transfer(t);
  const Mat& M = T.matrix_form();
  auto ev = eigs_by_modulus(M);
  const double ratio = ev.size() > 1 ? std::abs(ev[1]) / std::abs(ev[0]) : 0.0;
  const double expected = -std::log(ratio);
  std::vector<Mat> at;
  for (int id = 0; id < 6; ++id) at.push_back(boundary_operator(T, sparse_observable(p.d, id, seed)).transfer_form);
  TrialOutput o;
  std::vector<double> rates;
  double worst = 0.0;
  for (std::size_t q = 0; q < kObsPairs.size(); ++q) {
    CorrelationProfile prof = correlation_profile(M, at[kObsPairs[q].first], at[kObsPairs[q].second], p.N);
    for (std::size_t k = 0; k < prof.values.size(); ++k)
      o.long_rows.push_back({double(p.d), double(p.D), double(p.N), double(prof.separations[k]),
                             double(q), prof.values[k], ratio});
    if (prof.fit_ok) {
      rates.push_back(prof.fit_rate);
      worst = std::max(worst, std::abs(prof.fit_rate / expected - 1.0));
    }
  }
  double med = std::nan("");
  if (!rates.empty()) {
    std::sort(rates.begin(), rates.end());
    const std::size_t n = rates.size();
    med = n % 2 ? rates[n / 2] : 0.5 * (rates[n / 2 - 1] + rates[n / 2]);
  }
  o.values = {std::abs(ev[0]), ratio, expected, med, std::abs(med / expected - 1.0), worst, double(rates.size())};
  return o;
}

TrialOutput expander_trial(const TrialPoint& p, const SeedSpec& seed, const Tolerances& tol) {
  MpsTensor t = sample_mps_tensor(seed, p.d, p.D);
  TransferOperator T = mps_transfer(t);
  Channel ch = normalize_channel(T);
  Mat Mh = channel_matrix(ch, T);
  FixedPoint fp = fixed_point(ch, tol.fixed_point_tol, 10000, &Mh);
  ExpanderReport r = expander_report(ch, fp, &Mh);
  const double hat = two_to_two_distance(Mh, T.matrix_form());
  TrialOutput o;
  o.values = {ch.tp_residual, r.eps, fp.purity, r.m_lower, double(fp.iterations), double(r.k), hat};
  return o;
}

TrialOutput wishart_trial(const TrialPoint& p, const SeedSpec& seed) {
  MpsTensor t = sample_mps_tensor(seed, p.d, p.D);
  const int n = p.D * p.D;
  const double s = p.d;
  // W_unit / s = D W for entries of variance 1/(dD)
  const Mat W = w_operator(t) * double(p.D);
  const double dist = operator_norm(W - Mat::Identity(n, n));
  const double thr = 6.0 * std::sqrt(n / s);
  TrialOutput o;
  o.values = {double(n), s, dist, thr, dist > thr ? 1.0 : 0.0};
  return o;
}

TrialOutput overlap_trial(const TrialPoint& p, const SeedSpec& seed) {
  TransferOperator T = mps_transfer(sample_mps_tensor(seed, p.d, p.D));
  TrialOutput o;
  o.values = {overlap_psi(T), transfer_trace(T)};
  return o;
}

TrialOutput trace_trial(const TrialPoint& p, const SeedSpec& seed, const Tolerances& tol) {
  TransferOperator T = mps_transfer(sample_mps_tensor(seed, p.d, p.D));
  const double tr = transfer_trace(T);
  const double thr = (1.0 + tol.trace_eps) * (1.0 + tol.trace_eps);
  TrialOutput o;
  o.values = {tr, thr, tr > thr ? 1.0 : 0.0};
  return o;
}

TrialOutput peps_cp_trial(const TrialPoint& p, const SeedSpec& seed) {
  TransferOperator T = peps_transfer(sample_peps_tensor(seed, p.d, p.D), p.N);
  const int n = T.dim();
  const double lmin = lambda_min_hermitian(apply_cp(T, Mat::Identity(n, n)));
  const double v = std::pow(1.0 + 28.0 * p.D / std::sqrt(double(p.d)), p.N) * 28.0 / std::sqrt(double(p.d));
  TrialOutput o;
  o.values = {lmin, 1.0 - v, 1.0 - v <= 0.0 ? 1.0 : 0.0};
  return o;
}

}  // namespace

std::vector<std::string> experiment_columns(ExperimentKind k) {
  using K = ExperimentKind;
  switch (k) {
    case K::mps_gap: {
      auto c = kGapCols;
      c.insert(c.end(), {"cp_identity_distance", "deflated_right", "deflated_left", "overlap"});
      return c;
    }
    case K::peps_gap:
    case K::peps_gap_independent: {
      auto c = kGapCols;
      c.insert(c.end(), {"overlap", "cp_identity_min_eig"});
      return c;
    }
    case K::parent_gap_mps:
      return {"rank", "expected_rank", "ptilde_distance", "commutator_norm", "ground_energy", "gap", "gap_method"};
    case K::parent_gap_peps:
      return {"rank_h",       "rank_v",       "ptilde_distance_h", "ptilde_distance_v",
              "commutator_h", "commutator_v", "ground_energy",     "gap"};
    case K::correlations:
      return {"lambda1_modulus", "lambda2_over_lambda1", "expected_rate", "fit_rate_median",
              "fit_rel_error",   "fit_rel_error_max",    "fits"};
    case K::expander:
      return {"tp_residual", "eps", "purity", "m_lower", "iterations", "kraus_rank", "hat_distance"};
    case K::wishart_check:
      return {"n", "s", "distance", "threshold", "violated"};
    case K::overlap_check:
      return {"overlap", "trace_T"};
    case K::trace_check:
      return {"trace_T", "threshold", "violated"};
    case K::peps_cp_check:
      return {"cp_identity_min_eig", "bound_lower", "bound_vacuous"};
  }
  throw InvalidParameter("experiment_columns: unknown experiment");
}

std::vector<std::string> experiment_long_columns(ExperimentKind k) {
  if (k == ExperimentKind::correlations)
    return {"seed", "d", "D", "N", "k", "observable_id", "gamma", "lambda2_over_lambda1"};
  return {};
}

TrialOutput run_trial(ExperimentKind k, const TrialPoint& p, const SeedSpec& seed, const Tolerances& tol) {
  using K = ExperimentKind;
  switch (k) {
    case K::mps_gap:
      return mps_gap_trial(p, seed);
    case K::peps_gap:
      return peps_gap_trial(p, seed, false);
    case K::peps_gap_independent:
      return peps_gap_trial(p, seed, true);
    case K::parent_gap_mps:
      return parent_mps_trial(p, seed, tol);
    case K::parent_gap_peps:
      return parent_peps_trial(p, seed, tol);
    case K::correlations:
      return correlations_trial(p, seed);
    case K::expander:
      return expander_trial(p, seed, tol);
    case K::wishart_check:
      return wishart_trial(p, seed);
    case K::overlap_check:
      return overlap_trial(p, seed);
    case K::trace_check:
      return trace_trial(p, seed, tol);
    case K::peps_cp_check:
      return peps_cp_trial(p, seed);
  }
  throw InvalidParameter("run_trial: unknown experiment");
}

}  // namespace rtn
