// Acceptance runner: one PASS/FAIL line per criterion. Tolerances and sizes are
// pinned below. `acceptance --only 3` runs a single criterion; no flag runs all.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rtn/campaign.hpp"
#include "rtn/correlations.hpp"
#include "rtn/expander.hpp"
#include "rtn/parent_ham.hpp"
#include "rtn/transfer.hpp"

namespace {

using namespace rtn;

// ---- pinned tolerances -----------------------------------------------------------
constexpr std::uint64_t kMasterSeed = 20240601ULL;

namespace c1 {
constexpr int d = 50, D = 6, trials = 2000;
constexpr double imag_tol = 1e-10, mean_lo = 0.99, mean_hi = 1.01, seconds = 30;
}  // namespace c1
namespace c2 {
constexpr int d = 1600, D = 4, trials = 1000;  // n = D^2 = 16, s = d
constexpr double slack = 0.03, seconds = 120;
}  // namespace c2
namespace c3 {
constexpr int d = 10000, D = 8, trials = 100;
constexpr double cp_freq = 0.05, seconds = 180;
}  // namespace c3
namespace c4 {
constexpr int d = 400, D = 4, trials = 2000;
constexpr double eps = 0.1, slack = 0.02, seconds = 30;
}  // namespace c4
namespace c5 {
constexpr int d = 3, D = 2, N = 6, seeds = 20, pairs = 12;
constexpr double norm_rel = 1e-10, corr_abs = 1e-9, seconds = 60;
}  // namespace c5
namespace c6 {
constexpr int d = 5, D = 2, N = 3, seeds = 20, max_power = 4;
constexpr double overlap_rel = 1e-10, imag_rel = 1e-10, kraus_abs = 1e-12, seconds = 120;
}  // namespace c6
namespace c7 {
constexpr int d = 5, D = 2, seeds = 20;
constexpr double ground = 1e-6, psd = -1e-10, gap_match = 1e-6, h2_floor = -1e-8, seconds = 300;
}  // namespace c7
namespace c8 {
constexpr int D = 2, N = 3, seeds = 20;
constexpr double seconds = 900;
}  // namespace c8
namespace c9 {
constexpr int d = 10000, D = 4, N = 12, seeds = 20, kmax = 8;
constexpr double fit_rel = 0.15, ratio_factor = 3.0, seconds = 180;
}  // namespace c9
namespace c10 {
constexpr int d = 2000, D = 32, trials = 100, steps = 10;
constexpr int slope_D = 8, slope_seeds = 10;
constexpr double tp = 1e-10, purity_factor = 2.0, eps = 0.1, traj_factor = 2.0;
// additive rounding floor (in units of D * machine epsilon * ||rho^||_F) for the trajectory check
constexpr double rounding_factor = 4.0;
constexpr double slope = -0.5, slope_tol = 0.15, seconds = 600;
}  // namespace c10
namespace c11 {
constexpr int d = 17, D = 2, N = 2, seeds = 5, rank = 64;
constexpr double ground = 1e-6, seconds = 600;
}  // namespace c11

// ---- helpers --------------------------------------------------------------------------

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [violated]");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

SeedSpec seed(int criterion, std::uint64_t trial, const std::string& label) {
  return SeedSpec{kMasterSeed + std::uint64_t(criterion), trial, label};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / double(v.size());
}

std::vector<double> column(const CampaignResult& r, ExperimentKind k, const std::string& name) {
  const auto cols = experiment_columns(k);
  const std::size_t i = std::size_t(std::find(cols.begin(), cols.end(), name) - cols.begin());
  std::vector<double> out;
  for (const auto& rec : r.records)
    if (!rec.flagged) out.push_back(rec.values.at(i));
  return out;
}

ExperimentConfig config(ExperimentKind k, int d, int D, int N, int trials, int criterion) {
  ExperimentConfig c;
  c.experiment = k;
  c.d = d;
  c.D = D;
  c.N = N;
  c.trials = trials;
  c.master_seed = kMasterSeed + std::uint64_t(criterion);
  return c;
}

double slope_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) mx += std::log(x[i]), my += std::log(y[i]);
  mx /= double(n);
  my /= double(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

// ---- criteria ----------------------------------------------------------------------

void overlap_statistic(Outcome& o) {
  double max_im = 0.0;
  std::vector<double> re;
  const Vec psi = max_entangled(c1::D);
  for (int t = 0; t < c1::trials; ++t) {
    TransferOperator T = mps_transfer(sample_mps_tensor(seed(1, t, "overlap"), c1::d, c1::D));
    const cplx v = psi.dot(T.matrix_form() * psi);
    max_im = std::max(max_im, std::abs(v.imag()));
    re.push_back(v.real());
  }
  o.require(max_im <= c1::imag_tol, "max |Im| = " + num(max_im) + " <= " + num(c1::imag_tol));
  const double m = mean(re);
  o.require(m >= c1::mean_lo && m <= c1::mean_hi, "mean = " + num(m) + " in [0.99, 1.01]");
}

void wishart_concentration(Outcome& o) {
  CampaignResult r = run_campaign(config(ExperimentKind::wishart_check, c2::d, c2::D, 0, c2::trials, 2), false);
  const auto viol = column(r, ExperimentKind::wishart_check, "violated");
  const double freq = mean(viol);
  const double n = double(c2::D) * c2::D;
  const double allowed = 2.0 * std::exp(-n / 4.0) + c2::slack;
  o.require(int(viol.size()) == c2::trials, "unflagged trials = " + std::to_string(viol.size()));
  o.require(freq <= allowed, "frequency(||W/s - Id|| > " + num(6.0 * std::sqrt(n / c2::d)) + ") = " + num(freq) +
                                 " <= " + num(allowed));
}

void mps_transfer_gap(Outcome& o) {
  const ExperimentKind k = ExperimentKind::mps_gap;
  CampaignResult r = run_campaign(config(k, c3::d, c3::D, 0, c3::trials, 3), false);
  const double sd = std::sqrt(double(c3::d));
  const auto gap = column(r, k, "gap"), defl = column(r, k, "deflated_right"), cp = column(r, k, "cp_identity_distance");
  o.require(int(gap.size()) == c3::trials, "unflagged trials = " + std::to_string(gap.size()));
  const double gmin = *std::min_element(gap.begin(), gap.end());
  o.require(gmin >= 1.0 - 95.0 / sd, "min gap = " + num(gmin) + " >= " + num(1.0 - 95.0 / sd));
  o.require(mean(defl) <= 40.0 / sd, "mean ||T(Id - psi psi*)|| = " + num(mean(defl)) + " <= " + num(40.0 / sd));
  o.require(mean(cp) <= 6.0 / sd, "mean ||T(Id) - Id|| = " + num(mean(cp)) + " <= " + num(6.0 / sd));
  int over = 0;
  for (double v : cp) over += v > 6.0 / sd;
  const double freq = double(over) / double(cp.size());
  o.require(freq <= c3::cp_freq, "violation frequency = " + num(freq) + " <= " + num(c3::cp_freq));
  const auto& chk = r.summary["points"][0]["checks"][0];
  o.require(chk["pass"].get<bool>(), "summary check " + chk["bound"].get<std::string>() + " (" +
                                         chk["check_type"].get<std::string>() + ") pass");
}

void trace_concentration(Outcome& o) {
  ExperimentConfig c = config(ExperimentKind::trace_check, c4::d, c4::D, 0, c4::trials, 4);
  c.tol.trace_eps = c4::eps;
  CampaignResult r = run_campaign(c, false);
  const auto viol = column(r, ExperimentKind::trace_check, "violated");
  const double freq = mean(viol);
  const double allowed = std::exp(-c4::d * c4::eps * c4::eps) + c4::slack;
  o.require(freq <= allowed, "frequency(Tr T > 1.21) = " + num(freq) + " <= " + num(allowed));
}

void oracle_mps(Outcome& o) {
  double worst_norm = 0.0, worst_corr = 0.0;
  int comparisons = 0;
  for (int s = 0; s < c5::seeds; ++s) {
    MpsTensor t = sample_mps_tensor(seed(5, s, "tensor"), c5::d, c5::D);
    StateVector st = mps_state(t, c5::N);
    TransferOperator T = mps_transfer(t);
    Mat P = Mat::Identity(T.dim() * T.dim(), T.dim() * T.dim());
    for (int i = 0; i < c5::N; ++i) P = P * T.matrix_form();
    const double tr = P.trace().real();
    worst_norm = std::max(worst_norm, std::abs(st.norm2() - tr) / std::abs(tr));
    std::vector<Mat> obs;
    for (int i = 0; i < 4; ++i) obs.push_back(random_hermitian_unit(c5::d, seed(5, s, "obs-" + std::to_string(i))));
    std::vector<Mat> bnd;
    for (const Mat& A : obs) bnd.push_back(boundary_operator(T, A).transfer_form);
    int pair = 0;
    for (int i = 0; i < 4 && pair < c5::pairs; ++i)
      for (int j = 0; j < 3 && pair < c5::pairs; ++j, ++pair) {
        const int jj = (i + j + 1) % 4;
        for (int k = 0; k <= c5::N - 2; ++k) {
          const double a = correlation_direct(st, obs[i], {0}, obs[jj], {k + 1});
          const double b = correlation_transfer(T.matrix_form(), bnd[i], bnd[jj], k, c5::N);
          worst_corr = std::max(worst_corr, std::abs(a - b));
          ++comparisons;
        }
      }
  }
  o.require(worst_norm <= c5::norm_rel, "max rel |<chi|chi> - Tr T^N| = " + num(worst_norm));
  o.require(worst_corr <= c5::corr_abs,
            "max |direct - transfer| = " + num(worst_corr) + " over " + std::to_string(comparisons) + " comparisons");
}

void peps_identities(Outcome& o) {
  double worst_ov = 0, worst_im = 0, worst_k = 0;
  for (int s = 0; s < c6::seeds; ++s) {
    PepsTensor t = sample_peps_tensor(seed(6, s, "tensor"), c6::d, c6::D);
    TransferOperator T = peps_transfer(t, c6::N);
    const Mat& M = T.matrix_form();
    const Vec psiN = max_entangled(T.dim());
    const cplx lhs = psiN.dot(M * psiN);
    const Mat Tt = mps_transfer(peps_reshaped_mps(t)).matrix_form();
    Mat P = Mat::Identity(Tt.rows(), Tt.cols());
    for (int i = 0; i < c6::N; ++i) P = P * Tt;
    const cplx rhs = P.trace();
    worst_ov = std::max(worst_ov, std::abs(lhs - rhs) / std::abs(rhs));
    Mat Q = M;
    for (int n = 1; n <= c6::max_power; ++n) {
      const cplx tr = Q.trace();
      worst_im = std::max(worst_im, std::abs(tr.imag()) / std::abs(tr));
      Q = Q * M;
    }
    for (int v = 0; v < 3; ++v) {
      Vec x = sample_complex_gaussian_matrix(seed(6, s, "vec-" + std::to_string(v)), int(M.rows()), 1, 1.0).col(0);
      x.normalize();
      Vec y;
      T.apply_vec(x, y);
      worst_k = std::max(worst_k, (y - M * x).cwiseAbs().maxCoeff());
    }
  }
  o.require(worst_ov <= c6::overlap_rel, "max rel |<psi|T3|psi> - Tr T~^3| = " + num(worst_ov));
  o.require(worst_im <= c6::imag_rel, "max |Im Tr T3^n| / |Tr| = " + num(worst_im));
  o.require(worst_k <= c6::kraus_abs, "max |matrix form - Kraus| = " + num(worst_k));
}

void parent_mps(Outcome& o) {
  double worst_ground = 0, worst_psd = 0, worst_gap = 0, worst_h2 = 0;
  for (int N : {3, 4, 5})
    for (int s = 0; s < c7::seeds; ++s) {
      MpsTensor t = sample_mps_tensor(seed(7, std::uint64_t(N * 1000 + s), "tensor"), c7::d, c7::D);
      ParentHamiltonian H = ParentHamiltonian::ring(t, N);
      HamiltonianGap kry = hamiltonian_gap(H, GapMethod::krylov, 1e-10);
      worst_ground = std::max(worst_ground, std::abs(kry.ground_energy));
      if (N <= 4) {
        const Mat Hd = H.dense();
        const RVec ev = eigvalsh(Hd);
        worst_psd = std::min(worst_psd, ev(0));
        if (N == 3) worst_gap = std::max(worst_gap, std::abs(ev(1) - kry.gap));
        if (N == 4) {
          const double c = commutator_norm_mps(t);
          const Mat X = Hd * Hd - (1.0 - 4.0 * c) * Hd;
          worst_h2 = std::min(worst_h2, lambda_min_hermitian((X + X.adjoint()) / 2.0));
        }
      } else {
        worst_psd = std::min(worst_psd, kry.ground_energy);
      }
    }
  o.require(worst_ground <= c7::ground, "max |E0| = " + num(worst_ground));
  o.require(worst_psd >= c7::psd, "min eigenvalue = " + num(worst_psd) + " (dense N<=4, Lanczos N=5)");
  o.require(worst_gap <= c7::gap_match, "N=3 |Krylov - dense gap| = " + num(worst_gap));
  o.require(worst_h2 >= c7::h2_floor, "N=4 min lambda(H^2 - (1-4c)H) = " + num(worst_h2));
}

void parent_trends(Outcome& o) {
  std::vector<double> gaps;
  for (int d : {5, 16, 64, 256}) {
    std::vector<double> v;
    for (int s = 0; s < c8::seeds; ++s)
      v.push_back(hamiltonian_gap(ParentHamiltonian::ring(sample_mps_tensor(seed(8, s, "gap"), d, c8::D), c8::N)).gap);
    gaps.push_back(median(v));
  }
  std::vector<double> pt, cm;
  for (int d : {16, 64, 256, 1024}) {
    std::vector<double> a, b;
    for (int s = 0; s < c8::seeds; ++s) {
      MpsTensor t = sample_mps_tensor(seed(8, s, "proj"), d, c8::D);
      a.push_back(ground_projector(two_site_map(t)).ptilde_distance);
      b.push_back(commutator_norm_mps(t));
    }
    pt.push_back(median(a));
    cm.push_back(median(b));
  }
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += (s.empty() ? "" : ", ") + num(x);
    return "[" + s + "]";
  };
  bool nd = true, dp = true, dc = true;
  for (std::size_t i = 1; i < 4; ++i) {
    nd = nd && gaps[i] >= gaps[i - 1];
    dp = dp && pt[i] < pt[i - 1];
    dc = dc && cm[i] < cm[i - 1];
  }
  o.require(nd, "median gap(H) nondecreasing " + list(gaps));
  o.require(dp, "median ||P~ - Pi|| strictly decreasing " + list(pt));
  o.require(dc, "median commutator strictly decreasing " + list(cm));
}

void correlation_decay(Outcome& o) {
  // probe pairs of the campaign observables
  const std::vector<std::pair<int, int>> pairs = {{0, 0}, {0, 2}, {2, 2}, {1, 3}, {4, 5}, {0, 4}};
  double worst_fit = 0.0;
  int bound_viol = 0, bound_checks = 0;
  std::vector<int> viol_by_k(c9::kmax + 1, 0);
  for (int s = 0; s < c9::seeds; ++s) {
    const SeedSpec sd = seed(9, s, "tensor");
    TransferOperator T = mps_transfer(sample_mps_tensor(sd, c9::d, c9::D));
    const Mat& M = T.matrix_form();
    const auto ev = eigs_by_modulus(M);
    const double mu = std::abs(ev[1]) / std::abs(ev[0]);
    std::vector<Mat> at;
    for (int id = 0; id < 6; ++id) at.push_back(boundary_operator(T, sparse_observable(c9::d, id, sd)).transfer_form);
    std::vector<double> rates;
    for (auto [a, b] : pairs) {
      CorrelationProfile p = correlation_profile(M, at[a], at[b], c9::N);
      if (p.fit_ok) rates.push_back(p.fit_rate);
      for (int k = 0; k <= c9::kmax; ++k) {
        ++bound_checks;
        if (!(p.values[k] <= p.values[0] * std::pow(c9::ratio_factor * mu, k))) {
          ++bound_viol;
          ++viol_by_k[k];
        }
      }
    }
    const double rel = rates.empty() ? INFINITY : std::abs(median(rates) / -std::log(mu) - 1.0);
    worst_fit = std::max(worst_fit, rel);
  }
  o.require(worst_fit <= c9::fit_rel, "max |fitted rate / -ln|l2/l1| - 1| = " + num(worst_fit) + " <= " + num(c9::fit_rel));
  std::string by_k;
  for (int k = 0; k <= c9::kmax; ++k) by_k += (k ? " " : "") + std::to_string(viol_by_k[k]);
  o.require(bound_viol == 0, "gamma(k) <= gamma(0)(3|l2/l1|)^k for k <= 8: " + std::to_string(bound_viol) + "/" +
                                 std::to_string(bound_checks) + " violations (by k = 0..8: " + by_k + ")");
}

void expander_suite(Outcome& o) {
  double worst_tp = 0, worst_purity = 0, worst_eps = 0, worst_traj = 0;
  for (int s = 0; s < c10::trials; ++s) {
    TransferOperator T = mps_transfer(sample_mps_tensor(seed(10, s, "tensor"), c10::d, c10::D));
    Channel ch = normalize_channel(T);
    const Mat Mh = channel_matrix(ch, T);
    FixedPoint fp = fixed_point(ch, 1e-12, 10000, &Mh);
    ExpanderReport r = expander_report(ch, fp, &Mh);
    worst_tp = std::max(worst_tp, ch.tp_residual);
    worst_purity = std::max(worst_purity, fp.purity * c10::D);
    worst_eps = std::max(worst_eps, r.eps);
    Mat rho0 = Mat::Zero(c10::D, c10::D);
    rho0(s % c10::D, s % c10::D) = 1.0;
    Trajectory tr = iterate_channel(ch, rho0, c10::steps, fp, &Mh);
    for (int t = 1; t <= c10::steps; ++t) {
      const double floor = c10::rounding_factor * c10::D * std::numeric_limits<double>::epsilon() * fp.rho.norm();
      const double allowed = c10::traj_factor * std::pow(r.eps, t) * tr.distances[0] + floor;
      worst_traj = std::max(worst_traj, tr.distances[t] / allowed);
    }
  }
  o.require(worst_tp <= c10::tp, "max tp_residual = " + num(worst_tp));
  o.require(worst_purity <= c10::purity_factor, "max D*purity = " + num(worst_purity) + " <= 2");
  o.require(worst_eps <= c10::eps, "max eps = " + num(worst_eps));
  o.require(worst_traj <= 1.0, "max distance / (2 eps^t d0 + rounding floor) = " + num(worst_traj));
  std::vector<double> ds = {100, 400, 1600, 6400}, med;
  for (double d : ds) {
    std::vector<double> v;
    for (int s = 0; s < c10::slope_seeds; ++s) {
      TransferOperator T = mps_transfer(sample_mps_tensor(seed(10, s, "slope"), int(d), c10::slope_D));
      v.push_back(two_to_two_distance(channel_matrix(normalize_channel(T), T), T.matrix_form()));
    }
    med.push_back(median(v));
  }
  const double sl = slope_loglog(ds, med);
  o.require(std::abs(sl - c10::slope) <= c10::slope_tol, "2->2 distance slope = " + num(sl) + " (-0.5 +- 0.15)");
}

void peps_parent(Outcome& o) {
  const ExperimentKind k = ExperimentKind::parent_gap_peps;
  CampaignResult r = run_campaign(config(k, c11::d, c11::D, c11::N, c11::seeds, 11), false);
  const auto rh = column(r, k, "rank_h"), rv = column(r, k, "rank_v"), e0 = column(r, k, "ground_energy"),
             gap = column(r, k, "gap"), ch = column(r, k, "commutator_h"), cv = column(r, k, "commutator_v");
  o.require(int(rh.size()) == c11::seeds, "unflagged trials = " + std::to_string(rh.size()));
  bool ranks = true, ground = true, pos = true, fin = true;
  double emax = 0, gmin = INFINITY;
  for (std::size_t i = 0; i < rh.size(); ++i) {
    ranks = ranks && rh[i] == c11::rank && rv[i] == c11::rank;
    emax = std::max(emax, std::abs(e0[i]));
    ground = ground && std::abs(e0[i]) <= c11::ground;
    gmin = std::min(gmin, gap[i]);
    pos = pos && gap[i] > 0.0;
    fin = fin && std::isfinite(ch[i]) && std::isfinite(cv[i]);
  }
  o.require(ranks, "rank = 64 (both orientations)");
  o.require(ground, "max |E0| = " + num(emax));
  o.require(pos, "min gap = " + num(gmin) + " > 0");
  o.require(fin, "commutators h = " + num(median(ch)) + ", v = " + num(median(cv)) + " (medians, finite)");
}

std::string slurp(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void determinism(Outcome& o) {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "rtn_acceptance_determinism";
  fs::remove_all(base);
  struct Case {
    ExperimentKind k;
    int d, D, N, trials;
  };
  const std::vector<Case> cases = {{ExperimentKind::mps_gap, 400, 4, 0, 12},
                                   {ExperimentKind::correlations, 200, 3, 10, 8},
                                   {ExperimentKind::parent_gap_mps, 5, 2, 4, 8},
                                   {ExperimentKind::expander, 300, 6, 0, 8}};
  for (const Case& cs : cases) {
    std::vector<std::string> csv, detail;
    for (int run = 0; run < 3; ++run) {
      ExperimentConfig c = config(cs.k, cs.d, cs.D, cs.N, cs.trials, 12);
      c.threads = run == 0 ? 1 : (run == 1 ? 4 : 2);
      c.output_dir = (base / (to_string(cs.k) + "_" + std::to_string(run))).string();
      CampaignResult r = run_campaign(c);
      csv.push_back(slurp(r.csv_path));
      detail.push_back(r.long_csv_path.empty() ? "" : slurp(r.long_csv_path));
    }
    const bool same = csv[0] == csv[1] && csv[0] == csv[2] && detail[0] == detail[1] && detail[0] == detail[2];
    o.require(same && !csv[0].empty(), to_string(cs.k) + " byte-identical for threads 1/4/2");
  }
  fs::remove_all(base);
}

struct Criterion {
  int id;
  const char* name;
  double seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "overlap statistic", c1::seconds, overlap_statistic},
      {2, "Wishart concentration", c2::seconds, wishart_concentration},
      {3, "MPS transfer gap", c3::seconds, mps_transfer_gap},
      {4, "trace concentration", c4::seconds, trace_concentration},
      {5, "MPS oracle equivalence", c5::seconds, oracle_mps},
      {6, "PEPS transfer identities", c6::seconds, peps_identities},
      {7, "MPS parent Hamiltonian", c7::seconds, parent_mps},
      {8, "parent gap and projector trends", c8::seconds, parent_trends},
      {9, "correlation decay", c9::seconds, correlation_decay},
      {10, "expander suite", c10::seconds, expander_suite},
      {11, "PEPS parent Hamiltonian smoke", c11::seconds, peps_parent},
      {12, "campaign determinism", 600, determinism},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc)
      only.push_back(std::atoi(argv[++i]));
    else {
      std::cerr << "usage: acceptance [--only N]...\n";
      return 2;
    }
  }
  int failed = 0;
  for (const Criterion& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < c.seconds, "runtime " + num(secs) + " s < " + num(c.seconds) + " s");
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << "): " << o.detail.str()
              << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
