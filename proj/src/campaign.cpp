#include "rtn/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "rtn/bounds.hpp"

namespace rtn {

using nlohmann::json;

namespace {

const std::vector<std::pair<ExperimentKind, const char*>> kNames = {
    {ExperimentKind::mps_gap, "mps_gap"},
    {ExperimentKind::peps_gap, "peps_gap"},
    {ExperimentKind::peps_gap_independent, "peps_gap_independent"},
    {ExperimentKind::parent_gap_mps, "parent_gap_mps"},
    {ExperimentKind::parent_gap_peps, "parent_gap_peps"},
    {ExperimentKind::correlations, "correlations"},
    {ExperimentKind::expander, "expander"},
    {ExperimentKind::wishart_check, "wishart_check"},
    {ExperimentKind::overlap_check, "overlap_check"},
    {ExperimentKind::trace_check, "trace_check"},
    {ExperimentKind::peps_cp_check, "peps_cp_check"},
};

bool needs_N(ExperimentKind k) {
  using K = ExperimentKind;
  return k == K::peps_gap || k == K::peps_gap_independent || k == K::parent_gap_mps || k == K::parent_gap_peps ||
         k == K::correlations || k == K::peps_cp_check;
}

}  // namespace

std::string to_string(ExperimentKind k) {
  for (auto& [kind, name] : kNames)
    if (kind == k) return name;
  throw InvalidParameter("unknown experiment kind");
}

ExperimentKind parse_experiment(const std::string& s) {
  for (auto& [kind, name] : kNames)
    if (s == name) return kind;
  throw InvalidParameter("unknown experiment '" + s + "'");
}

std::vector<ExperimentKind> all_experiments() {
  std::vector<ExperimentKind> v;
  for (auto& kn : kNames) v.push_back(kn.first);
  return v;
}

std::vector<TrialPoint> ExperimentConfig::points() const {
  std::vector<TrialPoint> pts;
  if (sweep_param.empty()) return {TrialPoint{d, D, N}};
  for (int v : sweep_values) {
    TrialPoint p{d, D, N};
    if (sweep_param == "d")
      p.d = v;
    else if (sweep_param == "D")
      p.D = v;
    else
      p.N = v;
    pts.push_back(p);
  }
  return pts;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw InvalidParameter("config: trials must be >= 1");
  if (threads < 1) throw InvalidParameter("config: threads must be >= 1");
  if (!sweep_param.empty()) {
    if (sweep_param != "d" && sweep_param != "D" && sweep_param != "N")
      throw InvalidParameter("config: sweep parameter must be d, D or N");
    if (sweep_values.empty()) throw InvalidParameter("config: empty sweep");
    for (std::size_t i = 1; i < sweep_values.size(); ++i)
      if (sweep_values[i] <= sweep_values[i - 1]) throw InvalidParameter("config: sweep values must be strictly increasing");
  }
  for (const TrialPoint& p : points()) {
    if (p.d < 1 || p.D < 1) throw InvalidParameter("config: d and D must be >= 1");
    if (needs_N(experiment) && p.N < 1) throw InvalidParameter("config: N must be >= 1 for " + to_string(experiment));
    if ((experiment == ExperimentKind::parent_gap_mps || experiment == ExperimentKind::parent_gap_peps) && p.N < 2)
      throw InvalidParameter("config: parent Hamiltonians need N >= 2");
    if ((experiment == ExperimentKind::parent_gap_mps || experiment == ExperimentKind::parent_gap_peps) && p.d < 2)
      throw InvalidParameter("config: parent Hamiltonians need d >= 2");
    if (experiment == ExperimentKind::correlations && p.N < 2) throw InvalidParameter("config: correlations need N >= 2");
  }
  if (output_dir.empty()) throw InvalidParameter("config: empty output_dir");
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidParameter("config: expected a JSON object");
  ExperimentConfig c;
  try {
    static const std::vector<std::string> known = {"experiment", "d", "D", "N", "trials", "master_seed", "threads",
                                                   "tolerances", "sweep", "output_dir"};
    for (auto it = j.begin(); it != j.end(); ++it)
      if (std::find(known.begin(), known.end(), it.key()) == known.end())
        throw InvalidParameter("config: unknown field '" + it.key() + "'");
    if (!j.contains("experiment")) throw InvalidParameter("config: missing 'experiment'");
    c.experiment = parse_experiment(j.at("experiment").get<std::string>());
    c.d = j.value("d", 0);
    c.D = j.value("D", 0);
    c.N = j.value("N", 0);
    c.trials = j.value("trials", 1);
    c.master_seed = j.value("master_seed", std::uint64_t(0));
    c.threads = j.value("threads", 1);
    c.output_dir = j.value("output_dir", std::string("."));
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      Tolerances& o = c.tol;
      o.trace_eps = t.value("trace_eps", o.trace_eps);
      o.overlap_tol = t.value("overlap_tol", o.overlap_tol);
      o.ground_energy = t.value("ground_energy", o.ground_energy);
      o.tp_residual = t.value("tp_residual", o.tp_residual);
      o.expander_eps = t.value("expander_eps", o.expander_eps);
      o.purity_factor = t.value("purity_factor", o.purity_factor);
      o.fit_rel = t.value("fit_rel", o.fit_rel);
      o.fixed_point_tol = t.value("fixed_point_tol", o.fixed_point_tol);
      o.peps_cp_fallback = t.value("peps_cp_fallback", o.peps_cp_fallback);
    }
    if (j.contains("sweep") && !j.at("sweep").is_null()) {
      const json& s = j.at("sweep");
      c.sweep_param = s.at("param").get<std::string>();
      c.sweep_values = s.at("values").get<std::vector<int>>();
    }
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("config: ") + e.what());
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["d"] = c.d;
  j["D"] = c.D;
  j["N"] = c.N;
  j["trials"] = c.trials;
  j["master_seed"] = c.master_seed;
  j["output_dir"] = c.output_dir;
  const Tolerances& t = c.tol;
  j["tolerances"] = {{"trace_eps", t.trace_eps},
                     {"overlap_tol", t.overlap_tol},
                     {"ground_energy", t.ground_energy},
                     {"tp_residual", t.tp_residual},
                     {"expander_eps", t.expander_eps},
                     {"purity_factor", t.purity_factor},
                     {"fit_rel", t.fit_rel},
                     {"fixed_point_tol", t.fixed_point_tol},
                     {"peps_cp_fallback", t.peps_cp_fallback}};
  if (!c.sweep_param.empty())
    j["sweep"] = {{"param", c.sweep_param}, {"values", c.sweep_values}};
  else
    j["sweep"] = nullptr;
  return j;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double mc_margin(double p, int n) { return 2.0 * std::sqrt(std::max(0.0, p * (1.0 - p)) / std::max(n, 1)) + 0.01; }

std::string records_to_csv(const ExperimentConfig& c, const std::vector<TrialRecord>& records) {
  std::ostringstream os;
  os << "trial_index,seed,d,D,N";
  for (const auto& col : experiment_columns(c.experiment)) os << ',' << col;
  os << ",flagged,flag_reason\n";
  for (const auto& r : records) {
    os << r.trial_index << ',' << r.derived_seed << ',' << r.point.d << ',' << r.point.D << ',' << r.point.N;
    for (double v : r.values) os << ',' << format_real(v);
    std::string reason = r.flag_reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    std::replace(reason.begin(), reason.end(), '\n', ' ');
    os << ',' << (r.flagged ? 1 : 0) << ',' << reason << '\n';
  }
  return os.str();
}

namespace {

std::string long_csv(const ExperimentConfig& c, const std::vector<TrialRecord>& records) {
  const auto cols = experiment_long_columns(c.experiment);
  std::ostringstream os;
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : records)
    for (const auto& row : r.long_rows) {
      os << r.derived_seed;
      for (double v : row) os << ',' << format_real(v);
      os << '\n';
    }
  return os.str();
}

struct Stats {
  double mean = NAN, median = NAN, q05 = NAN, q95 = NAN, min = NAN, max = NAN;
  int count = 0;
};

double quantile(const std::vector<double>& s, double q) {
  if (s.empty()) return NAN;
  const double pos = q * double(s.size() - 1);
  const std::size_t lo = std::size_t(std::floor(pos));
  const std::size_t hi = std::min(s.size() - 1, lo + 1);
  return s[lo] + (pos - double(lo)) * (s[hi] - s[lo]);
}

Stats stats_of(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }), v.end());
  Stats s;
  s.count = int(v.size());
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / double(v.size());
  s.median = quantile(v, 0.5);
  s.q05 = quantile(v, 0.05);
  s.q95 = quantile(v, 0.95);
  s.min = v.front();
  s.max = v.back();
  return s;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json stats_json(const Stats& s) {
  return {{"mean", num(s.mean)}, {"median", num(s.median)}, {"q05", num(s.q05)}, {"q95", num(s.q95)},
          {"min", num(s.min)},   {"max", num(s.max)},       {"count", s.count}};
}

// Columns of the good (non-flagged) rows at one point.
struct PointData {
  std::map<std::string, std::vector<double>> col;
  int n = 0;
};

json check(const std::string& bound, const std::string& type, int violations, int n, double bound_value,
           const BoundReport* rep, bool pass_override = true) {
  json c;
  c["bound"] = bound;
  c["check_type"] = type;
  const double freq = n > 0 ? double(violations) / n : 0.0;
  c["violations"] = violations;
  c["trials"] = n;
  c["empirical_frequency"] = freq;
  c["bound_value"] = num(bound_value);
  c["probability_bound"] = rep && rep->probability_known ? json(rep->probability_bound) : json(nullptr);
  c["vacuous"] = rep ? rep->vacuous : false;
  const double margin = mc_margin(freq, n);
  c["margin"] = margin;
  bool pass;
  if (type == "frequency")
    pass = freq <= rep->probability_bound + margin;
  else
    pass = violations == 0;
  c["pass"] = pass && pass_override && n > 0;
  return c;
}

int count_if(const std::vector<double>& v, auto pred) {
  int c = 0;
  for (double x : v)
    if (pred(x)) ++c;
  return c;
}

json point_checks(const ExperimentConfig& cfg, const TrialPoint& p, const PointData& data) {
  using K = ExperimentKind;
  const Tolerances& tol = cfg.tol;
  json out = json::array();
  const int n = data.n;
  auto col = [&](const char* name) -> const std::vector<double>& { return data.col.at(name); };
  std::map<std::string, double> prm = {{"d", double(p.d)}, {"D", double(p.D)}, {"N", double(p.N)}};
  // frequency check if the probability bound is informative, otherwise value-only
  auto freq_or_value = [&](const std::string& name, const BoundReport& rep, int viol) {
    const bool informative = rep.probability_known && !rep.vacuous;
    out.push_back(check(name, informative ? "frequency" : "value_only", viol, n, rep.value, &rep));
  };
  switch (cfg.experiment) {
    case K::mps_gap: {
      BoundReport g = bound_table("mps_gap", prm);
      freq_or_value("mps_gap", g, count_if(col("gap"), [&](double x) { return !(x >= g.value); }));
      BoundReport cp = bound_table("mps_cp", prm);
      freq_or_value("mps_cp", cp, count_if(col("cp_identity_distance"), [&](double x) { return !(x <= cp.value); }));
      BoundReport m2 = bound_table("mps_2", prm);
      const double mean = stats_of(col("deflated_right")).mean;
      out.push_back(check("mps_2", "expectation", mean <= m2.value ? 0 : 1, n, m2.value, &m2));
      out.back()["empirical_mean"] = num(mean);
      break;
    }
    case K::peps_gap:
    case K::peps_gap_independent: {
      BoundReport p1 = bound_table("peps_1", prm);
      freq_or_value("peps_1", p1, count_if(col("overlap"), [&](double x) { return !(std::abs(x - 1.0) <= p1.value); }));
      BoundReport cp = bound_table("peps_cp", prm);
      const double lower = 1.0 - cp.value;
      const double floor = lower > 0.0 ? lower : tol.peps_cp_fallback;
      out.push_back(check("peps_cp", lower > 0.0 ? "value_only" : "desk_threshold",
                          count_if(col("cp_identity_min_eig"), [&](double x) { return !(x >= floor); }), n, floor, &cp));
      BoundReport pg = bound_table("peps_gap", prm);
      json s = check("peps_gap", "structural", 0, n, NAN, &pg);
      s["pass"] = nullptr;
      s["form"] = pg.form;
      s["value_if_eta_zero"] = num(pg.inputs["value_if_eta_zero"]);
      out.push_back(s);
      break;
    }
    case K::parent_gap_mps:
    case K::parent_gap_peps: {
      out.push_back(check("ground_energy", "desk_threshold",
                          count_if(col("ground_energy"), [&](double x) { return !(x <= tol.ground_energy); }), n,
                          tol.ground_energy, nullptr));
      out.push_back(check("positive_gap", "desk_threshold", count_if(col("gap"), [&](double x) { return !(x > 0.0); }),
                          n, 0.0, nullptr));
      const bool mps = cfg.experiment == K::parent_gap_mps;
      for (const char* b : mps ? std::vector<const char*>{"gap_h", "p_pi", "pi_commute"}
                               : std::vector<const char*>{"gap_h_peps", "pi_commute_peps"}) {
        BoundReport r = bound_table(b, prm);
        json s = check(b, "structural", 0, n, NAN, &r);
        s["pass"] = nullptr;
        s["form"] = r.form;
        s["exponent"] = r.exponent;
        out.push_back(s);
      }
      break;
    }
    case K::correlations:
      out.push_back(check("fit_rate_vs_eigen_ratio", "desk_threshold",
                          count_if(col("fit_rel_error"), [&](double x) { return !(x <= tol.fit_rel); }), n,
                          tol.fit_rel, nullptr));
      break;
    case K::expander:
      out.push_back(check("tp_residual", "desk_threshold",
                          count_if(col("tp_residual"), [&](double x) { return !(x <= tol.tp_residual); }), n,
                          tol.tp_residual, nullptr));
      out.push_back(check("expander_eps", "desk_threshold",
                          count_if(col("eps"), [&](double x) { return !(x <= tol.expander_eps); }), n, tol.expander_eps,
                          nullptr));
      out.push_back(check("purity", "desk_threshold",
                          count_if(col("purity"), [&](double x) { return !(x <= tol.purity_factor / p.D); }), n,
                          tol.purity_factor / p.D, nullptr));
      break;
    case K::wishart_check: {
      BoundReport w = bound_table("wishart", {{"n", double(p.D) * p.D}, {"s", double(p.d)}});
      freq_or_value("wishart", w, count_if(col("violated"), [](double x) { return x != 0.0; }));
      break;
    }
    case K::overlap_check: {
      BoundReport m1 = bound_table("mps_1", prm);
      const double mean = stats_of(col("overlap")).mean;
      out.push_back(check("mps_1", "expectation", std::abs(mean - 1.0) <= tol.overlap_tol ? 0 : 1, n, 1.0, &m1));
      out.back()["empirical_mean"] = num(mean);
      out.back()["tolerance"] = tol.overlap_tol;
      break;
    }
    case K::trace_check: {
      prm["eps"] = tol.trace_eps;
      BoundReport t = bound_table("trace_t", prm);
      freq_or_value("trace_t", t, count_if(col("violated"), [](double x) { return x != 0.0; }));
      break;
    }
    case K::peps_cp_check: {
      BoundReport cp = bound_table("peps_cp", prm);
      const double lower = 1.0 - cp.value;
      const double floor = lower > 0.0 ? lower : tol.peps_cp_fallback;
      out.push_back(check("peps_cp", lower > 0.0 ? "value_only" : "desk_threshold",
                          count_if(col("cp_identity_min_eig"), [&](double x) { return !(x >= floor); }), n, floor, &cp));
      break;
    }
  }
  return out;
}

json trends(const ExperimentConfig& cfg, const std::vector<json>& point_stats) {
  json out = json::array();
  if (cfg.sweep_param.empty() || point_stats.size() < 2) return out;
  for (const auto& colname : experiment_columns(cfg.experiment)) {
    std::vector<double> med;
    for (const auto& ps : point_stats) {
      const json& m = ps.at(colname).at("median");
      med.push_back(m.is_null() ? NAN : m.get<double>());
    }
    bool nd = true, ni = true, si = true, sd = true;
    for (std::size_t i = 1; i < med.size(); ++i) {
      if (!(med[i] >= med[i - 1])) nd = false;
      if (!(med[i] <= med[i - 1])) ni = false;
      if (!(med[i] > med[i - 1])) si = false;
      if (!(med[i] < med[i - 1])) sd = false;
    }
    json t;
    t["column"] = colname;
    t["param"] = cfg.sweep_param;
    t["values"] = cfg.sweep_values;
    json mj = json::array();
    for (double m : med) mj.push_back(num(m));
    t["medians"] = mj;
    t["nondecreasing"] = nd;
    t["nonincreasing"] = ni;
    t["strictly_increasing"] = si;
    t["strictly_decreasing"] = sd;
    out.push_back(t);
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidParameter("cannot write " + path);
  f << content;
}

}  // namespace

CampaignResult run_campaign(const ExperimentConfig& c, bool write_files) {
  c.validate();
  const auto pts = c.points();
  const std::string name = to_string(c.experiment);
  const std::int64_t total = std::int64_t(pts.size()) * c.trials;
  std::vector<TrialRecord> recs(total);
  std::atomic<std::int64_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mu;

  auto worker = [&] {
    while (true) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= total) return;
      TrialRecord& r = recs[i];
      r.trial_index = std::uint64_t(i);
      r.point = pts[i / c.trials];
      SeedSpec seed{c.master_seed, r.trial_index, name};
      r.derived_seed = seed.derive();
      const auto t0 = std::chrono::steady_clock::now();
      try {
        TrialOutput o = run_trial(c.experiment, r.point, seed, c.tol);
        r.values = std::move(o.values);
        r.long_rows = std::move(o.long_rows);
      } catch (const NumericalFailure& e) {  // includes degenerate samples
        r.flagged = true;
        r.flag_reason = e.what();
      } catch (...) {
        std::lock_guard<std::mutex> lk(fatal_mu);
        if (!fatal) fatal = std::current_exception();
        next.store(total);
        return;
      }
      if (r.flagged) r.values.assign(experiment_columns(c.experiment).size(), NAN);
      r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const int nt = int(std::min<std::int64_t>(c.threads, std::max<std::int64_t>(total, 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (fatal) std::rethrow_exception(fatal);

  CampaignResult res;
  res.records = std::move(recs);
  const auto cols = experiment_columns(c.experiment);

  json summary;
  summary["experiment"] = name;
  summary["config"] = config_to_json(c);
  summary["config"].erase("output_dir");
  summary["columns"] = cols;
  int flagged = 0;
  for (const auto& r : res.records) flagged += r.flagged ? 1 : 0;
  summary["trials_total"] = total;
  summary["flagged"] = flagged;
  res.failed = 2 * flagged > total;
  summary["failed"] = res.failed;
  json points = json::array();
  std::vector<json> pstats;
  bool all_pass = !res.failed;
  for (std::size_t pi = 0; pi < pts.size(); ++pi) {
    PointData data;
    int pflag = 0;
    for (const auto& cn : cols) data.col[cn];
    for (std::int64_t i = std::int64_t(pi) * c.trials; i < std::int64_t(pi + 1) * c.trials; ++i) {
      const auto& r = res.records[i];
      if (r.flagged) {
        ++pflag;
        continue;
      }
      ++data.n;
      for (std::size_t k = 0; k < cols.size(); ++k) data.col[cols[k]].push_back(r.values[k]);
    }
    json pj;
    pj["d"] = pts[pi].d;
    pj["D"] = pts[pi].D;
    pj["N"] = pts[pi].N;
    pj["trials"] = c.trials;
    pj["flagged"] = pflag;
    json st;
    for (const auto& cn : cols) st[cn] = stats_json(stats_of(data.col[cn]));
    pj["statistics"] = st;
    pstats.push_back(st);
    pj["checks"] = point_checks(c, pts[pi], data);
    for (const auto& ch : pj["checks"])
      if (ch["pass"].is_boolean() && !ch["pass"].get<bool>()) all_pass = false;
    points.push_back(pj);
  }
  summary["points"] = points;
  summary["trends"] = trends(c, pstats);
  summary["pass"] = all_pass;
  res.summary = summary;

  if (write_files) {
    std::filesystem::create_directories(c.output_dir);
    const std::filesystem::path dir(c.output_dir);
    res.csv_path = (dir / (name + ".csv")).string();
    write_file(res.csv_path, records_to_csv(c, res.records));
    if (!experiment_long_columns(c.experiment).empty()) {
      res.long_csv_path = (dir / (name + "_detail.csv")).string();
      write_file(res.long_csv_path, long_csv(c, res.records));
    }
    res.summary_path = (dir / (name + "_summary.json")).string();
    write_file(res.summary_path, summary.dump(2) + "\n");
    std::ostringstream tm;
    tm << "trial_index,wall_time_ms\n";
    for (const auto& r : res.records) tm << r.trial_index << ',' << format_real(r.wall_time_ms) << '\n';
    res.timing_path = (dir / (name + "_timing.csv")).string();
    write_file(res.timing_path, tm.str());
  }
  return res;
}

}  // namespace rtn
