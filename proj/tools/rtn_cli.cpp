// rtn: command-line front end for sampling, single experiments, campaigns and plots.
// Exit codes: 0 success, 2 invalid configuration, 3 numerical failure, 4 resource limit.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtn/campaign.hpp"
#include "rtn/plot.hpp"
#include "rtn/tensors.hpp"

using nlohmann::json;

namespace {

struct CommonFlags {
  std::optional<int> d, D, N, trials, threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--d", f.d, "physical dimension");
  app->add_option("--D", f.D, "bond dimension");
  app->add_option("--N", f.N, "system size (ring length, torus side or column height)");
  app->add_option("--trials", f.trials, "trials per point");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--out-dir", f.out_dir, "output directory");
  app->add_option("--threads", f.threads, "worker threads");
}

void apply_common(rtn::ExperimentConfig& c, const CommonFlags& f) {
  if (f.d) c.d = *f.d;
  if (f.D) c.D = *f.D;
  if (f.N) c.N = *f.N;
  if (f.trials) c.trials = *f.trials;
  if (f.threads) c.threads = *f.threads;
  if (f.seed) c.master_seed = *f.seed;
  if (f.out_dir) c.output_dir = *f.out_dir;
}

int report_campaign(const rtn::ExperimentConfig& c) {
  rtn::CampaignResult r = rtn::run_campaign(c);
  json brief = {{"experiment", rtn::to_string(c.experiment)},
                {"csv", r.csv_path},
                {"summary", r.summary_path},
                {"trials", r.summary["trials_total"]},
                {"flagged", r.summary["flagged"]},
                {"pass", r.summary["pass"]},
                {"failed", r.failed}};
  if (!r.long_csv_path.empty()) brief["detail_csv"] = r.long_csv_path;
  std::cout << brief.dump(2) << std::endl;
  return r.failed ? 3 : 0;
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw rtn::InvalidParameter("cannot open " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw rtn::InvalidParameter(path + ": " + e.what());
  }
}

void write_tensor_csv(const std::string& path, const std::vector<rtn::cplx>& entries, const std::string& header,
                      const std::vector<int>& shape) {
  std::ofstream f(path);
  if (!f) throw rtn::InvalidParameter("cannot write " + path);
  f << header << ",re,im\n";
  std::vector<int> idx(shape.size(), 0);
  for (const rtn::cplx& z : entries) {
    for (int i : idx) f << i << ',';
    f << rtn::format_real(z.real()) << ',' << rtn::format_real(z.imag()) << '\n';
    for (int k = int(shape.size()) - 1; k >= 0; --k) {
      if (++idx[k] < shape[k]) break;
      idx[k] = 0;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random tensor network toolkit: sampling, transfer operators, parent Hamiltonians, "
               "correlations, expanders and seeded Monte Carlo campaigns"};
  app.require_subcommand(1);

  CommonFlags common;
  std::string config_path, csv_path, spec_path;
  bool independent = false, peps = false;

  auto* s_mps = app.add_subcommand("sample-mps", "sample one MPS tensor; writes <out-dir>/mps_tensor.csv");
  auto* s_peps = app.add_subcommand("sample-peps", "sample one PEPS tensor; writes <out-dir>/peps_tensor.csv");
  auto* g_mps = app.add_subcommand("gap-mps", "transfer-operator gap campaign for MPS");
  auto* g_peps = app.add_subcommand("gap-peps", "transfer-operator gap campaign for PEPS columns");
  g_peps->add_flag("--independent", independent, "independent tensor on every row of the column");
  auto* p_gap = app.add_subcommand("parent-gap", "parent Hamiltonian gap campaign (ring, or torus with --peps)");
  p_gap->add_flag("--peps", peps, "PEPS on an N x N torus");
  auto* corr = app.add_subcommand("correlations", "correlation decay campaign on an MPS ring");
  auto* exp = app.add_subcommand("expander", "normalized expander channel campaign");
  auto* wis = app.add_subcommand("wishart", "Wishart concentration campaign");
  auto* camp = app.add_subcommand("campaign", "run a campaign from a JSON config (flags override file fields)");
  camp->add_option("--config", config_path, "config file")->required();
  auto* plot = app.add_subcommand("plot", "render a CSV column pair to SVG");
  plot->add_option("--csv", csv_path, "input CSV")->required();
  plot->add_option("--spec", spec_path, "plot spec JSON")->required();

  for (auto* sc : {s_mps, s_peps, g_mps, g_peps, p_gap, corr, exp, wis, camp}) add_common(sc, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (s_mps->parsed() || s_peps->parsed()) {
      if (!common.d || !common.D) throw rtn::InvalidParameter("--d and --D are required");
      const rtn::SeedSpec seed{common.seed.value_or(0), 0, "main"};
      const std::string dir = common.out_dir.value_or(".");
      std::filesystem::create_directories(dir);
      json out;
      if (s_mps->parsed()) {
        rtn::MpsTensor t = rtn::sample_mps_tensor(seed, *common.d, *common.D);
        const std::string path = (std::filesystem::path(dir) / "mps_tensor.csv").string();
        write_tensor_csv(path, t.entries, "x,l,r", {t.d, t.D, t.D});
        out = {{"tensor", "mps"}, {"d", t.d}, {"D", t.D}, {"norm2", t.norm2()}, {"seed", seed.derive()}, {"csv", path}};
      } else {
        rtn::PepsTensor t = rtn::sample_peps_tensor(seed, *common.d, *common.D);
        const std::string path = (std::filesystem::path(dir) / "peps_tensor.csv").string();
        write_tensor_csv(path, t.entries, "x,l,r,a,b", {t.d, t.D, t.D, t.D, t.D});
        out = {{"tensor", "peps"}, {"d", t.d}, {"D", t.D}, {"norm2", t.norm2()}, {"seed", seed.derive()}, {"csv", path}};
      }
      std::cout << out.dump(2) << std::endl;
      return 0;
    }
    if (plot->parsed()) {
      rtn::PlotResult r = rtn::emit_plot(csv_path, rtn::plot_spec_from_json(read_json_file(spec_path)));
      json out = {{"svg", r.svg_path}};
      for (const auto& s : r.series)
        out["series"].push_back({{"name", s.name}, {"points", s.x.size()}, {"slope", s.slope}, {"decay_rate", s.decay_rate}});
      std::cout << out.dump(2) << std::endl;
      return 0;
    }
    rtn::ExperimentConfig c;
    if (camp->parsed()) {
      c = rtn::config_from_json(read_json_file(config_path));
    } else {
      using K = rtn::ExperimentKind;
      if (g_mps->parsed()) c.experiment = K::mps_gap;
      if (g_peps->parsed()) c.experiment = independent ? K::peps_gap_independent : K::peps_gap;
      if (p_gap->parsed()) c.experiment = peps ? K::parent_gap_peps : K::parent_gap_mps;
      if (corr->parsed()) c.experiment = K::correlations;
      if (exp->parsed()) c.experiment = K::expander;
      if (wis->parsed()) c.experiment = K::wishart_check;
    }
    apply_common(c, common);
    return report_campaign(c);
  } catch (const rtn::InvalidParameter& e) {
    std::cerr << "invalid configuration: " << e.what() << std::endl;
    return 2;
  } catch (const rtn::ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << std::endl;
    return 4;
  } catch (const rtn::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << std::endl;
    return 3;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource limit: out of memory" << std::endl;
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  }
}
