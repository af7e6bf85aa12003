#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <vector>

#include "ffg/config.hpp"
#include "ffg/harness.hpp"
#include "ffg/matcher.hpp"

namespace {

struct LoadedRun {
  ffg::RunConfig cfg;
  ffg::Corpus corpus;
  ffg::Densities dens;
};

LoadedRun load_run(const std::string& config_path) {
  LoadedRun run;
  run.cfg = ffg::load_config(config_path);
  if (run.cfg.ipd_trace.empty() || run.cfg.delay_trace_1.empty() ||
      run.cfg.delay_trace_2.empty())
    throw std::runtime_error(
        "config must set ipd_trace, delay_trace_1 and delay_trace_2");
  ffg::IpdTrace all = ffg::load_ipd_trace(run.cfg.ipd_trace);
  auto [train, test] =
      ffg::split_ipd_trace(all, run.cfg.params.master_seed);
  run.corpus.train = std::move(train);
  run.corpus.test = std::move(test);
  run.corpus.d1 = ffg::load_delay_trace(run.cfg.delay_trace_1);
  run.corpus.d2 = ffg::load_delay_trace(run.cfg.delay_trace_2);
  run.dens = ffg::fit_densities(run.cfg.params, run.corpus);
  return run;
}

std::string preset_name(const ffg::GameParams& p) {
  return ffg::to_string(p.ta) + "/" + ffg::to_string(p.ad) + "/" +
         ffg::to_string(p.detector);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flow fingerprinting game simulator"};
  app.require_subcommand(1);

  // gen-traces
  auto* gen = app.add_subcommand(
      "gen-traces", "Generate a synthetic IPD corpus and two delay traces");
  std::string out_dir = ".";
  std::string ipd_model = "lognormal";
  double ipd_p1 = -2.8, ipd_p2 = 0.8;
  std::size_t ipd_length = 200000;
  double delay_base = 0.05, delay_jitter = 0.002, delay_corr = 0.95;
  std::size_t delay_length = 20000;
  std::uint64_t gen_seed = 1;
  gen->add_option("--out-dir", out_dir, "Output directory");
  gen->add_option("--ipd-model", ipd_model, "lognormal | pareto | exponential");
  gen->add_option("--ipd-p1", ipd_p1, "First model parameter");
  gen->add_option("--ipd-p2", ipd_p2, "Second model parameter");
  gen->add_option("--ipd-length", ipd_length, "Number of IPD samples");
  gen->add_option("--delay-base", delay_base, "Base path delay (s)");
  gen->add_option("--delay-jitter", delay_jitter, "Delay jitter std (s)");
  gen->add_option("--delay-corr", delay_corr, "AR(1) lag-1 correlation");
  gen->add_option("--delay-length", delay_length, "Delay samples per trace");
  gen->add_option("--seed", gen_seed, "Generator seed");

  // common options for experiment subcommands
  std::string config_path, out_prefix = "ffg_out";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value config file")
        ->required();
    sub->add_option("--out", out_prefix, "Output path prefix");
  };

  auto* sim = app.add_subcommand(
      "simulate", "Run one experiment and write ROC + summary CSV");
  add_common(sim);

  auto* cal = app.add_subcommand(
      "calibrate", "Calibrate the detection threshold for the configured eta");
  add_common(cal);

  auto* sweep = app.add_subcommand(
      "sweep-sigma", "AUC as a function of the attack sigma");
  add_common(sweep);
  std::vector<double> sigma_factors = {1e-6, 1e-5, 1e-4, 1e-3,  1e-2,
                                       1e-1, 1.0,  1e1,  1e2,   1e3};
  sweep->add_option("--sigma-factors", sigma_factors,
                    "Sigma grid as multiples of A_C");

  auto* cmp = app.add_subcommand(
      "compare", "Compare strategy presets along one axis");
  add_common(cmp);
  std::string axis = "adversary";
  cmp->add_option("--axis", axis, "detector | adversary | fingerprint");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      ffg::IpdModel model;
      if (ipd_model == "lognormal") model = ffg::IpdModel::lognormal;
      else if (ipd_model == "pareto") model = ffg::IpdModel::pareto;
      else if (ipd_model == "exponential") model = ffg::IpdModel::exponential;
      else throw std::runtime_error("unknown ipd model: " + ipd_model);
      ffg::Rng rng_i = ffg::derive_rng(gen_seed, "gen-ipds");
      ffg::save_ipd_trace(
          out_dir + "/ipds.txt",
          ffg::synth_ipd_trace(model, ipd_p1, ipd_p2, ipd_length, rng_i));
      ffg::Rng rng_1 = ffg::derive_rng(gen_seed, "gen-delay", 1);
      ffg::save_delay_trace(
          out_dir + "/delay1.txt",
          ffg::synth_delay_trace(delay_base, delay_jitter, delay_corr,
                                 delay_length, rng_1));
      ffg::Rng rng_2 = ffg::derive_rng(gen_seed, "gen-delay", 2);
      ffg::save_delay_trace(
          out_dir + "/delay2.txt",
          ffg::synth_delay_trace(delay_base, delay_jitter, delay_corr,
                                 delay_length, rng_2));
      std::cout << "wrote " << out_dir << "/{ipds,delay1,delay2}.txt\n";
      return 0;
    }

    LoadedRun run = load_run(config_path);
    const ffg::GameParams& p = run.cfg.params;
    ffg::write_manifest(out_prefix + ".manifest", run.cfg);

    if (sim->parsed()) {
      std::vector<double> s1, s0;
      ffg::RocCurve roc =
          ffg::run_experiment(p, run.corpus, run.dens, &s1, &s0);
      ffg::write_roc_csv(out_prefix + "_roc.csv", roc);
      auto ci = ffg::auc_bootstrap_ci(s1, s0, 200, p.master_seed);
      ffg::write_summary_csv(out_prefix + "_summary.csv",
                             {{preset_name(p), roc.auc, ci.first, ci.second,
                               p.trials_h1}});
      std::printf("auc=%.4f (ci %.4f..%.4f)\n", roc.auc, ci.first, ci.second);
    } else if (cal->parsed()) {
      ffg::Flow u;
      ffg::Flow x = ffg::make_fingerprinted_flow(p, run.corpus, run.dens, 0, &u);
      ffg::DetectorModel model =
          ffg::make_detector_model(p, run.corpus, run.dens, x, u, 0);
      ffg::Rng cal_rng = ffg::derive_rng(p.master_seed, "calibrate");
      double threshold = ffg::calibrate_threshold(
          x, model, run.corpus.test, p.n2(), p.eta, p.trials_null, cal_rng,
          nullptr, p.rho_step);
      ffg::Rng val_rng = ffg::derive_rng(p.master_seed, "calibrate-validate");
      std::vector<double> fresh;
      ffg::calibrate_threshold(x, model, run.corpus.test, p.n2(), p.eta,
                               p.trials_null, val_rng, &fresh, p.rho_step);
      std::size_t above = 0;
      for (double s : fresh)
        if (s > threshold) ++above;
      double pf = static_cast<double>(above) / fresh.size();
      FILE* f = std::fopen((out_prefix + "_calibration.csv").c_str(), "w");
      if (!f) throw std::runtime_error("cannot write calibration csv");
      std::fprintf(f, "eta,trials,threshold,empirical_pf\n");
      std::fprintf(f, "%.17g,%zu,%.17g,%.17g\n", p.eta, p.trials_null,
                   threshold, pf);
      std::fclose(f);
      std::printf("threshold=%.6g empirical_pf=%.4f\n", threshold, pf);
    } else if (sweep->parsed()) {
      std::vector<double> grid;
      for (double f : sigma_factors) grid.push_back(f * p.a_c);
      auto rows = ffg::sweep_sigma(p, run.corpus, run.dens, grid);
      ffg::write_sigma_csv(out_prefix + "_sigma.csv", rows);
      for (const auto& r : rows)
        std::printf("sigma=%.3e auc=%.4f\n", r.sigma, r.auc);
    } else if (cmp->parsed()) {
      ffg::CompareAxis ax;
      if (axis == "detector") ax = ffg::CompareAxis::detector;
      else if (axis == "adversary") ax = ffg::CompareAxis::adversary;
      else if (axis == "fingerprint") ax = ffg::CompareAxis::fingerprint;
      else throw std::runtime_error("unknown axis: " + axis);
      auto results = ffg::compare_strategies(p, run.corpus, run.dens, ax);
      std::vector<ffg::SummaryRow> summary;
      for (const auto& r : results) {
        ffg::write_roc_csv(out_prefix + "_" + r.preset + "_roc.csv", r.roc);
        auto ci = ffg::auc_bootstrap_ci(r.scores_h1, r.scores_h0, 200,
                                        p.master_seed);
        summary.push_back(
            {r.preset, r.roc.auc, ci.first, ci.second, p.trials_h1});
        std::printf("%-22s auc=%.4f\n", r.preset.c_str(), r.roc.auc);
      }
      ffg::write_summary_csv(out_prefix + "_summary.csv", summary);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
