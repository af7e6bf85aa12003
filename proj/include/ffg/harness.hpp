#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ffg/adversary.hpp"
#include "ffg/detector.hpp"
#include "ffg/fingerprint.hpp"
#include "ffg/kde.hpp"
#include "ffg/trace.hpp"

namespace ffg {

enum class FingerprintStrategy { optimal, uniform, fancy, none };
enum class DetectorVariant { proposed, baseline };
enum class RhoMode { grid, oracle };

// One record driving every trial: game caps, experiment sizes, strategy
// selectors, and the numeric knobs of both optimizers and the detector.
struct GameParams {
  std::size_t n = 20;
  double w_c = 0.0;
  double a_c = 0.25;
  double p_a = 1.0;
  double eta = 0.05;
  double sigma = -1.0;  // < 0 selects the default 1e-2 * A_C
  std::size_t trials_h1 = 1000;
  std::size_t trials_null = 1000;
  std::uint64_t master_seed = 1;

  FingerprintStrategy ta = FingerprintStrategy::none;
  AdStrategy ad = AdStrategy::optimal;
  DetectorVariant detector = DetectorVariant::proposed;

  int grid_size = 64;
  int quad_nodes = 16;
  RhoMode rho_mode = RhoMode::grid;
  double rho_step = 1e-3;
  double chaff_offset = 1e-3;
  bool follow_paper_equations = false;
  bool denominator_uses_fingerprint = false;
  bool log_sum = false;
  int belief_mc_realizations = 0;

  std::size_t density_fit_flows = 300;
  std::size_t density_max_centers = 4000;
  bool null_sanity = false;  // replace t1 by an independent flow (diagnostics)

  double resolved_sigma() const { return sigma < 0 ? 1e-2 * a_c : sigma; }
  std::size_t chaff_count() const {
    if (ad == AdStrategy::none) return 0;
    return static_cast<std::size_t>(p_a * static_cast<double>(n));
  }
  std::size_t n2() const { return n + chaff_count(); }
  void validate() const;
};

struct Corpus {
  IpdTrace train;
  IpdTrace test;
  DelayTrace d1;
  DelayTrace d2;
};

// Seed-deterministic 50/50 block split of the IPD corpus.
std::pair<IpdTrace, IpdTrace> split_ipd_trace(const IpdTrace& all,
                                              std::uint64_t seed,
                                              std::size_t block = 200);

struct Densities {
  Kde1D f_dy;
  Kde1D f_dd;
  KdeTable f_dy_tab;
  KdeTable f_dd_tab;
  double f_dd_scale = 0;  // width hint for the detector's marginalization
};

// Fits the unrelated-IPD density on the training half and the end-to-end
// jitter density on simulated training flows pushed through both delay
// traces.
Densities fit_densities(const GameParams& params, const Corpus& corpus);

struct TrialScores {
  double h1 = 0;
  double h0 = 0;
};

// Source flow plus fingerprint for the given trial's streams.
Flow make_fingerprinted_flow(const GameParams& params, const Corpus& corpus,
                             const Densities& dens, std::uint64_t trial,
                             Flow* source = nullptr);

// Detector model for a given fingerprinted flow, including the believed
// attack plan (computed with the trial's belief stream).
DetectorModel make_detector_model(const GameParams& params,
                                  const Corpus& corpus, const Densities& dens,
                                  const Flow& x, const Flow& u,
                                  std::uint64_t trial);

// Full pipeline for one trial: u -> x -> r -> z -> t1, plus an independent
// flow of length n2 scored under the same detector model.
TrialScores run_trial(const GameParams& params, const Corpus& corpus,
                      const Densities& dens, std::uint64_t trial);

struct RocCurve {
  struct Point {
    double epsilon, pf, pd;
  };
  std::vector<Point> points;
  double auc = 0;
};

// Mann-Whitney statistic: (#pairs h1 > h0 + 0.5 * #ties) / (|h1| * |h0|).
double roc_auc(const std::vector<double>& scores_h1,
               const std::vector<double>& scores_h0);

// Exact empirical ROC: every distinct pooled score is used as a threshold.
RocCurve roc_from_scores(const std::vector<double>& scores_h1,
                         const std::vector<double>& scores_h0);

RocCurve run_experiment(const GameParams& params, const Corpus& corpus,
                        const Densities& dens,
                        std::vector<double>* scores_h1 = nullptr,
                        std::vector<double>* scores_h0 = nullptr);

struct SigmaAuc {
  double sigma, auc;
};
std::vector<SigmaAuc> sweep_sigma(const GameParams& params,
                                  const Corpus& corpus, const Densities& dens,
                                  const std::vector<double>& sigma_grid);

enum class CompareAxis { detector, adversary, fingerprint };

struct NamedRoc {
  std::string preset;
  RocCurve roc;
  std::vector<double> scores_h1, scores_h0;
};

// Runs one experiment per preset along the chosen axis under common random
// numbers (identical per-trial streams; only the varied strategy differs).
std::vector<NamedRoc> compare_strategies(const GameParams& params,
                                         const Corpus& corpus,
                                         const Densities& dens,
                                         CompareAxis axis);

// Percentile bootstrap CI for one AUC (resampling trials).
std::pair<double, double> auc_bootstrap_ci(const std::vector<double>& s1,
                                           const std::vector<double>& s0,
                                           std::size_t resamples,
                                           std::uint64_t seed);

// Paired bootstrap CI of AUC(a) - AUC(b) over common trial indices.
std::pair<double, double> paired_auc_delta_ci(
    const std::vector<double>& s1a, const std::vector<double>& s0a,
    const std::vector<double>& s1b, const std::vector<double>& s0b,
    std::size_t resamples, std::uint64_t seed);

void write_roc_csv(const std::string& path, const RocCurve& roc);

struct SummaryRow {
  std::string preset;
  double auc, ci_lo, ci_hi;
  std::size_t trials;
};
void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows);

struct SigmaSweepRow {
  double sigma, auc;
};
void write_sigma_csv(const std::string& path,
                     const std::vector<SigmaAuc>& rows);

}  // namespace ffg
