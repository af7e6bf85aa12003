#pragma once

#include <cstddef>
#include <vector>

#include "ffg/adversary.hpp"
#include "ffg/flow.hpp"
#include "ffg/matcher.hpp"
#include "ffg/rng.hpp"
#include "ffg/trace.hpp"
#include "ffg/typicality.hpp"

namespace ffg {

// Everything the detector assumes: the jitter and unrelated-IPD densities,
// its belief about the attack channel, and the test's numeric knobs.
struct DetectorModel {
  LogDensityFn f_dd_log;  // end-to-end jitter density (log pdf)
  LogDensityFn f_dy_log;  // unrelated-flow IPD density (log pdf)
  AttackPlan belief;
  int quad_nodes = 16;
  // Characteristic width of f_dd (sample std or KDE bandwidth). When set,
  // the marginalization integral places quadrature panels on the f_dd ridge,
  // which keeps it accurate when sigma is much larger than this width.
  double f_dd_scale = 0;
  // The literal printed ratio divides by the density of the fingerprint
  // increments instead of the observed ones; kept switchable.
  bool denominator_uses_fingerprint = false;
  std::vector<double> fingerprint_ipd_shift;  // delta-w, literal mode only
  bool log_sum = false;  // aggregate per-IPD ratios as sum of logs
};

// The first-order statistic and its per-IPD contributions.
struct Score {
  double value = 0;
  std::vector<double> per_term;
};

// One per-IPD likelihood-ratio integral: the jitter density of the
// compensated IPD, marginalized over both adjacent truncated-Gaussian
// attack delays, divided by the given H0 log-density value. The double
// integral is reduced to a 1-D integral against the density of the delay
// difference S = A_{i+1} - A_i; that density is evaluated by Gauss-Legendre
// in the probability domain of one truncated Gaussian (inverse-CDF
// substitution), and the outer integral uses composite panels anchored both
// at the S-density features and, when f_dd_scale > 0, at the f_dd ridge.
// This stays accurate for sigma both far below and far above A_C, and for
// f_dd much narrower than A_C.
double term_integral(double dt, double den_log, double mu_i, double mu_ip1,
                     double sigma, double a_c, const LogDensityFn& f_dd_log,
                     int quad_nodes, double f_dd_scale = 0);

Score lambda1(const Flow& t_matched, const Flow& x, const DetectorModel& model);

struct BeliefConfig {
  double a_c = 0;
  double sigma = 0;
  int grid_size = 64;
  bool follow_paper_equations = false;
  // > 0 enables Monte-Carlo marginalization over the first-hop jitter:
  // the mean optimizer runs on that many jittered copies of x and the
  // resulting mean sequences are averaged.
  int mc_realizations = 0;
  const DelayTrace* d1 = nullptr;
};

// The detector's believed attack plan, computed from x itself (the
// first-hop flow is approximated by the fingerprinted flow).
AttackPlan detector_attack_belief(const Flow& x, const LogDensityFn& f_dy_log,
                                  const BeliefConfig& cfg, Rng* rng = nullptr);

// Empirical (1-eta)-quantile of the statistic over unrelated flows of
// length n2 matched against x. Requires trials >= ceil(10/eta).
double calibrate_threshold(const Flow& x, const DetectorModel& model,
                           const IpdTrace& null_trace, std::size_t n2,
                           double eta, std::size_t trials, Rng& rng,
                           std::vector<double>* null_scores = nullptr,
                           double rho_step = 1e-3);

// Point-estimate compensation instead of marginalization:
// sum_i log f_dD(dt_i - d(mu-hat)_i) - log f_dY(dt_i).
double baseline_compensate_score(const Flow& t_matched, const Flow& x,
                                 const DetectorModel& model);

}  // namespace ffg
