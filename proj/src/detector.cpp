#include "ffg/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ffg/quadrature.hpp"
#include "ffg/trunc_gauss.hpp"

namespace ffg {

double term_integral(double dt, double den_log, double mu_i, double mu_ip1,
                     double sigma, double a_c, const LogDensityFn& f_dd_log,
                     int quad_nodes, double f_dd_scale) {
  if (quad_nodes < 2)
    throw std::invalid_argument("term_integral: quad_nodes must be >= 2");
  double num;
  if (a_c <= 0) {
    num = std::exp(f_dd_log(dt));
  } else if (!(sigma > 0)) {
    // Deterministic attack: the channel collapses to its means.
    double m1 = std::clamp(mu_i, 0.0, a_c);
    double m2 = std::clamp(mu_ip1, 0.0, a_c);
    num = std::exp(f_dd_log(dt - (m2 - m1)));
  } else {
    // Reduce to a 1-D integral over s = a_{i+1} - a_i. The difference of two
    // independent equal-sigma truncated Gaussians has a closed-form density:
    // by the Gaussian product identity,
    //   f_S(s) = phi((s - delta)/(sigma*sqrt(2))) / (sigma*sqrt(2) Z1 Z2)
    //            * [Phi((b - m)/sh) - Phi((a' - m)/sh)]
    // with delta = mu2 - mu1, m = (mu1 + mu2 - s)/2, sh = sigma/sqrt(2), and
    // [a', b] the a-range where both factors are inside [0, A_C].
    const double mu1 = mu_i, mu2 = mu_ip1;
    const double delta = mu2 - mu1;
    const double z1 = norm_cdf((a_c - mu1) / sigma) - norm_cdf(-mu1 / sigma);
    const double z2 = norm_cdf((a_c - mu2) / sigma) - norm_cdf(-mu2 / sigma);
    const double sq2 = std::sqrt(2.0);
    const double sh = sigma / sq2;
    const auto f_s = [&](double s) {
      const double lo = std::max(0.0, -s);
      const double hi = std::min(a_c, a_c - s);
      if (hi <= lo) return 0.0;
      const double m = 0.5 * (mu1 + mu2 - s);
      const double mass = norm_cdf((hi - m) / sh) - norm_cdf((lo - m) / sh);
      return norm_pdf((s - delta) / (sigma * sq2)) / (sigma * sq2 * z1 * z2) *
             mass;
    };
    // Composite panels over s in [-A_C, A_C], anchored at every sharp
    // feature: the f_S spike around delta, the truncation kinks where the
    // overlap mass saturates, and the f_dd ridge around s = dt.
    std::vector<double> bp = {-a_c, 0.0, a_c};
    const auto add_feature = [&](double center, double spread) {
      for (double m : {1.0, 2.0, 4.0, 8.0}) {
        bp.push_back(std::clamp(center - m * spread, -a_c, a_c));
        bp.push_back(std::clamp(center + m * spread, -a_c, a_c));
      }
    };
    add_feature(delta, sigma * sq2);
    add_feature(mu1 + mu2, sigma * sq2);
    add_feature(-(mu1 + mu2), sigma * sq2);
    add_feature(2 * a_c - (mu1 + mu2), sigma * sq2);
    add_feature((mu1 + mu2) - 2 * a_c, sigma * sq2);
    if (f_dd_scale > 0) add_feature(dt, f_dd_scale);
    std::sort(bp.begin(), bp.end());
    const GaussLegendre& panel = gauss_legendre(std::max(4, quad_nodes / 2));
    num = 0;
    for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
      const double lo = bp[p], width = bp[p + 1] - bp[p];
      if (!(width > 0)) continue;
      for (std::size_t j = 0; j < panel.nodes.size(); ++j) {
        const double s = lo + width * panel.nodes[j];
        num += width * panel.weights[j] * std::exp(f_dd_log(dt - s)) * f_s(s);
      }
    }
  }
  if (!std::isfinite(num))
    throw std::runtime_error("term_integral: non-finite density value");
  return num * std::exp(-den_log);
}

Score lambda1(const Flow& t_matched, const Flow& x, const DetectorModel& model) {
  if (t_matched.size() != x.size())
    throw std::invalid_argument("lambda1: flow length mismatch");
  if (x.size() < 2)
    throw std::invalid_argument("lambda1: need at least 2 packets");
  const std::size_t nterms = x.size() - 1;
  if (model.belief.mu.size() != x.size() && model.belief.a_c > 0)
    throw std::invalid_argument("lambda1: belief mean length mismatch");
  if (model.denominator_uses_fingerprint &&
      model.fingerprint_ipd_shift.size() != nterms)
    throw std::invalid_argument("lambda1: fingerprint shift length mismatch");

  Score score;
  score.per_term.resize(nterms);
  const IpdSeq dt = ipd(t_matched);
  const IpdSeq dx = ipd(x);
  for (std::size_t i = 0; i < nterms; ++i) {
    double den_arg = model.denominator_uses_fingerprint
                         ? model.fingerprint_ipd_shift[i]
                         : dt[i];
    double mu_i = model.belief.a_c > 0 ? model.belief.mu[i] : 0.0;
    double mu_ip1 = model.belief.a_c > 0 ? model.belief.mu[i + 1] : 0.0;
    // The jitter density sees the fingerprint-compensated increment; the
    // H0 density sees the raw observation.
    score.per_term[i] =
        term_integral(dt[i] - dx[i], model.f_dy_log(den_arg), mu_i, mu_ip1,
                      model.belief.sigma, model.belief.a_c, model.f_dd_log,
                      model.quad_nodes, model.f_dd_scale);
  }
  for (double v : score.per_term)
    score.value += model.log_sum ? std::log(std::max(v, 1e-300)) : v;
  return score;
}

AttackPlan detector_attack_belief(const Flow& x, const LogDensityFn& f_dy_log,
                                  const BeliefConfig& cfg, Rng* rng) {
  AttackPlan plan;
  plan.a_c = cfg.a_c;
  plan.sigma = cfg.sigma;
  if (cfg.a_c <= 0) {
    plan.mu.assign(x.size(), 0.0);
    return plan;
  }
  if (cfg.mc_realizations > 0) {
    if (!cfg.d1 || !rng)
      throw std::invalid_argument(
          "detector_attack_belief: MC marginalization needs a delay trace and rng");
    std::vector<double> acc(x.size(), 0.0);
    for (int k = 0; k < cfg.mc_realizations; ++k) {
      Flow r = apply_delay(x, *cfg.d1, *rng);
      std::vector<double> mu = optimal_means(r, cfg.a_c, f_dy_log,
                                             cfg.grid_size,
                                             cfg.follow_paper_equations);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += mu[i];
    }
    plan.mu.resize(x.size());
    for (std::size_t i = 0; i < acc.size(); ++i)
      plan.mu[i] = std::clamp(acc[i] / cfg.mc_realizations, 0.0, cfg.a_c);
  } else {
    plan.mu = optimal_means(x, cfg.a_c, f_dy_log, cfg.grid_size,
                            cfg.follow_paper_equations);
  }
  return plan;
}

double calibrate_threshold(const Flow& x, const DetectorModel& model,
                           const IpdTrace& null_trace, std::size_t n2,
                           double eta, std::size_t trials, Rng& rng,
                           std::vector<double>* null_scores, double rho_step) {
  if (!(eta > 0) || !(eta < 1))
    throw std::invalid_argument("calibrate_threshold: eta must be in (0,1)");
  if (static_cast<double>(trials) < std::ceil(10.0 / eta))
    throw std::invalid_argument(
        "calibrate_threshold: too few trials for the requested eta");
  const std::vector<double> ea = expected_attack_delay(model.belief);
  std::vector<double> scores;
  scores.reserve(trials);
  for (std::size_t k = 0; k < trials; ++k) {
    Flow y = sample_flow(null_trace, n2, rng);
    double rho = estimate_rho(
        x, y, ea, default_rho_grid(x, y, model.belief.a_c, rho_step));
    MatchResult m = match_flows(x, y, rho, ea);
    scores.push_back(lambda1(extract_matched(y, m), x, model).value);
  }
  if (null_scores) *null_scores = scores;
  std::sort(scores.begin(), scores.end());
  // Order statistic s_(N-m), m = floor(eta*N): at most m scores exceed it.
  auto m = static_cast<std::size_t>(eta * static_cast<double>(trials));
  return scores[trials - m - 1];
}

double baseline_compensate_score(const Flow& t_matched, const Flow& x,
                                 const DetectorModel& model) {
  if (t_matched.size() != x.size())
    throw std::invalid_argument("baseline_compensate_score: length mismatch");
  if (x.size() < 2)
    throw std::invalid_argument("baseline_compensate_score: need >= 2 packets");
  const IpdSeq dt = ipd(t_matched);
  const IpdSeq dx = ipd(x);
  double score = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    double dmu = 0;
    if (model.belief.a_c > 0)
      dmu = model.belief.mu[i + 1] - model.belief.mu[i];
    score += model.f_dd_log(dt[i] - dx[i] - dmu) - model.f_dy_log(dt[i]);
  }
  return score;
}

}  // namespace ffg
