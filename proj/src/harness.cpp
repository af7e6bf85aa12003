#include "ffg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "ffg/matcher.hpp"

namespace ffg {

void GameParams::validate() const {
  if (n < 2) throw std::invalid_argument("GameParams: n must be >= 2");
  if (w_c < 0 || a_c < 0 || p_a < 0)
    throw std::invalid_argument("GameParams: caps must be >= 0");
  if (!(eta > 0) || !(eta < 1))
    throw std::invalid_argument("GameParams: eta must be in (0,1)");
  if (trials_h1 < 1 || trials_null < 1)
    throw std::invalid_argument("GameParams: trial counts must be >= 1");
  if (grid_size < 2 || quad_nodes < 2)
    throw std::invalid_argument("GameParams: grid_size and quad_nodes must be >= 2");
  if (!(rho_step > 0))
    throw std::invalid_argument("GameParams: rho_step must be > 0");
}

std::pair<IpdTrace, IpdTrace> split_ipd_trace(const IpdTrace& all,
                                              std::uint64_t seed,
                                              std::size_t block) {
  if (all.size() < 2 * block)
    block = std::max<std::size_t>(1, all.size() / 8);
  const std::size_t nblocks = (all.size() + block - 1) / block;
  std::vector<std::size_t> order(nblocks);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = derive_rng(seed, "corpus-split");
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<double> a, b;
  for (std::size_t k = 0; k < nblocks; ++k) {
    const std::size_t blk = order[k];
    auto first = all.ipds.begin() + static_cast<std::ptrdiff_t>(blk * block);
    auto last = all.ipds.begin() +
                static_cast<std::ptrdiff_t>(std::min(all.size(), (blk + 1) * block));
    auto& dst = (k % 2 == 0) ? a : b;
    dst.insert(dst.end(), first, last);
  }
  return {IpdTrace(std::move(a)), IpdTrace(std::move(b))};
}

namespace {

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t workers = std::min<std::size_t>(hw ? hw : 4, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mtx;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mtx);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::vector<double> subsample(const std::vector<double>& v, std::size_t cap,
                              Rng& rng) {
  if (v.size() <= cap) return v;
  std::vector<double> out(v);
  std::shuffle(out.begin(), out.end(), rng);
  out.resize(cap);
  return out;
}

Kde1D fit_with_fallback(const std::vector<double>& samples,
                        double fallback_bandwidth) {
  try {
    return kde_fit(samples);
  } catch (const std::invalid_argument&) {
    return kde_fit(samples, fallback_bandwidth);
  }
}

}  // namespace

Densities fit_densities(const GameParams& params, const Corpus& corpus) {
  params.validate();
  Densities d;

  Rng sub_rng = derive_rng(params.master_seed, "fdy-subsample");
  d.f_dy = kde_fit(
      subsample(corpus.train.ipds, params.density_max_centers, sub_rng));

  // Jitter increments observed on clean training flows pushed through both
  // delay traces.
  std::vector<double> jitter;
  jitter.reserve(params.density_fit_flows * (params.n - 1));
  for (std::size_t k = 0; k < params.density_fit_flows; ++k) {
    Rng rng = derive_rng(params.master_seed, "fdd-fit", k);
    Flow u = sample_flow(corpus.train, params.n, rng);
    Flow r = apply_delay(u, corpus.d1, rng);
    Flow t = apply_delay(r, corpus.d2, rng);
    for (std::size_t i = 0; i + 1 < params.n; ++i)
      jitter.push_back((t[i + 1] - t[i]) - (u[i + 1] - u[i]));
  }
  Rng sub2 = derive_rng(params.master_seed, "fdd-subsample");
  // Zero-jitter corpora collapse to a point mass; a narrow fixed bandwidth
  // keeps the density usable there.
  d.f_dd = fit_with_fallback(
      subsample(jitter, params.density_max_centers, sub2), 1e-4);

  double mean = std::accumulate(jitter.begin(), jitter.end(), 0.0) /
                static_cast<double>(jitter.size());
  double var = 0;
  for (double v : jitter) var += (v - mean) * (v - mean);
  var /= static_cast<double>(jitter.size());
  d.f_dd_scale = std::max(std::sqrt(var), d.f_dd.bandwidth);

  d.f_dy_tab = KdeTable::build(d.f_dy);
  d.f_dd_tab = KdeTable::build(d.f_dd);
  return d;
}

Flow make_fingerprinted_flow(const GameParams& params, const Corpus& corpus,
                             const Densities& dens, std::uint64_t trial,
                             Flow* source) {
  const auto f_dy = [&dens](double v) { return dens.f_dy_tab.logpdf(v); };
  Rng u_rng = derive_rng(params.master_seed, "trial-u", trial);
  Flow u = sample_flow(corpus.test, params.n, u_rng);
  if (source) *source = u;
  Rng fp_rng = derive_rng(params.master_seed, "trial-fp", trial);
  switch (params.ta) {
    case FingerprintStrategy::none:
      return u;
    case FingerprintStrategy::optimal:
      return embed(u, optimal_fingerprint(u, params.w_c, f_dy,
                                          params.grid_size,
                                          params.follow_paper_equations));
    case FingerprintStrategy::uniform:
      return embed(u, uniform_fingerprint(params.n, params.w_c, fp_rng));
    case FingerprintStrategy::fancy:
      return fancy_fingerprint(u, params.w_c, fp_rng);
  }
  return u;
}

DetectorModel make_detector_model(const GameParams& params,
                                  const Corpus& corpus, const Densities& dens,
                                  const Flow& x, const Flow& u,
                                  std::uint64_t trial) {
  DetectorModel model;
  model.f_dd_log = [&dens](double v) { return dens.f_dd_tab.logpdf(v); };
  model.f_dy_log = [&dens](double v) { return dens.f_dy_tab.logpdf(v); };
  model.quad_nodes = params.quad_nodes;
  model.f_dd_scale = dens.f_dd_scale;
  model.denominator_uses_fingerprint = params.denominator_uses_fingerprint;
  model.log_sum = params.log_sum;
  if (params.denominator_uses_fingerprint) {
    model.fingerprint_ipd_shift.resize(params.n - 1);
    for (std::size_t i = 0; i + 1 < params.n; ++i)
      model.fingerprint_ipd_shift[i] = (x[i + 1] - x[i]) - (u[i + 1] - u[i]);
  }
  // The detector knows the attack-delay distribution. For the typicality
  // adversaries that is the truncated-Gaussian plan recomputed from x; for
  // the delay-randomizing adversaries it is (approximately) the uniform
  // distribution on [0, a_c], expressed as a wide truncated Gaussian.
  if (params.a_c > 0 && (params.ad == AdStrategy::uniform_mu ||
                         params.ad == AdStrategy::uniform_delay)) {
    model.belief.a_c = params.a_c;
    model.belief.sigma = 100 * params.a_c;
    model.belief.mu.assign(x.size(), 0.5 * params.a_c);
  } else {
    BeliefConfig bc;
    bc.a_c = params.ad == AdStrategy::none ? 0.0 : params.a_c;
    bc.sigma = params.resolved_sigma();
    bc.grid_size = params.grid_size;
    bc.follow_paper_equations = params.follow_paper_equations;
    bc.mc_realizations = params.belief_mc_realizations;
    bc.d1 = &corpus.d1;
    Rng belief_rng = derive_rng(params.master_seed, "trial-belief", trial);
    model.belief = detector_attack_belief(x, model.f_dy_log, bc, &belief_rng);
  }
  model.belief.p_a = params.p_a;
  return model;
}

TrialScores run_trial(const GameParams& params, const Corpus& corpus,
                      const Densities& dens, std::uint64_t trial) {
  const auto f_dy = [&dens](double v) { return dens.f_dy_tab.logpdf(v); };
  const double sigma = params.resolved_sigma();
  const std::size_t n_a = params.chaff_count();
  const std::size_t n2 = params.n2();

  Flow u;
  Flow x = make_fingerprinted_flow(params, corpus, dens, trial, &u);

  // First-hop delay.
  Rng d1_rng = derive_rng(params.master_seed, "trial-d1", trial);
  std::uniform_real_distribution<double> origin1(0.0, corpus.d1.span());
  const double o1 = origin1(d1_rng);
  const std::vector<double> d1v = delays_at(corpus.d1, x, o1);
  std::vector<double> rts = x.timestamps;
  for (std::size_t i = 0; i < rts.size(); ++i) rts[i] += d1v[i];
  std::sort(rts.begin(), rts.end());
  const Flow r(std::move(rts));

  // Adversary.
  Rng ad_rng = derive_rng(params.master_seed, "trial-ad", trial);
  std::vector<double> a(params.n, 0.0), chaff;
  if (params.ad != AdStrategy::none && params.a_c > 0) {
    std::vector<double> mu(params.n, 0.0);
    switch (params.ad) {
      case AdStrategy::optimal:
      case AdStrategy::optimal_random_chaff:
        mu = optimal_means(r, params.a_c, f_dy, params.grid_size,
                           params.follow_paper_equations);
        a = sample_delays(mu, sigma, params.a_c, ad_rng);
        break;
      case AdStrategy::uniform_mu: {
        std::uniform_real_distribution<double> um(0.0, params.a_c);
        for (double& m : mu) m = um(ad_rng);
        a = sample_delays(mu, sigma, params.a_c, ad_rng);
        break;
      }
      case AdStrategy::uniform_delay: {
        std::uniform_real_distribution<double> ua(0.0, params.a_c);
        for (double& v : a) v = ua(ad_rng);
        break;
      }
      case AdStrategy::none:
        break;
    }
    chaff = params.ad == AdStrategy::optimal_random_chaff
                ? chaff_uniform(r, n_a, ad_rng)
                : chaff_evasive(r, a, n_a, params.a_c, params.chaff_offset);
  } else if (params.ad != AdStrategy::none && n_a > 0) {
    // Chaff budget applies even when the delay cap is zero.
    chaff = params.ad == AdStrategy::optimal_random_chaff
                ? chaff_uniform(r, n_a, ad_rng)
                : chaff_evasive(r, a, n_a, params.a_c, params.chaff_offset);
  }
  const Flow z = apply_attack(r, a, chaff);

  // Second-hop delay; remember per-real-packet totals for the rho oracle.
  Rng d2_rng = derive_rng(params.master_seed, "trial-d2", trial);
  std::uniform_real_distribution<double> origin2(0.0, corpus.d2.span());
  const double o2 = origin2(d2_rng);
  std::vector<double> true_delay(params.n);
  for (std::size_t i = 0; i < params.n; ++i)
    true_delay[i] = d1v[i] + delay_at(corpus.d2, o2 + r[i] + a[i]);
  Flow t1 = apply_delay(z, corpus.d2, o2);
  if (params.null_sanity) {
    Rng s_rng = derive_rng(params.master_seed, "trial-sanity", trial);
    t1 = sample_flow(corpus.test, n2, s_rng);
  }

  // Independent flow for H0.
  Rng y_rng = derive_rng(params.master_seed, "trial-y", trial);
  const Flow y = sample_flow(corpus.test, n2, y_rng);

  // Detector model: its belief matches the adversary's delay distribution.
  DetectorModel model = make_detector_model(params, corpus, dens, x, u, trial);
  const std::vector<double> ea = expected_attack_delay(model.belief);

  const auto score = [&](const Flow& t, bool is_h1) {
    double rho;
    if (params.rho_mode == RhoMode::oracle && is_h1 && !params.null_sanity) {
      rho = rho_oracle_mean(true_delay);
    } else {
      rho = estimate_rho(x, t, ea,
                         default_rho_grid(x, t, params.a_c, params.rho_step));
    }
    MatchResult m = match_flows(x, t, rho, ea);
    Flow matched = extract_matched(t, m);
    if (params.detector == DetectorVariant::baseline)
      return baseline_compensate_score(matched, x, model);
    return lambda1(matched, x, model).value;
  };

  return TrialScores{score(t1, true), score(y, false)};
}

double roc_auc(const std::vector<double>& scores_h1,
               const std::vector<double>& scores_h0) {
  if (scores_h1.empty() || scores_h0.empty())
    throw std::invalid_argument("roc_auc: empty score set");
  struct Item {
    double v;
    bool h1;
  };
  std::vector<Item> all;
  all.reserve(scores_h1.size() + scores_h0.size());
  for (double v : scores_h1) all.push_back({v, true});
  for (double v : scores_h0) all.push_back({v, false});
  std::sort(all.begin(), all.end(),
            [](const Item& a, const Item& b) { return a.v < b.v; });
  double rank_sum_h1 = 0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].v == all[i].v) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (std::size_t k = i; k < j; ++k)
      if (all[k].h1) rank_sum_h1 += avg_rank;
    i = j;
  }
  const double n1 = static_cast<double>(scores_h1.size());
  const double n0 = static_cast<double>(scores_h0.size());
  return (rank_sum_h1 - n1 * (n1 + 1) / 2) / (n1 * n0);
}

RocCurve roc_from_scores(const std::vector<double>& scores_h1,
                         const std::vector<double>& scores_h0) {
  std::vector<double> s1 = scores_h1, s0 = scores_h0;
  std::sort(s1.begin(), s1.end());
  std::sort(s0.begin(), s0.end());
  std::vector<double> eps = s1;
  eps.insert(eps.end(), s0.begin(), s0.end());
  std::sort(eps.begin(), eps.end());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());

  RocCurve roc;
  roc.points.reserve(eps.size() + 1);
  const auto frac_above = [](const std::vector<double>& s, double e) {
    auto it = std::upper_bound(s.begin(), s.end(), e);
    return static_cast<double>(s.end() - it) / static_cast<double>(s.size());
  };
  // Threshold below every score: the (1,1) corner.
  roc.points.push_back({eps.front() - 1.0, 1.0, 1.0});
  for (double e : eps)
    roc.points.push_back({e, frac_above(s0, e), frac_above(s1, e)});
  std::reverse(roc.points.begin(), roc.points.end());  // ascending P_F
  roc.auc = roc_auc(scores_h1, scores_h0);
  return roc;
}

RocCurve run_experiment(const GameParams& params, const Corpus& corpus,
                        const Densities& dens, std::vector<double>* scores_h1,
                        std::vector<double>* scores_h0) {
  params.validate();
  const std::size_t trials = std::max(params.trials_h1, params.trials_null);
  std::vector<TrialScores> out(trials);
  parallel_for(trials, [&](std::size_t i) {
    out[i] = run_trial(params, corpus, dens, i);
  });
  std::vector<double> s1, s0;
  s1.reserve(params.trials_h1);
  s0.reserve(params.trials_null);
  for (std::size_t i = 0; i < params.trials_h1; ++i) s1.push_back(out[i].h1);
  for (std::size_t i = 0; i < params.trials_null; ++i) s0.push_back(out[i].h0);
  if (scores_h1) *scores_h1 = s1;
  if (scores_h0) *scores_h0 = s0;
  return roc_from_scores(s1, s0);
}

std::vector<SigmaAuc> sweep_sigma(const GameParams& params,
                                  const Corpus& corpus, const Densities& dens,
                                  const std::vector<double>& sigma_grid) {
  if (sigma_grid.empty())
    throw std::invalid_argument("sweep_sigma: empty sigma grid");
  std::vector<SigmaAuc> out;
  out.reserve(sigma_grid.size());
  for (double s : sigma_grid) {
    GameParams p = params;
    p.sigma = s;
    out.push_back({s, run_experiment(p, corpus, dens).auc});
  }
  return out;
}

std::vector<NamedRoc> compare_strategies(const GameParams& params,
                                         const Corpus& corpus,
                                         const Densities& dens,
                                         CompareAxis axis) {
  std::vector<std::pair<std::string, GameParams>> presets;
  switch (axis) {
    case CompareAxis::detector: {
      GameParams p = params;
      p.detector = DetectorVariant::proposed;
      presets.emplace_back("proposed", p);
      p.detector = DetectorVariant::baseline;
      presets.emplace_back("estimate-compensate", p);
      break;
    }
    case CompareAxis::adversary: {
      const std::pair<const char*, AdStrategy> table[] = {
          {"optimal", AdStrategy::optimal},
          {"uniform-mu", AdStrategy::uniform_mu},
          {"uniform-delay", AdStrategy::uniform_delay},
          {"optimal-random-chaff", AdStrategy::optimal_random_chaff},
      };
      for (auto& [name, s] : table) {
        GameParams p = params;
        p.ad = s;
        presets.emplace_back(name, p);
      }
      break;
    }
    case CompareAxis::fingerprint: {
      const std::pair<const char*, FingerprintStrategy> table[] = {
          {"optimal", FingerprintStrategy::optimal},
          {"uniform", FingerprintStrategy::uniform},
          {"fancy", FingerprintStrategy::fancy},
          {"none", FingerprintStrategy::none},
      };
      for (auto& [name, s] : table) {
        GameParams p = params;
        p.ta = s;
        presets.emplace_back(name, p);
      }
      break;
    }
  }
  std::vector<NamedRoc> out;
  out.reserve(presets.size());
  for (auto& [name, p] : presets) {
    NamedRoc nr;
    nr.preset = name;
    nr.roc = run_experiment(p, corpus, dens, &nr.scores_h1, &nr.scores_h0);
    out.push_back(std::move(nr));
  }
  return out;
}

namespace {

std::vector<double> resample(const std::vector<double>& v,
                             const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(v[i % v.size()]);
  return out;
}

}  // namespace

std::pair<double, double> auc_bootstrap_ci(const std::vector<double>& s1,
                                           const std::vector<double>& s0,
                                           std::size_t resamples,
                                           std::uint64_t seed) {
  Rng rng = derive_rng(seed, "auc-bootstrap");
  std::uniform_int_distribution<std::size_t> pick1(0, s1.size() - 1);
  std::uniform_int_distribution<std::size_t> pick0(0, s0.size() - 1);
  std::vector<double> aucs(resamples);
  for (std::size_t b = 0; b < resamples; ++b) {
    std::vector<double> r1(s1.size()), r0(s0.size());
    for (auto& v : r1) v = s1[pick1(rng)];
    for (auto& v : r0) v = s0[pick0(rng)];
    aucs[b] = roc_auc(r1, r0);
  }
  std::sort(aucs.begin(), aucs.end());
  return {aucs[static_cast<std::size_t>(0.025 * resamples)],
          aucs[std::min(resamples - 1,
                        static_cast<std::size_t>(0.975 * resamples))]};
}

std::pair<double, double> paired_auc_delta_ci(
    const std::vector<double>& s1a, const std::vector<double>& s0a,
    const std::vector<double>& s1b, const std::vector<double>& s0b,
    std::size_t resamples, std::uint64_t seed) {
  const std::size_t trials = std::min(
      {s1a.size(), s0a.size(), s1b.size(), s0b.size()});
  Rng rng = derive_rng(seed, "paired-bootstrap");
  std::uniform_int_distribution<std::size_t> pick(0, trials - 1);
  std::vector<double> deltas(resamples);
  std::vector<std::size_t> idx(trials);
  for (std::size_t b = 0; b < resamples; ++b) {
    for (auto& i : idx) i = pick(rng);
    deltas[b] = roc_auc(resample(s1a, idx), resample(s0a, idx)) -
                roc_auc(resample(s1b, idx), resample(s0b, idx));
  }
  std::sort(deltas.begin(), deltas.end());
  return {deltas[static_cast<std::size_t>(0.025 * resamples)],
          deltas[std::min(resamples - 1,
                          static_cast<std::size_t>(0.975 * resamples))]};
}

namespace {

void write_lines(const std::string& path, const std::string& header,
                 const std::vector<std::string>& lines) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << header << "\n";
  for (const auto& l : lines) out << l << "\n";
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

}  // namespace

void write_roc_csv(const std::string& path, const RocCurve& roc) {
  std::vector<std::string> lines;
  lines.reserve(roc.points.size());
  for (const auto& p : roc.points)
    lines.push_back(fmt("%.17g,%.17g,%.17g", p.epsilon, p.pf, p.pd));
  write_lines(path, "epsilon,pf,pd", lines);
}

void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows) {
  std::vector<std::string> lines;
  for (const auto& r : rows)
    lines.push_back(fmt("%s,%.17g,%.17g,%.17g,%zu", r.preset.c_str(), r.auc,
                        r.ci_lo, r.ci_hi, r.trials));
  write_lines(path, "preset,auc,auc_ci_lo,auc_ci_hi,trials", lines);
}

void write_sigma_csv(const std::string& path,
                     const std::vector<SigmaAuc>& rows) {
  std::vector<std::string> lines;
  for (const auto& r : rows)
    lines.push_back(fmt("%.17g,%.17g", r.sigma, r.auc));
  write_lines(path, "sigma,auc", lines);
}

}  // namespace ffg
