#include "ffg/adversary.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "ffg/trunc_gauss.hpp"

namespace ffg {

std::vector<double> optimal_means(const Flow& r, double a_c,
                                  const LogDensityFn& f_dy_log, int grid_size,
                                  bool follow_paper_equations) {
  if (r.empty()) throw std::invalid_argument("optimal_means: empty flow");
  if (a_c < 0) throw std::invalid_argument("optimal_means: A_C must be >= 0");
  std::vector<double> deltas;
  if (r.size() >= 2) deltas = ipd(r).deltas;
  auto dir = follow_paper_equations ? OptimizeDirection::minimize
                                    : OptimizeDirection::maximize;
  return optimize_offset_path(deltas, a_c, grid_size, f_dy_log, dir);
}

std::vector<double> sample_delays(const std::vector<double>& mu, double sigma,
                                  double a_c, Rng& rng) {
  if (a_c < 0) throw std::invalid_argument("sample_delays: A_C must be >= 0");
  std::vector<double> a(mu.size(), 0.0);
  if (a_c == 0) return a;
  for (std::size_t i = 0; i < mu.size(); ++i)
    a[i] = TruncGauss(mu[i], sigma, 0.0, a_c).sample(rng);
  return a;
}

std::vector<double> chaff_uniform(const Flow& r, std::size_t n_a, Rng& rng) {
  if (r.empty()) throw std::invalid_argument("chaff_uniform: empty flow");
  std::vector<double> c(n_a);
  std::uniform_real_distribution<double> u(r.front(), r.back());
  for (double& v : c) v = u(rng);
  return c;
}

std::vector<double> chaff_evasive(const Flow& r, const std::vector<double>& a,
                                  std::size_t n_a, double a_c, double offset) {
  if (r.empty()) throw std::invalid_argument("chaff_evasive: empty flow");
  if (a.size() != r.size())
    throw std::invalid_argument("chaff_evasive: delay length must match flow");
  const double hi = r.back() + a_c;
  std::vector<double> c(n_a);
  for (std::size_t j = 0; j < n_a; ++j) {
    std::size_t i = j % r.size();
    c[j] = std::clamp(r[i] + a[i] + offset, 0.0, hi);
  }
  return c;
}

Flow apply_attack(const Flow& r, const std::vector<double>& a,
                  const std::vector<double>& chaff) {
  if (a.size() != r.size())
    throw std::invalid_argument("apply_attack: delay length must match flow");
  std::vector<double> ts;
  ts.reserve(r.size() + chaff.size());
  for (std::size_t i = 0; i < r.size(); ++i) ts.push_back(r[i] + a[i]);
  ts.insert(ts.end(), chaff.begin(), chaff.end());
  std::sort(ts.begin(), ts.end());
  return Flow(std::move(ts));
}

}  // namespace ffg
