#include "ffg/matcher.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "ffg/trunc_gauss.hpp"

namespace ffg {

std::vector<double> expected_attack_delay(const AttackPlan& plan) {
  std::vector<double> ea(plan.mu.size(), 0.0);
  if (plan.a_c <= 0) return ea;
  for (std::size_t i = 0; i < plan.mu.size(); ++i)
    ea[i] = tg_mean(plan.mu[i], plan.sigma, 0.0, plan.a_c);
  return ea;
}

double rho_oracle_mean(const std::vector<double>& delays) {
  if (delays.empty())
    throw std::invalid_argument("rho_oracle_mean: empty delay sequence");
  double sum = 0;
  for (double d : delays) sum += d;
  return sum / static_cast<double>(delays.size());
}

RhoGrid default_rho_grid(const Flow& x, const Flow& t, double a_c,
                         double step) {
  const std::size_t n = x.size(), n2 = t.size();
  if (n == 0 || n2 < n)
    throw std::invalid_argument("default_rho_grid: need length(t) >= length(x) > 0");
  const std::size_t slack = n2 - n;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  // t is sorted, so for fixed i the band extremes sit at j = i and
  // j = i + slack.
  for (std::size_t i = 0; i < n; ++i) {
    lo = std::min(lo, t[i] - x[i]);
    hi = std::max(hi, t[i + slack] - x[i]);
  }
  return RhoGrid{lo - a_c, hi, step};
}

namespace {

// DP over the alignment lattice; returns the optimal cost, and the pairing
// if backtracking storage is supplied.
double align_cost(const Flow& x, const Flow& t, double rho,
                  const std::vector<double>& ea,
                  std::vector<std::size_t>* pairing) {
  const std::size_t n = x.size(), n2 = t.size();
  const std::size_t slack = n2 - n;
  // row[j - i] = best cost of matching x[0..i] with p(i) = i + (j - i).
  // Transition: either consume t[j] for x[i] or skip t[j].
  std::vector<double> prev(slack + 1), cur(slack + 1);
  std::vector<std::vector<unsigned char>> took;
  if (pairing) took.assign(n, std::vector<unsigned char>(slack + 1, 0));

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s <= slack; ++s) {
      const std::size_t j = i + s;
      double d = t[j] - x[i] - rho - ea[i];
      double c = d * d + (i > 0 ? prev[s] : 0.0);
      bool diag = true;
      if (s > 0 && cur[s - 1] < c) {
        c = cur[s - 1];  // skip t[j], keep i
        diag = false;
      }
      cur[s] = c;
      if (pairing) took[i][s] = diag ? 1 : 0;
    }
    prev.swap(cur);
  }

  if (pairing) {
    // Find the best terminal slack and backtrack.
    std::size_t s = 0;
    for (std::size_t k = 1; k <= slack; ++k)
      if (prev[k] < prev[s]) s = k;
    double best = prev[s];
    pairing->assign(n, 0);
    std::size_t i = n;
    while (i-- > 0) {
      while (!took[i][s]) --s;  // s > 0 whenever the skip branch was taken
      (*pairing)[i] = i + s;
    }
    return best;
  }
  double best = prev[0];
  for (std::size_t k = 1; k <= slack; ++k) best = std::min(best, prev[k]);
  return best;
}

}  // namespace

double estimate_rho(const Flow& x, const Flow& t,
                    const std::vector<double>& ea, const RhoGrid& grid) {
  if (!(grid.step > 0) || grid.hi < grid.lo)
    throw std::invalid_argument("estimate_rho: empty grid");
  if (ea.size() != x.size())
    throw std::invalid_argument("estimate_rho: ea length must match x");
  if (t.size() < x.size() || x.empty())
    throw std::invalid_argument("estimate_rho: need length(t) >= length(x) > 0");
  double best_rho = grid.lo;
  double best_cost = std::numeric_limits<double>::infinity();
  const auto steps =
      static_cast<std::size_t>((grid.hi - grid.lo) / grid.step) + 1;
  for (std::size_t k = 0; k < steps; ++k) {
    double rho = grid.lo + grid.step * static_cast<double>(k);
    double c = align_cost(x, t, rho, ea, nullptr);
    if (c < best_cost) {
      best_cost = c;
      best_rho = rho;
    }
  }
  return best_rho;
}

MatchResult match_flows(const Flow& x, const Flow& t, double rho,
                        const std::vector<double>& ea) {
  if (x.empty()) throw std::invalid_argument("match_flows: empty x");
  if (t.size() < x.size())
    throw std::invalid_argument(
        "match_flows: observed flow shorter than fingerprinted flow");
  if (ea.size() != x.size())
    throw std::invalid_argument("match_flows: ea length must match x");
  MatchResult res;
  res.rho = rho;
  res.cost = align_cost(x, t, rho, ea, &res.pairing);
  return res;
}

Flow extract_matched(const Flow& t, const MatchResult& result) {
  std::vector<double> ts;
  ts.reserve(result.pairing.size());
  for (std::size_t j : result.pairing) {
    if (j >= t.size())
      throw std::invalid_argument("extract_matched: pairing index out of range");
    ts.push_back(t[j]);
  }
  return Flow(std::move(ts));
}

}  // namespace ffg
