#include "ffg/fingerprint.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace ffg {

Fingerprint optimal_fingerprint(const Flow& u, double w_c,
                                const LogDensityFn& f_dy_log, int grid_size,
                                bool follow_paper_equations) {
  if (u.empty()) throw std::invalid_argument("optimal_fingerprint: empty flow");
  if (w_c < 0) throw std::invalid_argument("optimal_fingerprint: W_C must be >= 0");
  std::vector<double> deltas;
  if (u.size() >= 2) deltas = ipd(u).deltas;
  auto dir = follow_paper_equations ? OptimizeDirection::maximize
                                    : OptimizeDirection::minimize;
  Fingerprint fp;
  fp.w = optimize_offset_path(deltas, w_c, grid_size, f_dy_log, dir);
  return fp;
}

Fingerprint uniform_fingerprint(std::size_t n, double w_c, Rng& rng) {
  if (w_c < 0) throw std::invalid_argument("uniform_fingerprint: W_C must be >= 0");
  Fingerprint fp;
  fp.w.resize(n);
  std::uniform_real_distribution<double> u(0.0, w_c);
  for (double& v : fp.w) v = w_c > 0 ? u(rng) : 0.0;
  return fp;
}

Flow fancy_fingerprint(const Flow& u, double w_fancy,
                       const std::vector<int>& bits) {
  if (u.size() < 2)
    throw std::invalid_argument("fancy_fingerprint: need at least 2 packets");
  if (bits.size() != u.size() - 1)
    throw std::invalid_argument("fancy_fingerprint: bits length must be n-1");
  IpdSeq d = ipd(u);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (bits[i] != 1 && bits[i] != -1)
      throw std::invalid_argument("fancy_fingerprint: bits must be +/-1");
    d.deltas[i] = std::max(d.deltas[i] + w_fancy * bits[i], 0.0);
  }
  return flow_from_ipds(u.front(), d);
}

Flow fancy_fingerprint(const Flow& u, double w_fancy, Rng& rng) {
  std::vector<int> bits(u.size() >= 1 ? u.size() - 1 : 0);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int& b : bits) b = coin(rng) ? 1 : -1;
  return fancy_fingerprint(u, w_fancy, bits);
}

Flow embed(const Flow& u, const Fingerprint& w) {
  if (w.size() != u.size())
    throw std::invalid_argument("embed: fingerprint length must match flow");
  std::vector<double> ts = u.timestamps;
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i] += w.w[i];
  std::sort(ts.begin(), ts.end());
  return Flow(std::move(ts));
}

}  // namespace ffg
