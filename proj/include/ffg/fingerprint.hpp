#pragma once

#include <vector>

#include "ffg/flow.hpp"
#include "ffg/rng.hpp"
#include "ffg/typicality.hpp"

namespace ffg {

// Additive per-packet fingerprint delays, each within [0, W_C].
struct Fingerprint {
  std::vector<double> w;

  std::size_t size() const { return w.size(); }
};

// Pushes the fingerprinted IPDs away from the high-likelihood region of the
// unrelated-traffic density (grid-exact via dynamic programming). With
// follow_paper_equations the direction flips to the literal argmax form.
Fingerprint optimal_fingerprint(const Flow& u, double w_c,
                                const LogDensityFn& f_dy_log, int grid_size,
                                bool follow_paper_equations = false);

Fingerprint uniform_fingerprint(std::size_t n, double w_c, Rng& rng);

// Fancy-style embedding: output IPDs are input IPDs +/- w_fancy according
// to the bit sequence; IPDs that would go negative are clamped to 0.
Flow fancy_fingerprint(const Flow& u, double w_fancy,
                       const std::vector<int>& bits);
Flow fancy_fingerprint(const Flow& u, double w_fancy, Rng& rng);

// x = u + w, re-sorted if the addition inverts packet order.
Flow embed(const Flow& u, const Fingerprint& w);

}  // namespace ffg
