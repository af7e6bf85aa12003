#pragma once

#include <cstddef>
#include <vector>

#include "ffg/adversary.hpp"
#include "ffg/flow.hpp"

namespace ffg {

// Order-preserving injective pairing of the fingerprinted flow into the
// observed flow, with its synchronization shift and total squared error.
struct MatchResult {
  std::vector<std::size_t> pairing;  // pairing[i] = index into t
  double rho = 0;
  double cost = 0;
};

// Per-packet expected adversary delay under the (believed) attack plan.
std::vector<double> expected_attack_delay(const AttackPlan& plan);

// Sample mean of the true per-packet network delays (simulation only).
double rho_oracle_mean(const std::vector<double>& delays);

struct RhoGrid {
  double lo = 0;
  double hi = 0;
  double step = 1e-3;
};

// Default search range: [min band diff - A_C, max band diff] where band
// diffs are t_j - x_i over the feasible alignments j - i in [0, n2 - n].
RhoGrid default_rho_grid(const Flow& x, const Flow& t, double a_c,
                         double step = 1e-3);

// Exhaustive search: the grid rho minimizing the optimal matching cost.
double estimate_rho(const Flow& x, const Flow& t,
                    const std::vector<double>& ea, const RhoGrid& grid);

// Minimum-cost monotone injective pairing over the n x n2 alignment
// lattice; skips are allowed only in t (the adversary only adds packets).
MatchResult match_flows(const Flow& x, const Flow& t, double rho,
                        const std::vector<double>& ea);

// Subsequence of t at the matched indices; length equals x.
Flow extract_matched(const Flow& t, const MatchResult& result);

}  // namespace ffg
