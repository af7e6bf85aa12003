#pragma once

#include <cstddef>
#include <vector>

#include "ffg/flow.hpp"
#include "ffg/rng.hpp"
#include "ffg/typicality.hpp"

namespace ffg {

// The adversary's chosen truncated-Gaussian delay means, variance and chaff
// timings, under the delay cap A_C and chaff ratio cap P_A.
struct AttackPlan {
  std::vector<double> mu;
  double sigma = 0;
  std::vector<double> chaff;
  double a_c = 0;
  double p_a = 0;
};

enum class AdStrategy {
  optimal,               // typicality means + evasive chaff
  uniform_mu,            // means i.i.d. uniform on [0, A_C]
  uniform_delay,         // delays themselves i.i.d. uniform on [0, A_C]
  optimal_random_chaff,  // typicality means, uniform chaff
  none,
};

// Pushes the perturbed IPDs toward the high-likelihood region of the
// unrelated-traffic density; same grid DP as the fingerprinter, opposite
// direction.
std::vector<double> optimal_means(const Flow& r, double a_c,
                                  const LogDensityFn& f_dy_log, int grid_size,
                                  bool follow_paper_equations = false);

// a[i] ~ TruncGauss(mu[i], sigma, 0, A_C), independent.
std::vector<double> sample_delays(const std::vector<double>& mu, double sigma,
                                  double a_c, Rng& rng);

// n_A chaff timings i.i.d. uniform between the first and last real packet.
std::vector<double> chaff_uniform(const Flow& r, std::size_t n_a, Rng& rng);

// Places each dummy just after a delayed real packet (round-robin over the
// real packets) so the squared-error matcher always prefers the real one.
// Timings are clamped to [0, r_n + A_C].
std::vector<double> chaff_evasive(const Flow& r, const std::vector<double>& a,
                                  std::size_t n_a, double a_c,
                                  double offset = 1e-3);

// z = sort((r + a) || chaff); output length n + n_A.
Flow apply_attack(const Flow& r, const std::vector<double>& a,
                  const std::vector<double>& chaff);

}  // namespace ffg
