#pragma once

#include "ffg/rng.hpp"

namespace ffg {

double norm_pdf(double x);
double norm_cdf(double x);
// Inverse standard normal CDF (Acklam's rational approximation plus one
// Halley refinement; relative error below 1e-13 for p in (0,1)).
double norm_quantile(double p);

// Gaussian truncated to [lo, hi]; the attack channel uses lo = 0, hi = A_C.
struct TruncGauss {
  double mu;
  double sigma;
  double lo;
  double hi;

  TruncGauss(double mu, double sigma, double lo, double hi);

  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double q) const;  // q in [0,1], result in [lo,hi]
  double sample(Rng& rng) const;    // inverse-CDF sampling, never escapes [lo,hi]
  double mean() const;

 private:
  double alpha_, beta_, z_;  // standardized bounds and normalizer
};

double tg_pdf(const TruncGauss& d, double x);
double tg_sample(const TruncGauss& d, Rng& rng);
double tg_mean(const TruncGauss& d);
double tg_mean(double mu, double sigma, double lo, double hi);

}  // namespace ffg
