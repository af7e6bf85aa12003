#include "ffg/trunc_gauss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ffg {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kSqrt2 = 1.4142135623730950488;
}  // namespace

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double norm_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    if (p == 0.0) return -HUGE_VAL;
    if (p == 1.0) return HUGE_VAL;
    throw std::invalid_argument("norm_quantile: p must be in [0,1]");
  }
  // Acklam's approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - plow) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  // One Halley step against the exact CDF.
  double e = norm_cdf(x) - p;
  double u = e / norm_pdf(x);
  x -= u / (1 + 0.5 * x * u);
  return x;
}

TruncGauss::TruncGauss(double mu, double sigma, double lo, double hi)
    : mu(mu), sigma(sigma), lo(lo), hi(hi) {
  if (!(sigma > 0)) throw std::invalid_argument("TruncGauss: sigma must be > 0");
  if (!(lo < hi)) throw std::invalid_argument("TruncGauss: requires lo < hi");
  alpha_ = (lo - mu) / sigma;
  beta_ = (hi - mu) / sigma;
  z_ = norm_cdf(beta_) - norm_cdf(alpha_);
  if (!(z_ > 0))
    throw std::invalid_argument("TruncGauss: vanishing mass on [lo,hi]");
}

double TruncGauss::pdf(double x) const {
  if (x < lo || x > hi) return 0.0;
  return norm_pdf((x - mu) / sigma) / (sigma * z_);
}

double TruncGauss::cdf(double x) const {
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  return (norm_cdf((x - mu) / sigma) - norm_cdf(alpha_)) / z_;
}

double TruncGauss::quantile(double q) const {
  if (q <= 0.0) return lo;
  if (q >= 1.0) return hi;
  double x = mu + sigma * norm_quantile(norm_cdf(alpha_) + q * z_);
  return std::clamp(x, lo, hi);
}

double TruncGauss::sample(Rng& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return quantile(u(rng));
}

double TruncGauss::mean() const {
  return mu + sigma * (norm_pdf(alpha_) - norm_pdf(beta_)) / z_;
}

double tg_pdf(const TruncGauss& d, double x) { return d.pdf(x); }
double tg_sample(const TruncGauss& d, Rng& rng) { return d.sample(rng); }
double tg_mean(const TruncGauss& d) { return d.mean(); }
double tg_mean(double mu, double sigma, double lo, double hi) {
  return TruncGauss(mu, sigma, lo, hi).mean();
}

}  // namespace ffg
