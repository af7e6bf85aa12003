#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ffg {

// One-dimensional Gaussian-kernel density estimate. The density floor keeps
// log terms finite for outliers far from every center.
struct Kde1D {
  std::vector<double> centers;
  double bandwidth = 0;
  double floor = 1e-12;

  double pdf(double x) const;
  double logpdf(double x) const;
  double min_center() const;
  double max_center() const;
};

// bandwidth <= 0 selects Silverman's rule: 1.06 * std * m^(-1/5).
Kde1D kde_fit(std::span<const double> samples, double bandwidth = 0.0);

double kde_logpdf(const Kde1D& kde, double x);

// Dense log-density table with linear interpolation; evaluation drops from
// O(centers) to O(1). Outside the tabulated range the density is at the
// floor anyway, so lookups clamp there.
struct KdeTable {
  double lo = 0, step = 0, log_floor = 0;
  std::vector<double> logv;

  double logpdf(double x) const {
    if (!(x >= lo)) return log_floor;
    double pos = (x - lo) / step;
    auto k = static_cast<std::size_t>(pos);
    if (k + 1 >= logv.size()) return log_floor;
    double f = pos - static_cast<double>(k);
    return logv[k] + f * (logv[k + 1] - logv[k]);
  }

  static KdeTable build(const Kde1D& kde, std::size_t points = 4096);
};

// Text serialization (bandwidth, floor, centers), for reproducing runs.
void save_kde(const std::string& path, const Kde1D& kde);
Kde1D load_kde(const std::string& path);

}  // namespace ffg
