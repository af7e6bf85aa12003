#include "ffg/kde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace ffg {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
}

double Kde1D::pdf(double x) const {
  const double m = static_cast<double>(centers.size());
  const double inv_h = 1.0 / bandwidth;
  double sum = 0;
  for (double c : centers) {
    double u = (x - c) * inv_h;
    sum += std::exp(-0.5 * u * u);
  }
  return std::max(kInvSqrt2Pi * inv_h * sum / m, floor);
}

double Kde1D::logpdf(double x) const { return std::log(pdf(x)); }

double Kde1D::min_center() const {
  return *std::min_element(centers.begin(), centers.end());
}
double Kde1D::max_center() const {
  return *std::max_element(centers.begin(), centers.end());
}

Kde1D kde_fit(std::span<const double> samples, double bandwidth) {
  if (samples.size() < 2)
    throw std::invalid_argument("kde_fit: need at least 2 samples");
  Kde1D kde;
  kde.centers.assign(samples.begin(), samples.end());
  if (bandwidth > 0) {
    kde.bandwidth = bandwidth;
  } else {
    const double m = static_cast<double>(samples.size());
    double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / m;
    double ss = 0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    double sd = std::sqrt(ss / (m - 1));
    if (!(sd > 0))
      throw std::invalid_argument(
          "kde_fit: zero-variance samples need an explicit bandwidth");
    kde.bandwidth = 1.06 * sd * std::pow(m, -0.2);
  }
  return kde;
}

double kde_logpdf(const Kde1D& kde, double x) { return kde.logpdf(x); }

KdeTable KdeTable::build(const Kde1D& kde, std::size_t points) {
  if (points < 2) throw std::invalid_argument("KdeTable: need >= 2 points");
  KdeTable t;
  const double pad = 8.0 * kde.bandwidth;
  t.lo = kde.min_center() - pad;
  const double hi = kde.max_center() + pad;
  t.step = (hi - t.lo) / static_cast<double>(points - 1);
  t.log_floor = std::log(kde.floor);
  t.logv.resize(points);
  for (std::size_t i = 0; i < points; ++i)
    t.logv[i] = kde.logpdf(t.lo + t.step * static_cast<double>(i));
  return t;
}

void save_kde(const std::string& path, const Kde1D& kde) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write kde: " + path);
  char buf[80];
  std::snprintf(buf, sizeof buf, "bandwidth=%.17g\nfloor=%.17g\n",
                kde.bandwidth, kde.floor);
  out << buf;
  for (double c : kde.centers) {
    std::snprintf(buf, sizeof buf, "%.17g\n", c);
    out << buf;
  }
}

Kde1D load_kde(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open kde: " + path);
  Kde1D kde;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("bandwidth=", 0) == 0)
      kde.bandwidth = std::stod(line.substr(10));
    else if (line.rfind("floor=", 0) == 0)
      kde.floor = std::stod(line.substr(6));
    else
      kde.centers.push_back(std::stod(line));
  }
  if (!(kde.bandwidth > 0) || kde.centers.size() < 2)
    throw std::runtime_error("malformed kde file: " + path);
  return kde;
}

}  // namespace ffg
