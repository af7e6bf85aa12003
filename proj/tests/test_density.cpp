#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ffg/kde.hpp"
#include "ffg/rng.hpp"
#include "ffg/trunc_gauss.hpp"

using namespace ffg;

namespace {

// Simpson quadrature, independent of the KDE evaluation path.
double simpson(const std::function<double(double)>& f, double a, double b,
               int intervals) {
  double h = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < intervals; ++i)
    sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("kde_fit on standard normal samples approximates its density") {
  Rng rng = derive_rng(1, "kde-normal");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> samples(10000);
  for (double& s : samples) s = normal(rng);
  Kde1D kde = kde_fit(samples);
  CHECK(std::abs(kde.logpdf(0.0) - (-0.9189385)) < 0.05);
}

TEST_CASE("two-sample kde is symmetric about the midpoint") {
  std::vector<double> samples = {0.0, 2.0};
  Kde1D kde = kde_fit(samples, 1.0);
  for (double d : {0.1, 0.5, 1.3, 2.7})
    CHECK(kde.pdf(1.0 - d) == doctest::Approx(kde.pdf(1.0 + d)).epsilon(1e-12));
}

TEST_CASE("kde integrates to 1 (quadrature oracle)") {
  Rng rng = derive_rng(2, "kde-integral");
  std::lognormal_distribution<double> logn(-3.0, 0.8);
  std::vector<double> samples(500);
  for (double& s : samples) s = logn(rng);
  Kde1D kde = kde_fit(samples);
  double a = kde.min_center() - 5 * kde.bandwidth;
  double b = kde.max_center() + 5 * kde.bandwidth;
  double integral = simpson([&](double x) { return kde.pdf(x); }, a, b, 4000);
  CHECK(std::abs(integral - 1.0) < 1e-3);
}

TEST_CASE("kde_fit input validation") {
  CHECK_THROWS_AS(kde_fit(std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(kde_fit(std::vector<double>{2.0, 2.0, 2.0}),
                  std::invalid_argument);
  CHECK_NOTHROW(kde_fit(std::vector<double>{2.0, 2.0, 2.0}, 0.1));
}

TEST_CASE("kde_logpdf floors far in the tail") {
  Kde1D kde = kde_fit(std::vector<double>{0.0, 1.0}, 0.01);
  CHECK(kde.logpdf(1000.0) == doctest::Approx(std::log(1e-12)));
}

TEST_CASE("kde_logpdf equals the direct mixture sum") {
  Rng rng = derive_rng(3, "kde-twopath");
  std::normal_distribution<double> normal(0.5, 0.2);
  std::vector<double> samples(300);
  for (double& s : samples) s = normal(rng);
  Kde1D kde = kde_fit(samples);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  for (int rep = 0; rep < 200; ++rep) {
    double x = u(rng);
    double direct = 0;
    for (double c : samples) {
      double z = (x - c) / kde.bandwidth;
      direct += std::exp(-0.5 * z * z) / std::sqrt(2 * M_PI);
    }
    direct = std::max(direct / (samples.size() * kde.bandwidth), kde.floor);
    CHECK(std::exp(kde.logpdf(x)) ==
          doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("kde maximum sits at the densest cluster (grid scan)") {
  std::vector<double> samples = {0.0, 0.01, -0.01, 0.005, 5.0};
  Kde1D kde = kde_fit(samples, 0.05);
  double best_x = -10, best_v = -1;
  for (int k = 0; k <= 20000; ++k) {
    double x = -2 + 8.0 * k / 20000.0;
    double v = kde.pdf(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  CHECK(std::abs(best_x - 0.0) < 0.05);
}

TEST_CASE("KdeTable approximates the exact evaluation") {
  Rng rng = derive_rng(4, "kde-table");
  std::lognormal_distribution<double> logn(-3.0, 0.8);
  std::vector<double> samples(800);
  for (double& s : samples) s = logn(rng);
  Kde1D kde = kde_fit(samples);
  KdeTable tab = KdeTable::build(kde, 8192);
  std::uniform_real_distribution<double> u(kde.min_center(), kde.max_center());
  for (int rep = 0; rep < 500; ++rep) {
    double x = u(rng);
    CHECK(std::abs(tab.logpdf(x) - kde.logpdf(x)) < 5e-3);
  }
}

TEST_CASE("kde serialization round trip") {
  Kde1D kde = kde_fit(std::vector<double>{0.1, 0.2, 0.35}, 0.07);
  save_kde("/tmp/ffg_test_kde.txt", kde);
  Kde1D back = load_kde("/tmp/ffg_test_kde.txt");
  CHECK(back.bandwidth == kde.bandwidth);
  CHECK(back.centers == kde.centers);
  CHECK(back.floor == kde.floor);
}

TEST_CASE("truncated gaussian closed-form mean") {
  const double a_c = 0.25;
  // Symmetric case.
  CHECK(tg_mean(a_c / 2, 0.1, 0, a_c) == doctest::Approx(a_c / 2));
  // Deterministic limit.
  TruncGauss tiny(0.17, 1e-9 * a_c, 0, a_c);
  CHECK(tiny.mean() == doctest::Approx(0.17).epsilon(1e-9));
  Rng rng = derive_rng(5, "tg-tiny");
  for (int k = 0; k < 100; ++k)
    CHECK(std::abs(tiny.sample(rng) - 0.17) < 1e-6 * a_c);

  CHECK_THROWS_AS(TruncGauss(0.1, 0.0, 0, a_c), std::invalid_argument);
  CHECK_THROWS_AS(TruncGauss(0.1, -1.0, 0, a_c), std::invalid_argument);
}

TEST_CASE("truncated gaussian sample mean matches closed form") {
  const double a_c = 0.25;
  TruncGauss d(0.06, 0.04, 0, a_c);
  Rng rng = derive_rng(6, "tg-mc");
  const int m = 100000;
  double sum = 0, sumsq = 0, lo = 1e9, hi = -1e9;
  for (int k = 0; k < m; ++k) {
    double s = d.sample(rng);
    sum += s;
    sumsq += s * s;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  double mean = sum / m;
  double sd = std::sqrt(sumsq / m - mean * mean);
  CHECK(std::abs(mean - d.mean()) < 3 * sd / std::sqrt(double(m)));
  CHECK(lo >= 0.0);
  CHECK(hi <= a_c);
}

TEST_CASE("truncated gaussian empirical CDF passes KS at 1%") {
  const double a_c = 0.25;
  const int m = 10000;
  const double crit = 1.628 / std::sqrt(double(m));
  int setting = 0;
  for (double mu : {0.0, 0.05, 0.125, 0.2, 0.25}) {
    for (double sigma : {1e-3 * a_c, 1e-1 * a_c, a_c, 10 * a_c}) {
      TruncGauss d(mu, sigma, 0, a_c);
      Rng rng = derive_rng(7, "tg-ks", setting++);
      std::vector<double> s(m);
      for (double& v : s) v = d.sample(rng);
      std::sort(s.begin(), s.end());
      double ks = 0;
      for (int i = 0; i < m; ++i) {
        double c = d.cdf(s[i]);
        ks = std::max(ks, std::abs(c - (i + 1) / double(m)));
        ks = std::max(ks, std::abs(c - i / double(m)));
      }
      CHECK(ks < crit);
    }
  }
}

TEST_CASE("huge sigma approaches the uniform density") {
  const double a_c = 0.25;
  TruncGauss d(0.1, 100 * a_c, 0, a_c);
  CHECK(d.pdf(a_c / 2) == doctest::Approx(1.0 / a_c).epsilon(0.01));
}

TEST_CASE("norm_quantile inverts norm_cdf") {
  for (double p : {1e-10, 1e-4, 0.02, 0.3, 0.5, 0.77, 0.999, 1 - 1e-9})
    CHECK(norm_cdf(norm_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
}
