#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ffg/flow.hpp"
#include "ffg/rng.hpp"
#include "ffg/trace.hpp"

using namespace ffg;

TEST_CASE("ipd computes consecutive differences") {
  Flow f({0, 1, 3});
  auto d = ipd(f);
  CHECK(d.deltas == std::vector<double>{1, 2});

  Flow constant({5, 5, 5});
  CHECK(ipd(constant).deltas == std::vector<double>{0, 0});

  CHECK_THROWS_AS(ipd(Flow({1})), std::invalid_argument);
}

TEST_CASE("flow_from_ipds cumulative sum") {
  IpdSeq d;
  d.deltas = {1, 2};
  CHECK(flow_from_ipds(0, d).timestamps == std::vector<double>{0, 1, 3});
  CHECK(flow_from_ipds(10, IpdSeq{}).timestamps == std::vector<double>{10});

  IpdSeq bad;
  bad.deltas = {1, -0.5};
  CHECK_THROWS_AS(flow_from_ipds(0, bad), std::invalid_argument);
}

TEST_CASE("ipd / flow_from_ipds round trip on random flows") {
  Rng rng = derive_rng(7, "flow-roundtrip");
  std::exponential_distribution<double> exp1(1.0);
  for (int rep = 0; rep < 20; ++rep) {
    IpdSeq d;
    for (int i = 0; i < 99; ++i) d.deltas.push_back(exp1(rng));
    Flow f = flow_from_ipds(3.25, d);
    auto back = ipd(f);
    REQUIRE(back.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
      CHECK(back[i] == doctest::Approx(d[i]).epsilon(1e-12));
    Flow f2 = flow_from_ipds(f.front(), back);
    for (std::size_t i = 0; i < f.size(); ++i)
      CHECK(f2[i] == doctest::Approx(f[i]).epsilon(1e-12));
  }
}

TEST_CASE("Flow rejects decreasing timestamps") {
  CHECK_THROWS_AS(Flow({0, 1, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(Flow({0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("sample_flow takes a contiguous run and starts at 0") {
  IpdTrace trace({1, 2, 3});
  Flow f = sample_flow_at(trace, 3, 0);
  CHECK(f.timestamps == std::vector<double>{0, 1, 3});

  // n = L + 1: only one possible output.
  Rng rng = derive_rng(1, "sample-degenerate");
  Flow g = sample_flow(trace, 4, rng);
  CHECK(g.timestamps == std::vector<double>{0, 1, 3, 6});

  CHECK_THROWS_AS(sample_flow(trace, 5, rng), std::invalid_argument);
}

TEST_CASE("sample_flow IPDs are a slice of the trace") {
  Rng rng = derive_rng(3, "sample-slice");
  std::exponential_distribution<double> exp1(2.0);
  std::vector<double> vals;
  for (int i = 0; i < 500; ++i) vals.push_back(exp1(rng));
  IpdTrace trace(vals);
  for (int rep = 0; rep < 50; ++rep) {
    Flow f = sample_flow(trace, 10, rng);
    auto d = ipd(f);
    // Locate the run in the trace.
    bool found = false;
    for (std::size_t s = 0; s + d.size() <= trace.size() && !found; ++s) {
      bool ok = true;
      for (std::size_t i = 0; i < d.size() && ok; ++i)
        ok = std::abs(trace.ipds[s + i] - d[i]) < 1e-12;
      found = ok;
    }
    CHECK(found);
    CHECK(f.front() == 0.0);
  }
}

TEST_CASE("sample_flow start index is uniform (chi-square)") {
  IpdTrace trace({0.125, 0.25, 0.5, 1.0, 2.0});  // distinguishable prefix values
  const int n = 2;                                // first IPD = trace[start]
  const int draws = 10000;
  const int cells = 5;  // start in 0..4
  std::vector<int> count(cells, 0);
  Rng rng = derive_rng(11, "sample-uniform");
  for (int k = 0; k < draws; ++k) {
    Flow f = sample_flow(trace, n, rng);
    double first = f[1] - f[0];
    for (int c = 0; c < cells; ++c)
      if (std::abs(first - trace.ipds[c]) < 1e-12) ++count[c];
  }
  double chi2 = 0;
  const double expected = static_cast<double>(draws) / cells;
  for (int c = 0; c < cells; ++c)
    chi2 += (count[c] - expected) * (count[c] - expected) / expected;
  CHECK(chi2 < 13.28);  // chi-square_{4, 0.99}
}

TEST_CASE("delay_at interpolates and extrapolates") {
  DelayTrace trace({0.010, 0.020}, 0.05);
  CHECK(delay_at(trace, 0.025) == doctest::Approx(0.015));
  CHECK(delay_at(trace, 0.0) == doctest::Approx(0.010));
  CHECK(delay_at(trace, 0.05) == doctest::Approx(0.020));
  CHECK(delay_at(trace, 10.0) == doctest::Approx(0.020));  // hold last
}

TEST_CASE("delay_at matches an independently coded interpolation table") {
  Rng rng = derive_rng(5, "delay-interp");
  DelayTrace trace = synth_delay_trace(0.05, 0.01, 0.5, 40, rng);
  for (int k = 0; k <= 1000; ++k) {
    double t = 40 * 0.05 * k / 1000.0;
    // Brute-force piecewise-linear reconstruction.
    double expect;
    double pos = t / trace.sample_period;
    if (pos >= static_cast<double>(trace.size() - 1)) {
      expect = trace.samples.back();
    } else {
      std::size_t i = static_cast<std::size_t>(pos);
      double a = trace.samples[i], b = trace.samples[i + 1];
      expect = a + (b - a) * (pos - static_cast<double>(i));
    }
    CHECK(delay_at(trace, t) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("apply_delay with constant trace shifts uniformly") {
  DelayTrace constant({0.03, 0.03, 0.03}, 0.05);
  Flow f({0, 0.04, 0.11});
  Flow out = apply_delay(f, constant, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(out[i] == doctest::Approx(f[i] + 0.03));
  auto din = ipd(f), dout = ipd(out);
  for (std::size_t i = 0; i < din.size(); ++i)
    CHECK(dout[i] == doctest::Approx(din[i]));
}

TEST_CASE("apply_delay mean shift matches trace mean (AR(1) Monte Carlo)") {
  Rng rng = derive_rng(9, "delay-mean");
  const double base = 0.05, jstd = 0.005;
  DelayTrace trace = synth_delay_trace(base, jstd, 0.3, 5000, rng);
  double trace_mean =
      std::accumulate(trace.samples.begin(), trace.samples.end(), 0.0) /
      trace.samples.size();
  double sum = 0;
  int count = 0;
  std::exponential_distribution<double> exp1(10.0);
  for (int rep = 0; rep < 400; ++rep) {
    IpdSeq d;
    for (int i = 0; i < 19; ++i) d.deltas.push_back(exp1(rng));
    Flow f = flow_from_ipds(0, d);
    Flow out = apply_delay(f, trace, rng);
    for (std::size_t i = 0; i < f.size(); ++i) sum += out[i] - f[i];
    count += static_cast<int>(f.size());
  }
  double se = jstd / std::sqrt(static_cast<double>(count) / 20);  // correlated draws
  CHECK(std::abs(sum / count - trace_mean) < 3 * se + 1e-4);
}

TEST_CASE("synth_ipd_trace exponential obeys the law of large numbers") {
  Rng rng = derive_rng(2, "synth-exp");
  IpdTrace trace = synth_ipd_trace(IpdModel::exponential, 1.0, 0, 100000, rng);
  double mean = std::accumulate(trace.ipds.begin(), trace.ipds.end(), 0.0) /
                trace.size();
  CHECK(std::abs(mean - 1.0) < 0.02);
}

TEST_CASE("synth_delay_trace limits") {
  Rng rng = derive_rng(4, "synth-delay");
  DelayTrace flat = synth_delay_trace(0.05, 0.0, 0.0, 100, rng);
  for (double s : flat.samples) CHECK(s == doctest::Approx(0.05));

  DelayTrace ar = synth_delay_trace(0.05, 0.004, 0.9, 200000, rng);
  // Sample lag-1 autocorrelation.
  double mean = std::accumulate(ar.samples.begin(), ar.samples.end(), 0.0) /
                ar.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < ar.size(); ++i) {
    double e = ar.samples[i] - mean;
    den += e * e;
    if (i + 1 < ar.size()) num += e * (ar.samples[i + 1] - mean);
  }
  CHECK(num / den == doctest::Approx(0.9).epsilon(0.025));
}

TEST_CASE("trace file round trips") {
  Rng rng = derive_rng(6, "trace-io");
  IpdTrace it = synth_ipd_trace(IpdModel::lognormal, -3, 1, 50, rng);
  save_ipd_trace("/tmp/ffg_test_ipds.txt", it);
  IpdTrace it2 = load_ipd_trace("/tmp/ffg_test_ipds.txt");
  REQUIRE(it2.size() == it.size());
  for (std::size_t i = 0; i < it.size(); ++i)
    CHECK(it2.ipds[i] == it.ipds[i]);

  DelayTrace dt = synth_delay_trace(0.05, 0.002, 0.5, 30, rng);
  save_delay_trace("/tmp/ffg_test_delay.txt", dt);
  DelayTrace dt2 = load_delay_trace("/tmp/ffg_test_delay.txt");
  REQUIRE(dt2.size() == dt.size());
  CHECK(dt2.sample_period == dt.sample_period);
  for (std::size_t i = 0; i < dt.size(); ++i)
    CHECK(dt2.samples[i] == dt.samples[i]);
}
