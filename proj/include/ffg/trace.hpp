#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ffg/flow.hpp"
#include "ffg/rng.hpp"

namespace ffg {

// Empirical IPD corpus: an order-preserving list of measured inter-packet
// delays. Source flows are generated by taking contiguous runs of it.
struct IpdTrace {
  std::vector<double> ipds;

  IpdTrace() = default;
  explicit IpdTrace(std::vector<double> values);
  std::size_t size() const { return ipds.size(); }
};

// Network delay measurements on a fixed-period grid (default 50 ms).
struct DelayTrace {
  std::vector<double> samples;
  double sample_period = 0.05;

  DelayTrace() = default;
  DelayTrace(std::vector<double> values, double period);
  std::size_t size() const { return samples.size(); }
  double span() const { return sample_period * (samples.size() - 1); }
};

// Flow whose n-1 IPDs are a contiguous run of the trace starting at the
// given index; the flow starts at time 0.
Flow sample_flow_at(const IpdTrace& trace, std::size_t n, std::size_t start);
// Same, with a uniformly random start index (no wrap-around).
Flow sample_flow(const IpdTrace& trace, std::size_t n, Rng& rng);

// Linear interpolation between grid samples; holds the last sample beyond
// the end of the trace. Queries before time 0 hold the first sample.
double delay_at(const DelayTrace& trace, double t);

// Per-packet delays sampled from the trace at (time_origin + timestamp).
std::vector<double> delays_at(const DelayTrace& trace, const Flow& flow,
                              double time_origin);

// Adds the interpolated delay to every packet. Output is re-sorted if the
// jitter inverts packet order.
Flow apply_delay(const Flow& flow, const DelayTrace& trace,
                 double time_origin);
// Same, with the time origin drawn uniformly over the trace span.
Flow apply_delay(const Flow& flow, const DelayTrace& trace, Rng& rng);

enum class IpdModel { lognormal, pareto, exponential };

// Parametric IPD generators standing in for measured captures.
//   lognormal:   p1 = mu of log, p2 = sigma of log
//   pareto:      p1 = scale x_m, p2 = shape alpha
//   exponential: p1 = rate, p2 unused
IpdTrace synth_ipd_trace(IpdModel model, double p1, double p2,
                         std::size_t length, Rng& rng);

// AR(1) delay process: base + stationary Gaussian noise with the given
// standard deviation and lag-1 correlation, clamped to stay positive.
DelayTrace synth_delay_trace(double base, double jitter_std,
                             double correlation, std::size_t length, Rng& rng,
                             double period = 0.05);

// Text formats: one decimal (seconds) per line, '#' comments ignored;
// delay traces carry a leading "period=<seconds>" header line.
IpdTrace load_ipd_trace(const std::string& path);
void save_ipd_trace(const std::string& path, const IpdTrace& trace);
DelayTrace load_delay_trace(const std::string& path);
void save_delay_trace(const std::string& path, const DelayTrace& trace);

}  // namespace ffg
