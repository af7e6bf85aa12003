#include "ffg/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ffg {

IpdTrace::IpdTrace(std::vector<double> values) : ipds(std::move(values)) {
  if (ipds.empty()) throw std::invalid_argument("IpdTrace: empty trace");
  for (double d : ipds)
    if (!(d >= 0) || !std::isfinite(d))
      throw std::invalid_argument("IpdTrace: IPDs must be finite and >= 0");
}

DelayTrace::DelayTrace(std::vector<double> values, double period)
    : samples(std::move(values)), sample_period(period) {
  if (samples.empty()) throw std::invalid_argument("DelayTrace: empty trace");
  if (!(sample_period > 0))
    throw std::invalid_argument("DelayTrace: sample_period must be > 0");
  for (double d : samples)
    if (!(d > 0) || !std::isfinite(d))
      throw std::invalid_argument("DelayTrace: samples must be finite and > 0");
}

Flow sample_flow_at(const IpdTrace& trace, std::size_t n, std::size_t start) {
  if (n < 1) throw std::invalid_argument("sample_flow: n must be >= 1");
  if (trace.size() < n - 1 || start + (n - 1) > trace.size())
    throw std::invalid_argument("sample_flow: trace too short for n IPDs");
  IpdSeq run;
  run.deltas.assign(trace.ipds.begin() + start,
                    trace.ipds.begin() + start + (n - 1));
  return flow_from_ipds(0.0, run);
}

Flow sample_flow(const IpdTrace& trace, std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_flow: n must be >= 1");
  if (trace.size() < n - 1)
    throw std::invalid_argument("sample_flow: trace too short for n IPDs");
  std::uniform_int_distribution<std::size_t> start(0, trace.size() - (n - 1));
  return sample_flow_at(trace, n, start(rng));
}

double delay_at(const DelayTrace& trace, double t) {
  if (t <= 0) return trace.samples.front();
  double pos = t / trace.sample_period;
  auto k = static_cast<std::size_t>(pos);
  if (k + 1 >= trace.size()) return trace.samples.back();
  double frac = pos - static_cast<double>(k);
  return trace.samples[k] + frac * (trace.samples[k + 1] - trace.samples[k]);
}

std::vector<double> delays_at(const DelayTrace& trace, const Flow& flow,
                              double time_origin) {
  std::vector<double> out;
  out.reserve(flow.size());
  for (double t : flow.timestamps)
    out.push_back(delay_at(trace, time_origin + t));
  return out;
}

Flow apply_delay(const Flow& flow, const DelayTrace& trace,
                 double time_origin) {
  std::vector<double> ts = flow.timestamps;
  for (double& t : ts) t += delay_at(trace, time_origin + t);
  std::sort(ts.begin(), ts.end());
  return Flow(std::move(ts));
}

Flow apply_delay(const Flow& flow, const DelayTrace& trace, Rng& rng) {
  std::uniform_real_distribution<double> origin(0.0, trace.span());
  return apply_delay(flow, trace, origin(rng));
}

IpdTrace synth_ipd_trace(IpdModel model, double p1, double p2,
                         std::size_t length, Rng& rng) {
  if (length == 0) throw std::invalid_argument("synth_ipd_trace: length == 0");
  std::vector<double> out;
  out.reserve(length);
  switch (model) {
    case IpdModel::lognormal: {
      std::lognormal_distribution<double> d(p1, p2);
      for (std::size_t i = 0; i < length; ++i) out.push_back(d(rng));
      break;
    }
    case IpdModel::pareto: {
      if (!(p1 > 0) || !(p2 > 0))
        throw std::invalid_argument("synth_ipd_trace: pareto needs x_m, alpha > 0");
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (std::size_t i = 0; i < length; ++i)
        out.push_back(p1 * std::pow(1.0 - u(rng), -1.0 / p2));
      break;
    }
    case IpdModel::exponential: {
      if (!(p1 > 0))
        throw std::invalid_argument("synth_ipd_trace: exponential needs rate > 0");
      std::exponential_distribution<double> d(p1);
      for (std::size_t i = 0; i < length; ++i) out.push_back(d(rng));
      break;
    }
  }
  return IpdTrace(std::move(out));
}

DelayTrace synth_delay_trace(double base, double jitter_std,
                             double correlation, std::size_t length, Rng& rng,
                             double period) {
  if (length == 0) throw std::invalid_argument("synth_delay_trace: length == 0");
  if (!(base > 0)) throw std::invalid_argument("synth_delay_trace: base must be > 0");
  if (jitter_std < 0)
    throw std::invalid_argument("synth_delay_trace: jitter_std must be >= 0");
  if (correlation < 0 || correlation >= 1)
    throw std::invalid_argument("synth_delay_trace: correlation must be in [0,1)");
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> out;
  out.reserve(length);
  const double innov = jitter_std * std::sqrt(1.0 - correlation * correlation);
  double e = jitter_std > 0 ? jitter_std * noise(rng) : 0.0;
  const double floor = 1e-6;  // delays must stay positive
  out.push_back(std::max(base + e, floor));
  for (std::size_t i = 1; i < length; ++i) {
    e = correlation * e + (jitter_std > 0 ? innov * noise(rng) : 0.0);
    out.push_back(std::max(base + e, floor));
  }
  return DelayTrace(std::move(out), period);
}

namespace {

bool parse_line(const std::string& line, double& value) {
  std::size_t pos = line.find_first_not_of(" \t\r");
  if (pos == std::string::npos || line[pos] == '#') return false;
  value = std::stod(line.substr(pos));
  return true;
}

}  // namespace

IpdTrace load_ipd_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open IPD trace: " + path);
  std::vector<double> values;
  std::string line;
  double v;
  while (std::getline(in, line))
    if (parse_line(line, v)) values.push_back(v);
  return IpdTrace(std::move(values));
}

void save_ipd_trace(const std::string& path, const IpdTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write IPD trace: " + path);
  char buf[64];
  for (double v : trace.ipds) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
}

DelayTrace load_delay_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open delay trace: " + path);
  std::string line;
  double period = 0;
  bool have_period = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    if (!have_period) {
      if (line.compare(pos, 7, "period=") != 0)
        throw std::runtime_error("delay trace missing period= header: " + path);
      period = std::stod(line.substr(pos + 7));
      have_period = true;
      continue;
    }
    values.push_back(std::stod(line.substr(pos)));
  }
  if (!have_period)
    throw std::runtime_error("delay trace missing period= header: " + path);
  return DelayTrace(std::move(values), period);
}

void save_delay_trace(const std::string& path, const DelayTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write delay trace: " + path);
  char buf[64];
  std::snprintf(buf, sizeof buf, "period=%.17g\n", trace.sample_period);
  out << buf;
  for (double v : trace.samples) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
}

}  // namespace ffg
