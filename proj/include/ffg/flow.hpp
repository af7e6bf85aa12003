#pragma once

#include <cstddef>
#include <vector>

namespace ffg {

// A packet flow: non-decreasing sequence of timestamps in seconds.
struct Flow {
  std::vector<double> timestamps;

  Flow() = default;
  explicit Flow(std::vector<double> ts);

  std::size_t size() const { return timestamps.size(); }
  bool empty() const { return timestamps.empty(); }
  double operator[](std::size_t i) const { return timestamps[i]; }
  double front() const { return timestamps.front(); }
  double back() const { return timestamps.back(); }
  double duration() const { return timestamps.back() - timestamps.front(); }
};

// Inter-packet delays: consecutive differences of a Flow, all >= 0.
struct IpdSeq {
  std::vector<double> deltas;

  std::size_t size() const { return deltas.size(); }
  double operator[](std::size_t i) const { return deltas[i]; }
};

IpdSeq ipd(const Flow& flow);
Flow flow_from_ipds(double start, const IpdSeq& ipds);

}  // namespace ffg
