#include "ffg/flow.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ffg {

Flow::Flow(std::vector<double> ts) : timestamps(std::move(ts)) {
  for (std::size_t i = 0; i < timestamps.size(); ++i) {
    if (!std::isfinite(timestamps[i]))
      throw std::invalid_argument("Flow: non-finite timestamp");
    if (i > 0 && timestamps[i] < timestamps[i - 1])
      throw std::invalid_argument("Flow: timestamps must be non-decreasing");
  }
}

IpdSeq ipd(const Flow& flow) {
  if (flow.size() < 2)
    throw std::invalid_argument("ipd: flow must contain at least 2 packets");
  IpdSeq out;
  out.deltas.reserve(flow.size() - 1);
  for (std::size_t i = 0; i + 1 < flow.size(); ++i)
    out.deltas.push_back(flow[i + 1] - flow[i]);
  return out;
}

Flow flow_from_ipds(double start, const IpdSeq& ipds) {
  std::vector<double> ts;
  ts.reserve(ipds.size() + 1);
  double t = start;
  ts.push_back(t);
  for (double d : ipds.deltas) {
    if (d < 0) throw std::invalid_argument("flow_from_ipds: negative IPD");
    t += d;
    ts.push_back(t);
  }
  return Flow(std::move(ts));
}

}  // namespace ffg
