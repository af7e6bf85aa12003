#include "ffg/typicality.hpp"

#include <limits>
#include <stdexcept>

namespace ffg {

std::vector<double> optimize_offset_path(const std::vector<double>& deltas,
                                         double cap, int grid_size,
                                         const LogDensityFn& log_f,
                                         OptimizeDirection dir) {
  const std::size_t n = deltas.size() + 1;
  if (grid_size < 2)
    throw std::invalid_argument("optimize_offset_path: grid_size must be >= 2");
  if (cap < 0)
    throw std::invalid_argument("optimize_offset_path: cap must be >= 0");
  if (cap == 0 || deltas.empty()) return std::vector<double>(n, 0.0);

  const int g = grid_size;
  const double step = cap / static_cast<double>(g - 1);
  const bool maximize = dir == OptimizeDirection::maximize;
  const double worst = maximize ? -std::numeric_limits<double>::infinity()
                                : std::numeric_limits<double>::infinity();

  // value[l] = best objective of a path ending at level l for packet i.
  std::vector<double> value(g, 0.0), next(g);
  std::vector<std::vector<int>> from(n - 1, std::vector<int>(g));
  // Transition costs depend only on the level difference, so each step
  // needs 2g-1 density evaluations.
  std::vector<double> edge(2 * g - 1);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (int k = -(g - 1); k <= g - 1; ++k)
      edge[k + g - 1] = log_f(deltas[i] + step * k);
    for (int l2 = 0; l2 < g; ++l2) {
      double best = worst;
      int arg = 0;
      for (int l1 = 0; l1 < g; ++l1) {
        double v = value[l1] + edge[l2 - l1 + g - 1];
        if (maximize ? v > best : v < best) {
          best = v;
          arg = l1;
        }
      }
      next[l2] = best;
      from[i][l2] = arg;
    }
    value.swap(next);
  }

  int l = 0;
  for (int l2 = 1; l2 < g; ++l2)
    if (maximize ? value[l2] > value[l] : value[l2] < value[l]) l = l2;

  std::vector<double> offsets(n);
  for (std::size_t i = n; i-- > 0;) {
    offsets[i] = step * l;
    if (i > 0) l = from[i - 1][l];
  }
  return offsets;
}

double offset_path_objective(const std::vector<double>& deltas,
                             const std::vector<double>& offsets,
                             const LogDensityFn& log_f) {
  if (offsets.size() != deltas.size() + 1)
    throw std::invalid_argument("offset_path_objective: length mismatch");
  double sum = 0;
  for (std::size_t i = 0; i < deltas.size(); ++i)
    sum += log_f(deltas[i] + offsets[i + 1] - offsets[i]);
  return sum;
}

}  // namespace ffg
