#pragma once

#include <functional>
#include <vector>

namespace ffg {

using LogDensityFn = std::function<double(double)>;

enum class OptimizeDirection { minimize, maximize };

// Optimizes per-packet offsets v in {0, cap/(G-1), ..., cap}^n for the
// coupled objective sum_i log_f(deltas[i] + v[i+1] - v[i]), exactly on the
// grid, by dynamic programming over (packet, level) states.
// deltas has length n-1; the result has length n.
std::vector<double> optimize_offset_path(const std::vector<double>& deltas,
                                         double cap, int grid_size,
                                         const LogDensityFn& log_f,
                                         OptimizeDirection dir);

// The objective the optimizer scores, exposed for dominance checks.
double offset_path_objective(const std::vector<double>& deltas,
                             const std::vector<double>& offsets,
                             const LogDensityFn& log_f);

}  // namespace ffg
