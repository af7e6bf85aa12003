#pragma once

#include <vector>

namespace ffg {

// Gauss-Legendre rule mapped to (0, 1); weights sum to 1.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendre& gauss_legendre(int order);

}  // namespace ffg
