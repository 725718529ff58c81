#pragma once
#include <vector>

namespace rtpzero {

// Gauss-Legendre nodes and weights on [-1,1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached rule for n points (n >= 1); computed once by Newton iteration on the
// Legendre recurrence, thread-safe.
const GaussLegendre& gauss_legendre(int n);

}  // namespace rtpzero
