#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "rtpzero/rng.hpp"

namespace rtpzero {

// Coefficient distributions for the random polynomial.  All are centered with
// unit variance, so the polynomials they generate share second-order
// statistics and differ only in higher moments.
enum class CoefficientLaw {
  gaussian,        // N(0,1)
  rademacher,      // +-1 with probability 1/2
  uniform_scaled,  // uniform on [-sqrt(3), sqrt(3)]
  laplace_scaled,  // Laplace with scale 1/sqrt(2)
};

const char* law_name(CoefficientLaw law);
CoefficientLaw law_from_name(const std::string& name);  // throws std::invalid_argument

// Independent coefficient pairs (x_r, y_r), r = 0..m-1, drawn from `law`.
struct CoefficientPairs {
  std::vector<double> x;
  std::vector<double> y;
};

CoefficientPairs sample_pairs(CoefficientLaw law, std::size_t m, const SeedSpec& seed);

// One scalar draw from `law` (consumes the stream like sample_pairs does).
double draw_scalar(CoefficientLaw law, Stream& rng);

// Empirical moments of n draws from a distribution known to have mean zero.
// Moments are taken about 0, not about the sample mean: the variance of n
// Rademacher draws is exactly 1, with no n/(n-1) wobble.
struct MomentReport {
  double mean = 0.0;
  double variance = 0.0;       // second moment about 0
  double abs_moment_3 = 0.0;   // E|X|^3 estimate
  double abs_moment_4 = 0.0;   // E|X|^4 estimate
  std::size_t n = 0;
};

MomentReport moment_report(CoefficientLaw law, std::size_t n, const SeedSpec& seed);

// Population fourth moment E X^4 for each law (used by the sampling tests).
double law_fourth_moment(CoefficientLaw law);

}  // namespace rtpzero
