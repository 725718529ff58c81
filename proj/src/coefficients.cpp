#include "rtpzero/coefficients.hpp"

#include <cmath>
#include <stdexcept>

namespace rtpzero {

const char* law_name(CoefficientLaw law) {
  switch (law) {
    case CoefficientLaw::gaussian: return "gaussian";
    case CoefficientLaw::rademacher: return "rademacher";
    case CoefficientLaw::uniform_scaled: return "uniform_scaled";
    case CoefficientLaw::laplace_scaled: return "laplace_scaled";
  }
  throw std::invalid_argument("law_name: unknown law");
}

CoefficientLaw law_from_name(const std::string& name) {
  if (name == "gaussian") return CoefficientLaw::gaussian;
  if (name == "rademacher") return CoefficientLaw::rademacher;
  if (name == "uniform_scaled") return CoefficientLaw::uniform_scaled;
  if (name == "laplace_scaled") return CoefficientLaw::laplace_scaled;
  throw std::invalid_argument("law_from_name: unknown law '" + name + "'");
}

double law_fourth_moment(CoefficientLaw law) {
  switch (law) {
    case CoefficientLaw::gaussian: return 3.0;
    case CoefficientLaw::rademacher: return 1.0;
    case CoefficientLaw::uniform_scaled: return 9.0 / 5.0;  // 9 * integral of u^4 / 2 on [-1,1]
    case CoefficientLaw::laplace_scaled: return 6.0;        // 24 b^4 with b^2 = 1/2
  }
  throw std::invalid_argument("law_fourth_moment: unknown law");
}

double draw_scalar(CoefficientLaw law, Stream& rng) {
  switch (law) {
    case CoefficientLaw::gaussian: return rng.normal();
    case CoefficientLaw::rademacher: return rng.rademacher();
    case CoefficientLaw::uniform_scaled: return rng.uniform_scaled();
    case CoefficientLaw::laplace_scaled: return rng.laplace_scaled();
  }
  throw std::invalid_argument("draw_scalar: unknown law");
}

CoefficientPairs sample_pairs(CoefficientLaw law, std::size_t m, const SeedSpec& seed) {
  if (m == 0) throw std::invalid_argument("sample_pairs: m must be >= 1");
  CoefficientPairs out;
  out.x.resize(m);
  out.y.resize(m);
  Stream rng(seed);
  if (law == CoefficientLaw::gaussian) {
    // Pairwise generation: one Box-Muller call yields both coordinates.
    for (std::size_t r = 0; r < m; ++r) rng.normal_pair(out.x[r], out.y[r]);
  } else {
    for (std::size_t r = 0; r < m; ++r) {
      out.x[r] = draw_scalar(law, rng);
      out.y[r] = draw_scalar(law, rng);
    }
  }
  return out;
}

MomentReport moment_report(CoefficientLaw law, std::size_t n, const SeedSpec& seed) {
  if (n < 100) throw std::invalid_argument("moment_report: n must be >= 100");
  MomentReport rep;
  rep.n = n;
  Stream rng(seed);
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = draw_scalar(law, rng);
    const double a = std::fabs(v);
    s1 += v;
    s2 += a * a;
    s3 += a * a * a;
    s4 += a * a * a * a;
  }
  const double nd = static_cast<double>(n);
  rep.mean = s1 / nd;
  rep.variance = s2 / nd;
  rep.abs_moment_3 = s3 / nd;
  rep.abs_moment_4 = s4 / nd;
  return rep;
}

}  // namespace rtpzero
