#pragma once
#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "rtpzero/coefficients.hpp"
#include "rtpzero/curve.hpp"

namespace rtpzero {

// Random trigonometric polynomial
//   f(t) = m^{-1/2} * sum_{r=0}^{m-1} [ x_r cos(pi r t / m) + y_r sin(pi r t / m) ],
// the central object of the library.  Evaluation uses a rotation recurrence
// (one sin/cos call per point, O(m) multiplies); `value_reference` is the
// plain per-term libm implementation kept as a cross-check and benchmark
// baseline.
class TrigPolynomial : public Curve {
 public:
  TrigPolynomial(std::vector<double> x, std::vector<double> y);
  TrigPolynomial(CoefficientPairs c) : TrigPolynomial(std::move(c.x), std::move(c.y)) {}

  std::size_t degree() const { return m_; }
  const std::vector<double>& xs() const { return x_; }
  const std::vector<double>& ys() const { return y_; }

  // order >= 0 selects the derivative; any order is supported (differentiation
  // shifts each term's phase by a quarter period and scales by the frequency).
  double value(double t, int order) const override;
  double deriv_sup_bound(int order) const override;
  void jet(double t, double& f, double& df, double& ddf) const override;

  // Naive evaluation calling cos/sin once per term.  Same contract as value().
  double value_reference(double t, int order) const;

 private:
  std::size_t m_;
  std::vector<double> x_, y_;
};

// Piecewise-linear complex path on [0,1]: knots strictly increasing from 0
// to 1, one complex value per knot.
struct PathPL {
  std::vector<double> t;
  std::vector<std::complex<double>> z;

  PathPL(std::vector<double> knots, std::vector<std::complex<double>> values);
  std::complex<double> at(double u) const;  // linear interpolation
};

// A real C^1 function known through samples: values and derivatives on a
// strictly increasing grid in [0,1].
struct C1Path {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> derivs;

  C1Path(std::vector<double> g, std::vector<double> v, std::vector<double> d);
  double value_at(double u) const;  // linear interpolation of values
};

// Scaled partial-sum path of the coefficient sequence: the piecewise-linear
// interpolation of S(k/m) = m^{-1/2} * sum_{j<k} (x_j + i y_j), k = 0..m.
PathPL build_partial_sum(const CoefficientPairs& coeffs);

// Oscillatory path transform: for a path f on [0,1],
//   T(f)(t) = Re[ e^{-i pi t} f(1) - f(0) + i pi t * integral_0^1 e^{-i pi t u} f(u) du ].
// This is the summation-by-parts limit of the discrete transform below; it
// maps Brownian motion to the band-limited Gaussian limit process.  For
// piecewise-linear paths the integral is evaluated in closed form per piece,
// so the result is exact up to rounding.
double theta(const PathPL& f, double t);

// Same transform for an arbitrary continuous path given as a callable,
// integrated with composite 16-node Gauss-Legendre quadrature on `panels`
// panels.
double theta(const std::function<std::complex<double>(double)>& f, double t,
             int panels = 64);

// Discrete transform at grid resolution m:
//   T_m(f)(t) = Re[ e^{-i pi (m-1) t / m} f(1) - f(0)
//                   - sum_{k=1}^{m-1} (e^{-i pi k t / m} - e^{-i pi (k-1) t / m}) f(k/m) ].
// Applied to the partial-sum path of coefficients it reproduces the
// polynomial exactly: theta_m(build_partial_sum(c), t) == TrigPolynomial(c)(t).
double theta_m(const PathPL& f, std::size_t m, double t);

// Holder seminorm sup |f(u) - f(v)| / |u - v|^alpha, alpha in (0,1),
// computed over grid/knot pairs.  For a piecewise-linear path this is exact
// (interior critical points of the ratio are minima, so the sup sits at knot
// pairs); for a C1Path it is a grid-restricted lower bound of the true
// seminorm.
double holder_seminorm(const PathPL& f, double alpha);
double holder_seminorm(const C1Path& f, double alpha);

// A fixed battery of four test functionals of a sampled C^1 function,
// built from the sup norm ||f||, the strengthened norm ||f'|| + |f(0)|, and
// the value at 1/2.  The first two are of quadratic-growth Lipschitz type,
// the last two bounded-Lipschitz type:
//   [0] ||f||^2 / 2
//   [1] (||f'|| + |f(0)|)^2 / 2
//   [2] min(||f||, 1)
//   [3] f(1/2) * min(|f(1/2)|, 1)
// Norms are grid sups over the stored samples (documented lower bounds).
std::array<double, 4> lip11_battery(const C1Path& f);

// Convenience: sample a Curve on a uniform grid of grid_n+1 points.
C1Path sample_c1(const Curve& f, int grid_n = 1024);

}  // namespace rtpzero
