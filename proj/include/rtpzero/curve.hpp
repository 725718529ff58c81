#pragma once
#include <cstddef>

namespace rtpzero {

// A real C^2 function on [0,1] that the zero counter can interrogate: point
// values of f, f', f'' plus global sup bounds on derivatives.  The bounds are
// what turn interval bisection into certified exclusion and monotonicity
// tests, so implementations must return true upper bounds, not estimates.
class Curve {
 public:
  virtual ~Curve() = default;

  // order selects the derivative: 0 -> f(t), 1 -> f'(t), ...  Every
  // implementation supports orders 0-2; curves handed to the zero counter
  // must also answer order 3, which its derivative adapter forwards.
  virtual double value(double t, int order) const = 0;

  // Upper bound for sup_{[0,1]} |f^(order)|, order >= 1.
  virtual double deriv_sup_bound(int order) const = 0;

  // f, f', f'' at one point in a single pass (hot path of the zero counter).
  virtual void jet(double t, double& f, double& df, double& ddf) const {
    f = value(t, 0);
    df = value(t, 1);
    ddf = value(t, 2);
  }
};

}  // namespace rtpzero
