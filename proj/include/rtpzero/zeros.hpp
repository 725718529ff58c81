#pragma once
#include <cstddef>
#include <vector>

#include "rtpzero/curve.hpp"

namespace rtpzero {

// Closed subinterval of [0,1].
struct Interval {
  double a;
  double b;
};

// Parameters of the trapezoid mollifiers: plateau half-width delta, ramp
// width eps.
struct KacParams {
  double delta;
  double eps;
};

// Even trapezoid: 1 for |u| <= delta, 0 for |u| >= delta+eps, linear ramp
// 1 - (|u|-delta)/eps in between.  (1/eps)-Lipschitz, sandwiched between the
// indicators of [-delta, delta] and [-(delta+eps), delta+eps].
double h_delta_eps(double u, const KacParams& p);

// Decreasing one-sided ramp: 1 for x <= delta, (delta+eps-x)/eps on
// [delta, delta+eps], 0 beyond.  (1/eps)-Lipschitz, bounded by 1.
double h_bar_delta_eps(double x, const KacParams& p);

// Outcome of certified zero counting.
struct CountResult {
  int count = 0;              // number of zeros found
  bool certified = false;     // every subinterval excluded or isolated with a strict sign change
  double min_abs_at_roots_gap = 0.0;  // the threshold functional A_f (see min_gap_A)
  int refinement_depth = 0;   // deepest subdivision level reached
};

// Threshold functional
//   A_f = min( |f(a)|, |f(b)|, (1/2) * min_{(a,b)} (|f| + |f'|) ),
// the level below which the Kac integral counts zeros exactly.  The interior
// minimum is certified by branch-and-bound; each subinterval carries a lower
// bound from the jet at its center plus global derivative sup bounds, and is
// discarded once it cannot improve the incumbent by one part in 1e6 (so the
// result may exceed the true minimum by that relative amount -- harmless for
// choosing a level strictly below A_f).  Recursion stops at width 1e-6.
double min_gap_A(const Curve& f, Interval iv);

// Exact zero count of an admissible function (nonzero at both endpoints, no
// joint zero of f and f').  Branch-and-bound: subintervals are excluded when
// |f(center)| clears the derivative bound, resolved when f' has certified
// constant sign (at most one zero, decided by the endpoint signs), otherwise
// split until width < tol and decided by a strict sign change.  If an
// interval stays ambiguous at the tol floor (or the depth cap of 60), the
// result is returned with certified = false -- never a silent guess.
// tol must lie in (0, 1e-3]; default 1e-9.
CountResult count_zeros(const Curve& f, Interval iv, double tol = 1e-9);

// Quadrature used by the Kac functionals: Gauss-Legendre with `nodes` points
// per panel, panels no wider than max_panel.
struct QuadSpec {
  int nodes = 16;
  double max_panel = 1.0 / 256.0;
};

// Kac's counting integral at level delta:
//   (1/(2 delta)) * integral over [a,b] of |f'(u)| 1_{|f(u)| <= delta} du.
// Equals the exact zero count whenever 0 < delta < A_f.  The indicator's
// jump points (crossings of |f| = delta) and the kinks of |f'| (sign changes
// of f') are located first, so every panel integrates a smooth function.
double kac_phi_delta(const Curve& f, Interval iv, double delta,
                     const QuadSpec& quad = QuadSpec{});

// Mollified version: (1/(2 delta)) * integral of |f'(u)| H_{delta,eps}(f(u)) du,
// with panels additionally split at crossings of |f| = delta + eps.
double kac_phi_delta_eps(const Curve& f, Interval iv, const KacParams& p,
                         const QuadSpec& quad = QuadSpec{});

// Smoothed indicator that the threshold A_f is small:
// h_bar_delta_eps(min_gap_A(f, iv), p).
double psi_bar(const Curve& f, Interval iv, const KacParams& p);

// Root locations (for quadrature splitting and diagnostics): midpoints of
// certified isolation intervals of width < tol.
struct RootLocations {
  std::vector<double> roots;
  bool certified = true;
};
RootLocations locate_roots(const Curve& f, Interval iv, double tol = 1e-12);

}  // namespace rtpzero
