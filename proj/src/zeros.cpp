#include "rtpzero/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <stack>
#include <stdexcept>
#include <vector>

#include "rtpzero/errors.hpp"
#include "rtpzero/quadrature.hpp"

namespace rtpzero {

namespace {

constexpr int kMaxDepth = 60;

void check_interval(const Interval& iv) {
  if (!(iv.a >= 0.0 && iv.b <= 1.0 && iv.a < iv.b))
    throw std::invalid_argument("interval must satisfy 0 <= a < b <= 1");
}

// f - shift, for locating level crossings.  Derivatives and bounds are the
// base curve's.
class ShiftedCurve : public Curve {
 public:
  ShiftedCurve(const Curve& base, double shift) : base_(base), shift_(shift) {}
  double value(double t, int order) const override {
    const double v = base_.value(t, order);
    return order == 0 ? v - shift_ : v;
  }
  double deriv_sup_bound(int order) const override { return base_.deriv_sup_bound(order); }
  void jet(double t, double& f, double& df, double& ddf) const override {
    base_.jet(t, f, df, ddf);
    f -= shift_;
  }

 private:
  const Curve& base_;
  double shift_;
};

// f', for locating derivative sign changes.  The certificates below read
// point values of orders 0-2 and bounds 2-3 of the curve they are given, so
// this adapter needs base orders 1-3 and bounds 3-4.
class DerivCurve : public Curve {
 public:
  explicit DerivCurve(const Curve& base) : base_(base) {}
  double value(double t, int order) const override { return base_.value(t, order + 1); }
  double deriv_sup_bound(int order) const override { return base_.deriv_sup_bound(order + 1); }
  void jet(double t, double& f, double& df, double& ddf) const override {
    double b0, b1, b2;
    base_.jet(t, b0, b1, b2);
    f = b1;
    df = b2;
    ddf = base_.value(t, 3);
  }

 private:
  const Curve& base_;
};

struct IsolationState {
  const Curve* f;
  double B1, B2, B3, tol;
  int count = 0;
  bool certified = true;
  int max_depth_reached = 0;
  std::vector<double>* roots = nullptr;  // optional root midpoints
};

// Midpoint evaluation with nudges so the split value is never exactly 0
// (an exact hit would make sign bookkeeping ambiguous).  Returns false if
// three candidate points all evaluate to exactly 0.
bool split_point(const IsolationState& st, double lo, double hi, double& c, double& fc,
                 double& dfc, double& ddfc) {
  const double h = hi - lo;
  for (double frac : {0.5, 0.509, 0.477}) {
    c = lo + frac * h;
    st.f->jet(c, fc, dfc, ddfc);
    if (!std::isfinite(fc) || !std::isfinite(dfc) || !std::isfinite(ddfc))
      throw numerical_failure("zero counting: non-finite evaluation");
    if (fc != 0.0) return true;
  }
  return false;
}

// Monotone refinement of a bracketing interval down to width < tol; returns
// the midpoint of the final bracket.
double refine_root(const Curve& f, double lo, double hi, double flo, double tol) {
  while (hi - lo >= tol) {
    const double c = 0.5 * (lo + hi);
    if (!(c > lo && c < hi)) break;  // floating-point floor
    const double fc = f.value(c, 0);
    if (fc == 0.0) return c;
    if ((flo < 0.0) != (fc < 0.0)) {
      hi = c;
    } else {
      lo = c;
      flo = fc;
    }
  }
  return 0.5 * (lo + hi);
}

void isolate(IsolationState& st, double lo, double hi, double flo, double fhi, int depth) {
  st.max_depth_reached = std::max(st.max_depth_reached, depth);
  const double h = hi - lo;
  const bool sign_change = (flo < 0.0) != (fhi < 0.0);

  double c, fc, dfc, ddfc;
  if (!split_point(st, lo, hi, c, fc, dfc, ddfc)) {
    st.certified = false;
    if (sign_change) {
      ++st.count;
      if (st.roots) st.roots->push_back(0.5 * (lo + hi));
    }
    return;
  }

  const double reach = std::max(c - lo, hi - c);
  // How far f (resp. f') can drift from its value at c anywhere in the
  // interval: the Lipschitz bound and the Taylor bound with Lagrange
  // remainder are both valid, so take the smaller.
  const double drift_f =
      std::min(st.B1 * reach, std::fabs(dfc) * reach + 0.5 * reach * reach * st.B2);
  const double drift_df =
      std::min(st.B2 * reach, std::fabs(ddfc) * reach + 0.5 * reach * reach * st.B3);
  // Exclusion: |f| cannot reach 0 anywhere in the interval.
  if (std::fabs(fc) > drift_f) return;
  // Monotonicity: f' keeps one sign, so the endpoint signs decide exactly.
  if (std::fabs(dfc) > drift_df) {
    if (sign_change) {
      ++st.count;
      if (st.roots) st.roots->push_back(refine_root(*st.f, lo, hi, flo, st.tol));
    }
    return;
  }
  if (h < st.tol && sign_change) {
    ++st.count;
    if (st.roots) st.roots->push_back(0.5 * (lo + hi));
    return;
  }
  if (depth >= kMaxDepth || !(c > lo && c < hi)) {
    st.certified = false;
    if (sign_change) {
      ++st.count;
      if (st.roots) st.roots->push_back(0.5 * (lo + hi));
    }
    return;
  }
  isolate(st, lo, c, flo, fc, depth + 1);
  isolate(st, c, hi, fc, fhi, depth + 1);
}

// Shared driver.  endpoint_error selects the exception type when f vanishes
// exactly at an endpoint (admissibility violation for counting, location
// failure for quadrature splitting).
IsolationState run_isolation(const Curve& f, Interval iv, double tol,
                             std::vector<double>* roots, bool endpoint_is_hypothesis) {
  check_interval(iv);
  const double fa = f.value(iv.a, 0);
  const double fb = f.value(iv.b, 0);
  if (!std::isfinite(fa) || !std::isfinite(fb))
    throw numerical_failure("zero counting: non-finite endpoint evaluation");
  if (fa == 0.0 || fb == 0.0) {
    if (endpoint_is_hypothesis)
      throw hypothesis_violation("count_zeros: f vanishes at an interval endpoint");
    throw numerical_failure("locate_roots: function vanishes exactly at an endpoint");
  }
  IsolationState st;
  st.f = &f;
  st.B1 = f.deriv_sup_bound(1);
  st.B2 = f.deriv_sup_bound(2);
  st.B3 = f.deriv_sup_bound(3);
  st.tol = tol;
  st.roots = roots;
  isolate(st, iv.a, iv.b, fa, fb, 0);
  return st;
}

}  // namespace

double h_delta_eps(double u, const KacParams& p) {
  if (!(p.delta > 0.0) || !(p.eps > 0.0) || !std::isfinite(p.delta) || !std::isfinite(p.eps))
    throw std::invalid_argument("KacParams: delta and eps must be positive and finite");
  const double au = std::fabs(u);
  if (au <= p.delta) return 1.0;
  if (au >= p.delta + p.eps) return 0.0;
  return 1.0 - (au - p.delta) / p.eps;
}

double h_bar_delta_eps(double x, const KacParams& p) {
  if (!(p.delta > 0.0) || !(p.eps > 0.0) || !std::isfinite(p.delta) || !std::isfinite(p.eps))
    throw std::invalid_argument("KacParams: delta and eps must be positive and finite");
  if (x <= p.delta) return 1.0;
  if (x >= p.delta + p.eps) return 0.0;
  return (p.delta + p.eps - x) / p.eps;
}

double min_gap_A(const Curve& f, Interval iv) {
  check_interval(iv);
  const double Blip = f.deriv_sup_bound(1) + f.deriv_sup_bound(2);
  const double Bquad = f.deriv_sup_bound(2) + f.deriv_sup_bound(3);

  // g(t) = |f| + |f'|; also reports |f'| + |f''| at t, the local Lipschitz
  // scale of g used by the sharper pruning bound below.
  auto g = [&f](double t, double& local_slope) {
    double v, dv, ddv;
    f.jet(t, v, dv, ddv);
    if (!std::isfinite(v) || !std::isfinite(dv) || !std::isfinite(ddv))
      throw numerical_failure("min_gap_A: non-finite evaluation");
    local_slope = std::fabs(dv) + std::fabs(ddv);
    return std::fabs(v) + std::fabs(dv);
  };

  // Coarse scan seeds the incumbent so branch-and-bound prunes early.
  constexpr int kCoarse = 32;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> pts(kCoarse + 1);
  double slope;
  for (int i = 0; i <= kCoarse; ++i) {
    pts[i] = iv.a + (iv.b - iv.a) * static_cast<double>(i) / kCoarse;
    best = std::min(best, g(pts[i], slope));
  }

  std::stack<std::pair<double, double>> work;
  for (int i = 0; i < kCoarse; ++i) work.push({pts[i], pts[i + 1]});
  while (!work.empty()) {
    const auto [lo, hi] = work.top();
    work.pop();
    const double h = hi - lo;
    const double c = 0.5 * (lo + hi);
    const double gc = g(c, slope);
    best = std::min(best, gc);
    // Over |t - c| <= h/2, g can drop below gc by at most the smaller of the
    // global Lipschitz bound and the Taylor bound built from the slope of g
    // at c plus a Lagrange remainder.  A subinterval is discarded when it
    // cannot improve the incumbent by more than one part in 1e6; the result
    // may therefore overestimate the true minimum by that relative amount,
    // which callers absorb (they shrink it before using it as a level).
    const double r = 0.5 * h;
    const double drop = std::min(r * Blip, r * slope + 0.5 * r * r * Bquad);
    if (gc - drop >= best * (1.0 - 1e-6)) continue;
    if (h < 1e-6) continue;
    work.push({lo, c});
    work.push({c, hi});
  }

  const double fa = std::fabs(f.value(iv.a, 0));
  const double fb = std::fabs(f.value(iv.b, 0));
  if (!std::isfinite(fa) || !std::isfinite(fb))
    throw numerical_failure("min_gap_A: non-finite endpoint evaluation");
  return std::min({fa, fb, 0.5 * best});
}

CountResult count_zeros(const Curve& f, Interval iv, double tol) {
  if (!(tol > 0.0) || tol > 1e-3)
    throw std::invalid_argument("count_zeros: tol must lie in (0, 1e-3]");
  IsolationState st = run_isolation(f, iv, tol, nullptr, /*endpoint_is_hypothesis=*/true);
  CountResult out;
  out.count = st.count;
  out.certified = st.certified;
  out.refinement_depth = st.max_depth_reached;
  out.min_abs_at_roots_gap = min_gap_A(f, iv);
  return out;
}

RootLocations locate_roots(const Curve& f, Interval iv, double tol) {
  if (!(tol > 0.0) || tol > 1e-3)
    throw std::invalid_argument("locate_roots: tol must lie in (0, 1e-3]");
  RootLocations out;
  IsolationState st = run_isolation(f, iv, tol, &out.roots, /*endpoint_is_hypothesis=*/false);
  out.certified = st.certified;
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

namespace {

// Crossings of f' = 0 used only to split quadrature panels.  Endpoint zeros
// of f' are harmless here, so the interval is inset slightly; if location
// still fails the split is skipped (the quadrature then merely loses its
// spectral accuracy on one panel, it does not become wrong).
std::vector<double> derivative_breaks(const Curve& f, Interval iv) {
  const double inset = 1e-12;
  if (iv.b - iv.a < 4.0 * inset) return {};
  DerivCurve df(f);
  try {
    return locate_roots(df, {iv.a + inset, iv.b - inset}).roots;
  } catch (const numerical_failure&) {
    return {};
  }
}

double integrate_panels(const Curve& f, double p, double q, const QuadSpec& quad,
                        const KacParams* moll) {
  const GaussLegendre& rule = gauss_legendre(quad.nodes);
  const int npanels = std::max(1, static_cast<int>(std::ceil((q - p) / quad.max_panel)));
  const double w = (q - p) / npanels;
  double acc = 0.0;
  for (int pan = 0; pan < npanels; ++pan) {
    const double mid = p + (pan + 0.5) * w;
    double s = 0.0;
    for (int k = 0; k < quad.nodes; ++k) {
      const double u = mid + 0.5 * w * rule.nodes[k];
      double v, dv, unused;
      f.jet(u, v, dv, unused);
      double integrand = std::fabs(dv);
      if (moll) integrand *= h_delta_eps(v, *moll);
      s += rule.weights[k] * integrand;
    }
    acc += s * (0.5 * w);
  }
  return acc;
}

double kac_integral(const Curve& f, Interval iv, double delta, const KacParams* moll,
                    const QuadSpec& quad) {
  check_interval(iv);
  if (!(delta > 0.0)) throw std::invalid_argument("kac integral: delta must be > 0");
  if (quad.nodes < 2 || !(quad.max_panel > 0.0))
    throw std::invalid_argument("kac integral: invalid quadrature spec");

  // Panel boundaries: every point where the integrand loses smoothness --
  // crossings of the indicator/mollifier levels and sign changes of f'.
  std::vector<double> breaks = {iv.a, iv.b};
  std::vector<double> levels = {delta, -delta};
  if (moll) {
    levels.push_back(delta + moll->eps);
    levels.push_back(-(delta + moll->eps));
  }
  for (double lvl : levels) {
    ShiftedCurve shifted(f, lvl);
    RootLocations rl = locate_roots(shifted, iv);
    breaks.insert(breaks.end(), rl.roots.begin(), rl.roots.end());
  }
  const std::vector<double> dbreaks = derivative_breaks(f, iv);
  breaks.insert(breaks.end(), dbreaks.begin(), dbreaks.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double x, double y) { return y - x < 1e-13; }),
               breaks.end());

  const double outer = moll ? delta + moll->eps : delta;
  double acc = 0.0;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const double p = breaks[i - 1], q = breaks[i];
    if (!(q > p)) continue;
    const double fmid = f.value(0.5 * (p + q), 0);
    if (std::fabs(fmid) >= outer) continue;  // integrand identically 0 here
    acc += integrate_panels(f, p, q, quad, moll);
  }
  return acc / (2.0 * delta);
}

}  // namespace

double kac_phi_delta(const Curve& f, Interval iv, double delta, const QuadSpec& quad) {
  return kac_integral(f, iv, delta, nullptr, quad);
}

double kac_phi_delta_eps(const Curve& f, Interval iv, const KacParams& p, const QuadSpec& quad) {
  if (!(p.delta > 0.0) || !(p.eps > 0.0))
    throw std::invalid_argument("kac_phi_delta_eps: delta and eps must be > 0");
  return kac_integral(f, iv, p.delta, &p, quad);
}

double psi_bar(const Curve& f, Interval iv, const KacParams& p) {
  return h_bar_delta_eps(min_gap_A(f, iv), p);
}

}  // namespace rtpzero
