#include "rtpzero/rtp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rtpzero/quadrature.hpp"

namespace rtpzero {

namespace {

constexpr double kPi = 3.14159265358979323846;

// phi1(z) = (e^z - 1)/z and psi(z) = (e^z (z-1) + 1)/z^2, the moments
// integral_0^1 e^{z v} dv and integral_0^1 v e^{z v} dv.  Power series near 0
// to avoid cancellation.
std::complex<double> phi1(std::complex<double> z) {
  if (std::abs(z) < 0.5) {
    std::complex<double> term(1.0, 0.0), sum(1.0, 0.0);
    for (int k = 1; k < 16; ++k) {
      term *= z / static_cast<double>(k + 1);
      sum += term;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

std::complex<double> psi(std::complex<double> z) {
  if (std::abs(z) < 0.5) {
    // sum_k z^k (k+1)/(k+2)!  -- iterate t_k = z^k/(k+2)! scaled.
    std::complex<double> sum(0.5, 0.0);
    std::complex<double> zk(1.0, 0.0);
    double fact = 2.0;  // (k+2)! for k=0
    for (int k = 1; k < 16; ++k) {
      zk *= z;
      fact *= static_cast<double>(k + 2);
      sum += zk * (static_cast<double>(k + 1) / fact);
    }
    return sum;
  }
  return (std::exp(z) * (z - 1.0) + 1.0) / (z * z);
}

}  // namespace

TrigPolynomial::TrigPolynomial(std::vector<double> x, std::vector<double> y)
    : m_(x.size()), x_(std::move(x)), y_(std::move(y)) {
  if (m_ == 0) throw std::invalid_argument("TrigPolynomial: need at least one coefficient pair");
  if (y_.size() != m_) throw std::invalid_argument("TrigPolynomial: x/y size mismatch");
}

void TrigPolynomial::jet(double t, double& f, double& df, double& ddf) const {
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("TrigPolynomial: t outside [0,1]");
  const double md = static_cast<double>(m_);
  const double step = kPi * t / md;
  const double cs = std::cos(step), sn = std::sin(step);
  const double wstep = kPi / md;
  double cr = 1.0, sr = 0.0, w = 0.0;
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t r = 0; r < m_; ++r) {
    const double xc = x_[r], yc = y_[r];
    const double even = xc * cr + yc * sr;   // appears in f and -f''/w^2
    const double odd = yc * cr - xc * sr;    // appears in f'/w
    s0 += even;
    s1 += w * odd;
    s2 += w * w * even;
    const double c2 = cr * cs - sr * sn;
    sr = sr * cs + cr * sn;
    cr = c2;
    w += wstep;
  }
  const double scale = 1.0 / std::sqrt(md);
  f = scale * s0;
  df = scale * s1;
  ddf = -scale * s2;
}

double TrigPolynomial::value(double t, int order) const {
  if (order < 0) throw std::invalid_argument("TrigPolynomial::value: order must be >= 0");
  if (order <= 2) {
    double f, df, ddf;
    jet(t, f, df, ddf);
    return order == 0 ? f : (order == 1 ? df : ddf);
  }
  // Differentiating k times shifts each phase by k*pi/2, so the r-th term
  // becomes w^k * (+even, +odd, -even, -odd) for k mod 4 = 0,1,2,3 where
  // even = x cos + y sin and odd = y cos - x sin.  Same rotation recurrence
  // as the jet, with the frequency power accumulated incrementally.
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("TrigPolynomial: t outside [0,1]");
  const double md = static_cast<double>(m_);
  const double cs = std::cos(kPi * t / md), sn = std::sin(kPi * t / md);
  const double wstep = kPi / md;
  double cr = 1.0, sr = 0.0, w = 0.0, acc = 0.0;
  const int phase = order & 3;
  for (std::size_t r = 0; r < m_; ++r) {
    double wk = 1.0;
    for (int j = 0; j < order; ++j) wk *= w;
    const double even = x_[r] * cr + y_[r] * sr;
    const double odd = y_[r] * cr - x_[r] * sr;
    const double base = (phase == 0 || phase == 2) ? even : odd;
    acc += (phase < 2 ? wk : -wk) * base;
    const double c2 = cr * cs - sr * sn;
    sr = sr * cs + cr * sn;
    cr = c2;
    w += wstep;
  }
  return acc / std::sqrt(md);
}

double TrigPolynomial::value_reference(double t, int order) const {
  if (order < 0) throw std::invalid_argument("TrigPolynomial::value_reference: order must be >= 0");
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("TrigPolynomial: t outside [0,1]");
  const double md = static_cast<double>(m_);
  const int phase = order & 3;
  double acc = 0.0;
  for (std::size_t r = 0; r < m_; ++r) {
    const double w = kPi * static_cast<double>(r) / md;
    const double c = std::cos(w * t), s = std::sin(w * t);
    const double even = x_[r] * c + y_[r] * s;
    const double odd = y_[r] * c - x_[r] * s;
    double wk = 1.0;
    for (int j = 0; j < order; ++j) wk *= w;
    const double base = (phase == 0 || phase == 2) ? even : odd;
    acc += (phase < 2 ? wk : -wk) * base;
  }
  return acc / std::sqrt(md);
}

double TrigPolynomial::deriv_sup_bound(int order) const {
  if (order < 1) throw std::invalid_argument("TrigPolynomial::deriv_sup_bound: order must be >= 1");
  const double md = static_cast<double>(m_);
  double acc = 0.0;
  for (std::size_t r = 0; r < m_; ++r) {
    const double w = kPi * static_cast<double>(r) / md;
    acc += std::pow(w, order) * (std::fabs(x_[r]) + std::fabs(y_[r]));
  }
  return acc / std::sqrt(md);
}

PathPL::PathPL(std::vector<double> knots, std::vector<std::complex<double>> values)
    : t(std::move(knots)), z(std::move(values)) {
  if (t.size() < 2) throw std::invalid_argument("PathPL: need at least two knots");
  if (t.size() != z.size()) throw std::invalid_argument("PathPL: knot/value size mismatch");
  if (t.front() != 0.0 || t.back() != 1.0)
    throw std::invalid_argument("PathPL: knots must start at 0 and end at 1");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw std::invalid_argument("PathPL: knots must be strictly increasing");
}

std::complex<double> PathPL::at(double u) const {
  if (u < 0.0 || u > 1.0) throw std::invalid_argument("PathPL::at: argument outside [0,1]");
  auto it = std::upper_bound(t.begin(), t.end(), u);
  std::size_t i = static_cast<std::size_t>(it - t.begin());
  if (i == 0) i = 1;
  if (i >= t.size()) i = t.size() - 1;
  const double w = (u - t[i - 1]) / (t[i] - t[i - 1]);
  return z[i - 1] + w * (z[i] - z[i - 1]);
}

PathPL build_partial_sum(const CoefficientPairs& coeffs) {
  const std::size_t m = coeffs.x.size();
  if (m == 0 || coeffs.y.size() != m)
    throw std::invalid_argument("build_partial_sum: invalid coefficient pairs");
  std::vector<double> knots(m + 1);
  std::vector<std::complex<double>> vals(m + 1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t k = 0; k <= m; ++k) {
    knots[k] = static_cast<double>(k) / static_cast<double>(m);
    vals[k] = scale * acc;
    if (k < m) acc += std::complex<double>(coeffs.x[k], coeffs.y[k]);
  }
  return PathPL(std::move(knots), std::move(vals));
}

double theta(const PathPL& f, double t) {
  const double a = kPi * t;
  // integral_0^1 e^{-i a u} f(u) du, exact per linear piece.
  std::complex<double> integral(0.0, 0.0);
  for (std::size_t i = 1; i < f.t.size(); ++i) {
    const double p = f.t[i - 1], h = f.t[i] - f.t[i - 1];
    const std::complex<double> zp = f.z[i - 1];
    const std::complex<double> slope_h = f.z[i] - f.z[i - 1];  // slope * h
    const std::complex<double> zeta(0.0, -a * h);
    const std::complex<double> phase = std::polar(1.0, -a * p);
    integral += h * phase * (zp * phi1(zeta) + slope_h * psi(zeta));
  }
  const std::complex<double> head =
      std::polar(1.0, -a) * f.z.back() - f.z.front() + std::complex<double>(0.0, a) * integral;
  return head.real();
}

double theta(const std::function<std::complex<double>(double)>& f, double t, int panels) {
  if (panels < 1) throw std::invalid_argument("theta: panels must be >= 1");
  const double a = kPi * t;
  const GaussLegendre& rule = gauss_legendre(16);
  std::complex<double> integral(0.0, 0.0);
  const double h = 1.0 / static_cast<double>(panels);
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    std::complex<double> acc(0.0, 0.0);
    for (int q = 0; q < 16; ++q) {
      const double u = mid + 0.5 * h * rule.nodes[q];
      acc += rule.weights[q] * std::polar(1.0, -a * u) * f(u);
    }
    integral += acc * (0.5 * h);
  }
  const std::complex<double> head =
      std::polar(1.0, -a) * f(1.0) - f(0.0) + std::complex<double>(0.0, a) * integral;
  return head.real();
}

double theta_m(const PathPL& f, std::size_t m, double t) {
  if (m == 0) throw std::invalid_argument("theta_m: m must be >= 1");
  const double md = static_cast<double>(m);
  // The transform only reads the path at the k/m grid; require those points
  // to be knots so interpolation never silently substitutes for path data.
  for (std::size_t k = 0; k <= m; ++k) {
    const double u = static_cast<double>(k) / md;
    auto it = std::lower_bound(f.t.begin(), f.t.end(), u - 1e-12);
    if (it == f.t.end() || std::abs(*it - u) > 1e-12)
      throw std::invalid_argument("theta_m: path has no knot at k/m for k=" + std::to_string(k));
  }
  const std::complex<double> rot = std::polar(1.0, -kPi * t / md);
  // a_k = e^{-i pi k t / m}; accumulate -sum_{k=1}^{m-1} (a_k - a_{k-1}) f(k/m).
  std::complex<double> ak(1.0, 0.0);
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t k = 1; k < m; ++k) {
    const std::complex<double> prev = ak;
    ak *= rot;
    acc -= (ak - prev) * f.at(static_cast<double>(k) / md);
  }
  const std::complex<double> lead = std::polar(1.0, -kPi * (md - 1.0) * t / md);
  return (lead * f.z.back() - f.z.front() + acc).real();
}

C1Path::C1Path(std::vector<double> g, std::vector<double> v, std::vector<double> d)
    : grid(std::move(g)), values(std::move(v)), derivs(std::move(d)) {
  if (grid.size() < 2) throw std::invalid_argument("C1Path: need at least two grid points");
  if (values.size() != grid.size() || derivs.size() != grid.size())
    throw std::invalid_argument("C1Path: values/derivs must match the grid length");
  if (grid.front() < 0.0 || grid.back() > 1.0)
    throw std::invalid_argument("C1Path: grid must lie in [0,1]");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("C1Path: grid must be strictly increasing");
}

double C1Path::value_at(double u) const {
  if (u <= grid.front()) return values.front();
  if (u >= grid.back()) return values.back();
  auto it = std::upper_bound(grid.begin(), grid.end(), u);
  const std::size_t i = static_cast<std::size_t>(it - grid.begin());
  const double w = (u - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return values[i - 1] + w * (values[i] - values[i - 1]);
}

namespace {
template <typename GetT, typename GetDist>
double holder_scan(std::size_t n, double alpha, GetT dt, GetDist dist) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("holder_seminorm: alpha must be in (0,1)");
  if (n < 2) throw std::invalid_argument("holder_seminorm: need at least two points");
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      best = std::max(best, dist(i, j) / std::pow(dt(i, j), alpha));
  return best;
}
}  // namespace

double holder_seminorm(const PathPL& f, double alpha) {
  return holder_scan(
      f.t.size(), alpha, [&](std::size_t i, std::size_t j) { return f.t[j] - f.t[i]; },
      [&](std::size_t i, std::size_t j) { return std::abs(f.z[j] - f.z[i]); });
}

double holder_seminorm(const C1Path& f, double alpha) {
  return holder_scan(
      f.grid.size(), alpha,
      [&](std::size_t i, std::size_t j) { return f.grid[j] - f.grid[i]; },
      [&](std::size_t i, std::size_t j) { return std::fabs(f.values[j] - f.values[i]); });
}

std::array<double, 4> lip11_battery(const C1Path& f) {
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    s0 = std::max(s0, std::fabs(f.values[i]));
    s1 = std::max(s1, std::fabs(f.derivs[i]));
  }
  const double v0 = f.value_at(0.0);
  const double vh = f.value_at(0.5);
  const double strong = s1 + std::fabs(v0);
  return {0.5 * s0 * s0, 0.5 * strong * strong, std::min(s0, 1.0),
          vh * std::min(std::fabs(vh), 1.0)};
}

C1Path sample_c1(const Curve& f, int grid_n) {
  if (grid_n < 1) throw std::invalid_argument("sample_c1: grid_n must be >= 1");
  std::vector<double> g(grid_n + 1), v(grid_n + 1), d(grid_n + 1);
  for (int i = 0; i <= grid_n; ++i) {
    g[i] = static_cast<double>(i) / static_cast<double>(grid_n);
    v[i] = f.value(g[i], 0);
    d[i] = f.value(g[i], 1);
  }
  return C1Path(std::move(g), std::move(v), std::move(d));
}

}  // namespace rtpzero
