#include "rtpzero/gaussian_limit.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rtpzero/errors.hpp"

namespace rtpzero {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::atomic<bool> g_sinc_tamper{false};

// sinc(x) = sin(x)/x and its first two derivatives.  The closed forms lose
// accuracy near 0 by cancellation, so small arguments use the power series.
double sinc(double x) {
  const double ax = std::fabs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

double sinc_d1(double x) {
  const double ax = std::fabs(x);
  if (ax < 0.1) {
    // -x/3 + x^3/30 - x^5/840 + x^7/45360
    const double x2 = x * x;
    return x * (-1.0 / 3.0 + x2 * (1.0 / 30.0 + x2 * (-1.0 / 840.0 + x2 / 45360.0)));
  }
  return (x * std::cos(x) - std::sin(x)) / (x * x);
}

double sinc_d2(double x) {
  const double ax = std::fabs(x);
  if (ax < 0.1) {
    // -1/3 + x^2/10 - x^4/168 + x^6/6480
    const double x2 = x * x;
    return -1.0 / 3.0 + x2 * (1.0 / 10.0 + x2 * (-1.0 / 168.0 + x2 / 6480.0));
  }
  const double x2 = x * x;
  return -std::sin(x) / x - 2.0 * std::cos(x) / x2 + 2.0 * std::sin(x) / (x2 * x);
}
}  // namespace

namespace testing {
void set_sinc_tamper(bool enabled) { g_sinc_tamper.store(enabled); }
bool sinc_tamper_enabled() { return g_sinc_tamper.load(); }
}  // namespace testing

double sinc_cov(double s, double t) {
  double v = sinc(kPi * (t - s));
  if (g_sinc_tamper.load() && std::fabs(t - s) > 0.05)
    v += 1e-3 * std::sin(7.0 * kPi * (t - s));
  return v;
}

CovDerivatives cov_derivatives(double s, double t) {
  const double x = kPi * (t - s);
  CovDerivatives out;
  out.r = sinc_cov(s, t);
  out.dr_dt = kPi * sinc_d1(x);
  out.dr_ds = -kPi * sinc_d1(x);
  out.d2r_dsdt = -kPi * kPi * sinc_d2(x);
  return out;
}

CovPair limit_cov_pair() { return {1.0, kPi * kPi / 3.0}; }

CovPair gamma_m(std::size_t m) {
  if (m < 2)
    throw std::invalid_argument("gamma_m: m must be >= 2 (derivative degenerates at m = 1)");
  const double md = static_cast<double>(m);
  return {1.0, kPi * kPi * (2.0 * md - 1.0) * (md - 1.0) / (6.0 * md * md)};
}

GPGridSample sample_gp_cholesky(const std::vector<double>& grid, const SeedSpec& seed,
                                double jitter) {
  const std::size_t n = grid.size();
  if (n == 0) throw std::invalid_argument("sample_gp_cholesky: empty grid");
  if (2 * n > 4096) throw std::invalid_argument("sample_gp_cholesky: 2*|grid| exceeds 4096");
  if (jitter < 0.0) throw std::invalid_argument("sample_gp_cholesky: jitter must be >= 0");
  for (std::size_t i = 0; i < n; ++i) {
    if (grid[i] < 0.0 || grid[i] > 1.0)
      throw std::invalid_argument("sample_gp_cholesky: grid point outside [0,1]");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("sample_gp_cholesky: grid must be strictly increasing");
  }

  // Joint covariance of (values..., derivatives...): the value/value block is
  // r, value/derivative blocks are the partials, derivative/derivative is the
  // mixed second partial.
  const Eigen::Index N = static_cast<Eigen::Index>(2 * n);
  Eigen::MatrixXd C(N, N);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const CovDerivatives d = cov_derivatives(grid[i], grid[j]);
      C(i, j) = d.r;
      C(i, n + j) = d.dr_dt;   // Cov(value at t_i, deriv at t_j)
      C(n + i, j) = d.dr_ds;   // Cov(deriv at t_i, value at t_j)
      C(n + i, n + j) = d.d2r_dsdt;
    }
  }

  double jit = jitter;
  Eigen::LLT<Eigen::MatrixXd> llt;
  for (;;) {
    Eigen::MatrixXd Cj = C;
    if (jit > 0.0) Cj.diagonal().array() += jit;
    llt.compute(Cj);
    if (llt.info() == Eigen::Success) break;
    if (jit == 0.0) {
      jit = 1e-10;
    } else {
      jit *= 10.0;
      if (jit > 1e-6) {
        std::ostringstream msg;
        msg << "sample_gp_cholesky: covariance not factorizable, grid size " << n
            << ", jitter escalated to " << jit / 10.0 << " without success";
        throw numerical_failure(msg.str());
      }
    }
  }

  Stream rng(seed);
  Eigen::VectorXd z(N);
  for (Eigen::Index i = 0; i < N; ++i) z(i) = rng.normal();
  const Eigen::VectorXd x = llt.matrixL() * z;

  GPGridSample out;
  out.grid = grid;
  out.g_values.assign(x.data(), x.data() + n);
  out.g_derivs.assign(x.data() + n, x.data() + N);
  out.method = "cholesky_exact";
  out.jitter_used = jit;
  return out;
}

TrigPolynomial sample_gp_surrogate(std::size_t M, const SeedSpec& seed) {
  if (M < 2) throw std::invalid_argument("sample_gp_surrogate: M must be >= 2");
  return TrigPolynomial(sample_pairs(CoefficientLaw::gaussian, M, seed));
}

double kac_rice_mean(const CovPair& cov, double interval_length) {
  if (!(cov.var_value > 0.0))
    throw std::invalid_argument("kac_rice_mean: var_value must be > 0");
  if (interval_length < 0.0)
    throw std::invalid_argument("kac_rice_mean: interval_length must be >= 0");
  return interval_length * std::sqrt(cov.var_deriv / cov.var_value) / kPi;
}

}  // namespace rtpzero
