#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "rtpzero/rng.hpp"
#include "rtpzero/rtp.hpp"

namespace rtpzero {

// Stationary covariance of the band-limited limit process:
// r(s,t) = sinc(pi (t - s)) with sinc(0) = 1.
double sinc_cov(double s, double t);

// r and its partial derivatives, all analytic (series-switched near
// coincidence).  At s = t: r = 1, dr = 0, d2r_dsdt = pi^2/3.
struct CovDerivatives {
  double r;
  double dr_dt;
  double dr_ds;
  double d2r_dsdt;
};
CovDerivatives cov_derivatives(double s, double t);

// Variances of the (value, derivative) pair at a fixed time; the cross term
// is zero by stationarity.
struct CovPair {
  double var_value;
  double var_deriv;
};

// Limit process: var_value = 1, var_deriv = pi^2/3.
CovPair limit_cov_pair();

// Degree-m polynomial with unit-variance coefficients:
// var_value = 1, var_deriv = pi^2 (2m-1)(m-1) / (6 m^2).  Requires m >= 2
// (at m = 1 the polynomial is constant and the pair degenerates).
CovPair gamma_m(std::size_t m);

// Exact joint draw of (value, derivative) of the limit process on a grid.
struct GPGridSample {
  std::vector<double> grid;
  std::vector<double> g_values;
  std::vector<double> g_derivs;
  std::string method;       // "cholesky_exact" or "surrogate_M"
  double jitter_used = 0.0; // diagonal jitter the factorization needed (usually 0)
};

// Factorizes the 2n x 2n covariance assembled from cov_derivatives and
// applies it to a standard normal vector.  Starts with the requested jitter
// (default 0); on factorization failure retries with 1e-10, escalating
// tenfold up to 1e-6, then throws numerical_failure.  Grid size capped at
// 2n <= 4096.
GPGridSample sample_gp_cholesky(const std::vector<double>& grid, const SeedSpec& seed,
                                double jitter = 0.0);

// Approximate sampler of the limit process: the degree-M polynomial with
// standard Gaussian coefficients.  Unlike the grid sampler it is a closed
// form on all of [0,1], so zero counts on it can be certified.
TrigPolynomial sample_gp_surrogate(std::size_t M, const SeedSpec& seed);

// Expected zero count of a stationary centered Gaussian process on an
// interval: length * (1/pi) * sqrt(var_deriv / var_value).
double kac_rice_mean(const CovPair& cov, double interval_length);

namespace testing {
// Fault-injection hook for the validation suite's negative control: when
// enabled, sinc_cov returns a slightly perturbed kernel so that the
// covariance checks must fail.  Never enable outside validation runs.
void set_sinc_tamper(bool enabled);
bool sinc_tamper_enabled();
}  // namespace testing

}  // namespace rtpzero
