#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rtpzero/coefficients.hpp"
#include "rtpzero/errors.hpp"
#include "rtpzero/experiment.hpp"
#include "rtpzero/gaussian_limit.hpp"
#include "rtpzero/mc.hpp"
#include "rtpzero/metrics.hpp"
#include "rtpzero/rng.hpp"
#include "rtpzero/rtp.hpp"
#include "rtpzero/zeros.hpp"

namespace rtpzero {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Child-master tags so every suite draws from its own independent stream
// family under the configured master seed.
constexpr std::uint64_t kSuiteTagBase = 0x76616c6964617465ULL;  // "validate"

std::uint64_t suite_master(std::uint64_t master_seed, std::uint64_t suite_idx) {
  return derive_seed(SeedSpec{master_seed, kSuiteTagBase + suite_idx});
}

struct SuiteResult {
  bool pass = true;
  std::string detail;  // deterministic; shown only on failure
};

class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (ok) return;
    ++violations_;
    if (first_.empty()) first_ = what;
  }
  SuiteResult result() const {
    SuiteResult r;
    r.pass = violations_ == 0;
    if (!r.pass)
      r.detail = std::to_string(violations_) + " violation(s); first: " + first_;
    return r;
  }

 private:
  std::size_t violations_ = 0;
  std::string first_;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

TrigPolynomial random_poly(CoefficientLaw law, std::size_t m, std::uint64_t master,
                           std::uint64_t idx) {
  return TrigPolynomial(sample_pairs(law, m, SeedSpec{master, idx}));
}

// Scalar multiple of a curve; used by the scale-equivariance checks.
class ScaledCurve : public Curve {
 public:
  ScaledCurve(const Curve& base, double c) : base_(base), c_(c) {}
  double value(double t, int order) const override { return c_ * base_.value(t, order); }
  double deriv_sup_bound(int order) const override {
    return std::fabs(c_) * base_.deriv_sup_bound(order);
  }
  void jet(double t, double& f, double& df, double& ddf) const override {
    base_.jet(t, f, df, ddf);
    f *= c_;
    df *= c_;
    ddf *= c_;
  }

 private:
  const Curve& base_;
  double c_;
};

// ---------------------------------------------------------------------------
// Suites.  Each is a pure function of (master seed, config); all randomness
// is drawn from derived streams, so reports are byte-identical across runs.
// ---------------------------------------------------------------------------

SuiteResult suite_coefficients_moments(const ExperimentConfig& cfg) {
  Check ck;
  const std::uint64_t ms = suite_master(cfg.master_seed, 1);
  const std::size_t n = 1000000;
  const struct {
    CoefficientLaw law;
    double m3;  // E|X|^3
    double m4_tol;
  } rows[] = {
      {CoefficientLaw::gaussian, 1.5957691216057308, 0.25},
      {CoefficientLaw::rademacher, 1.0, 1e-12},
      {CoefficientLaw::uniform_scaled, 1.299038105676658, 0.1},
      {CoefficientLaw::laplace_scaled, 2.1213203435596424, 1.5},
  };
  std::uint64_t idx = 0;
  for (const auto& row : rows) {
    const MomentReport rep = moment_report(row.law, n, SeedSpec{ms, idx++});
    const double sd = std::sqrt(rep.variance);
    ck.require(std::fabs(rep.mean) <= 4.0 * sd / std::sqrt(static_cast<double>(n)),
               std::string(law_name(row.law)) + " mean " + fmt(rep.mean));
    ck.require(std::fabs(rep.variance - 1.0) <= 0.05,
               std::string(law_name(row.law)) + " variance " + fmt(rep.variance));
    ck.require(std::fabs(rep.abs_moment_3 - row.m3) <= 0.05,
               std::string(law_name(row.law)) + " abs_moment_3 " + fmt(rep.abs_moment_3));
    ck.require(std::fabs(rep.abs_moment_4 - law_fourth_moment(row.law)) <= row.m4_tol,
               std::string(law_name(row.law)) + " abs_moment_4 " + fmt(rep.abs_moment_4));
    ck.require(rep.n == n, "report n");
  }
  return ck.result();
}

SuiteResult suite_coefficients_determinism(const ExperimentConfig& cfg) {
  Check ck;
  const std::uint64_t ms = suite_master(cfg.master_seed, 2);
  for (CoefficientLaw law : {CoefficientLaw::gaussian, CoefficientLaw::rademacher,
                             CoefficientLaw::uniform_scaled, CoefficientLaw::laplace_scaled}) {
    const CoefficientPairs a = sample_pairs(law, 64, SeedSpec{ms, 7});
    const CoefficientPairs b = sample_pairs(law, 64, SeedSpec{ms, 7});
    const CoefficientPairs c = sample_pairs(law, 64, SeedSpec{ms, 8});
    ck.require(a.x == b.x && a.y == b.y,
               std::string(law_name(law)) + " same seed must reproduce draws");
    ck.require(a.x != c.x, std::string(law_name(law)) + " distinct streams must differ");
  }
  return ck.result();
}

SuiteResult suite_stream_independence(const ExperimentConfig& cfg) {
  Check ck;
  const std::uint64_t ms = suite_master(cfg.master_seed, 3);
  const std::size_t n = 100000;
  Stream s0(SeedSpec{ms, 0});
  Stream s1(SeedSpec{ms, 1});
  double sum01 = 0.0, sum0 = 0.0, sum1 = 0.0, sq0 = 0.0, sq1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = s0.normal();
    const double b = s1.normal();
    sum01 += a * b;
    sum0 += a;
    sum1 += b;
    sq0 += a * a;
    sq1 += b * b;
  }
  const double nd = static_cast<double>(n);
  const double cov = sum01 / nd - (sum0 / nd) * (sum1 / nd);
  const double v0 = sq0 / nd - (sum0 / nd) * (sum0 / nd);
  const double v1 = sq1 / nd - (sum1 / nd) * (sum1 / nd);
  const double corr = cov / std::sqrt(v0 * v1);
  ck.require(std::fabs(corr) < 4.0 / std::sqrt(nd), "stream correlation " + fmt(corr));

  std::vector<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) seeds.push_back(derive_seed(SeedSpec{ms, i}));
  std::sort(seeds.begin(), seeds.end());
  ck.require(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end(),
             "derived seeds must be distinct");
  return ck.result();
}

SuiteResult suite_eval_agreement(const ExperimentConfig& cfg) {
  Check ck;
  const std::uint64_t ms = suite_master(cfg.master_seed, 4);
  Stream ts(SeedSpec{ms, 1000});
  for (std::size_t m : {1u, 2u, 7u, 64u, 257u, 512u}) {
    const TrigPolynomial p = random_poly(CoefficientLaw::gaussian, m, ms, m);
    for (int i = 0; i < 50; ++i) {
      const double t = ts.uniform01();
      for (int order = 0; order <= 2; ++order) {
        const double fast = p.value(t, order);
        const double ref = p.value_reference(t, order);
        const double scale = 1.0 + (order == 0 ? 1.0 : p.deriv_sup_bound(order));
        ck.require(std::fabs(fast - ref) <= 1e-11 * scale,
                   "recurrence vs reference, m=" + std::to_string(m) +
                       " order=" + std::to_string(order));
      }
    }
  }
  return ck.result();
}

SuiteResult suite_deriv_bound_domination(const ExperimentConfig& cfg) {
  Check ck;
  const std::uint64_t ms = suite_master(cfg.master_seed, 5);
  Stream ts(SeedSpec{ms, 5000});
  for (int i = 0; i < 1000; ++i) {
    const std::size_t m = 1 + static_cast<std::size_t>(ts.uniform01() * 64.0);
    const TrigPolynomial p = random_poly(CoefficientLaw::laplace_scaled, m, ms, i);
    const double b1 = p.deriv_sup_bound(1);
    const double b2 = p.deriv_sup_bound(2);
    const double t = ts.uniform01();
    ck.require(std::fabs(p.value(t, 1)) <= b1 * (1.0 + 1e-12) + 1e-12, "order-1 bound");
    ck.require(std::fabs(p.value(t, 2)) <= b2 * (1.0 + 1e-12) + 1e-12, "order-2 bound");
  }
  return ck.result();
}

SuiteResult suite_covariance_derivatives(const ExperimentConfig& cfg) {
  Check ck;
  const std::uint64_t ms = suite_master(cfg.master_seed, 6);
  Stream ts(SeedSpec{ms, 0});
  const double h1 = 1e-5;  // first derivatives
  const double h2 = 1e-4;  // mixed second derivative (FD roundoff ~ ulp/h^2)
  for (int i = 0; i < 100; ++i) {
    const double s = ts.uniform01();
    const double t = ts.uniform01();
    const CovDerivatives cd = cov_derivatives(s, t);
    const double fd_dt = (sinc_cov(s, t + h1) - sinc_cov(s, t - h1)) / (2.0 * h1);
    const double fd_ds = (sinc_cov(s + h1, t) - sinc_cov(s - h1, t)) / (2.0 * h1);
    const double fd_dsdt = (sinc_cov(s + h2, t + h2) - sinc_cov(s + h2, t - h2) -
                            sinc_cov(s - h2, t + h2) + sinc_cov(s - h2, t - h2)) /
                           (4.0 * h2 * h2);
    ck.require(std::fabs(cd.dr_dt - fd_dt) <= 1e-6, "dr_dt vs FD at (" + fmt(s) + "," + fmt(t) + ")");
    ck.require(std::fabs(cd.dr_ds - fd_ds) <= 1e-6, "dr_ds vs FD");
    ck.require(std::fabs(cd.d2r_dsdt - fd_dsdt) <= 1e-6, "d2r_dsdt vs FD");
    ck.require(std::fabs(sinc_cov(s, t) - sinc_cov(t, s)) <= 1e-15, "kernel symmetry");
    ck.require(sinc_cov(s, t) == sinc_cov(0.0, t - s), "stationarity");
  }
  // Closed-form spot values.
  ck.require(std::fabs(sinc_cov(0.0, 0.5) - 2.0 / kPi) <= 1e-15, "r(0,0.5) = 2/pi");
  ck.require(std::fabs(cov_derivatives(0.0, 0.5).dr_dt + 4.0 / kPi) <= 1e-12,
             "dr_dt(0,0.5) = -4/pi");
  ck.require(std::fabs(cov_derivatives(0.3, 0.3).d2r_dsdt - kPi * kPi / 3.0) <= 1e-12,
             "d2r/dsdt at the diagonal = pi^2/3");
  return ck.result();
}

// The joint (value, derivative) covariance of a band-limited process is
// exactly positive semidefinite but numerically rank-deficient: on a uniform
// grid its eigenvalues plunge below the rounding floor (already at n = 8 the
// smallest computed eigenvalue is a small negative number of order 1e-15).
// A strict no-jitter factorization is therefore impossible in double
// precision; the meaningful invariants are (a) the spectrum is nonnegative
// up to relative roundoff and (b) the factorization ladder succeeds at a
// statistically negligible rung (<= 1e-9 absolute, ~1e-12 of the largest
// eigenvalue).
SuiteResult suite_covariance_psd(const ExperimentConfig& cfg) {
  Check ck;
  const std::uint64_t ms = suite_master(cfg.master_seed, 7);
  for (std::size_t n : {8u, 64u, 256u, 512u}) {
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i)
      grid[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    const Eigen::Index N = static_cast<Eigen::Index>(2 * n);
    Eigen::MatrixXd C(N, N);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const CovDerivatives d = cov_derivatives(grid[i], grid[j]);
        C(i, j) = d.r;
        C(i, n + j) = d.dr_dt;
        C(n + i, j) = d.dr_ds;
        C(n + i, n + j) = d.d2r_dsdt;
      }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    ck.require(hi > 0.0 && lo >= -1e-12 * hi,
               "grid n=" + std::to_string(n) + " spectrum dips to " + fmt(lo));
    try {
      const GPGridSample s = sample_gp_cholesky(grid, SeedSpec{ms, n});
      ck.require(s.jitter_used <= 1e-9,
                 "grid n=" + std::to_string(n) + " needed jitter " + fmt(s.jitter_used));
    } catch (const std::exception&) {
      ck.require(false, "grid n=" + std::to_string(n) + " factorization failed");
    }
  }
  return ck.result();
}

SuiteResult suite_sampler_agreement(const ExperimentConfig& cfg) {
  Check ck;
  const std::uint64_t ms = suite_master(cfg.master_seed, 8);
  const std::size_t n = 10000;
  const std::vector<double> grid{0.5};
  double c_sum = 0.0, c_sq = 0.0, s_sum = 0.0, s_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const GPGridSample g = sample_gp_cholesky(grid, SeedSpec{ms, 2 * i});
    c_sum += g.g_values[0];
    c_sq += g.g_values[0] * g.g_values[0];
    const TrigPolynomial sur = sample_gp_surrogate(500, SeedSpec{ms, 2 * i + 1});
    const double v = sur.value(0.5, 0);
    s_sum += v;
    s_sq += v * v;
  }
  const double nd = static_cast<double>(n);
  const double c_mean = c_sum / nd, s_mean = s_sum / nd;
  const double c_var = c_sq / nd - c_mean * c_mean;
  const double s_var = s_sq / nd - s_mean * s_mean;
  const double se_mean = std::sqrt(2.0 / nd);           // combined SE of the mean difference
  const double se_var = 2.0 * std::sqrt(2.0) / std::sqrt(nd);  // combined SE of the variance difference
  ck.require(std::fabs(c_mean - s_mean) <= 4.0 * se_mean,
             "mean of G(0.5): cholesky " + fmt(c_mean) + " vs surrogate " + fmt(s_mean));
  ck.require(std::fabs(c_var - s_var) <= 4.0 * se_var,
             "variance of G(0.5): cholesky " + fmt(c_var) + " vs surrogate " + fmt(s_var));
  ck.require(std::fabs(c_var - 1.0) <= 4.0 * std::sqrt(2.0 / nd), "cholesky variance vs 1");
  return ck.result();
}

SuiteResult suite_mollifier(const ExperimentConfig& cfg) {
  Check ck;
  const std::uint64_t ms = suite_master(cfg.master_seed, 9);
  Stream ts(SeedSpec{ms, 0});
  for (int i = 0; i < 1000000; ++i) {
    const KacParams p{0.01 + ts.uniform01(), 0.01 + ts.uniform01()};
    const double span = 2.0 * (p.delta + p.eps);
    const double u = (ts.uniform01() - 0.5) * 2.0 * span;
    const double v = (ts.uniform01() - 0.5) * 2.0 * span;
    const double hu = h_delta_eps(u, p);
    const double hv = h_delta_eps(v, p);
    bool ok = hu >= 0.0 && hu <= 1.0;
    ok = ok && !(std::fabs(u) <= p.delta && hu != 1.0);
    ok = ok && !(std::fabs(u) >= p.delta + p.eps && hu != 0.0);
    ok = ok && std::fabs(hu - hv) <= std::fabs(u - v) / p.eps + 1e-12;
    const double x = std::fabs(u), y = std::fabs(v);
    const double bu = h_bar_delta_eps(x, p);
    const double bv = h_bar_delta_eps(y, p);
    ok = ok && bu >= 0.0 && bu <= 1.0;
    ok = ok && !(x <= p.delta && bu != 1.0);
    ok = ok && !(x >= p.delta + p.eps && bu != 0.0);
    ok = ok && std::fabs(bu - bv) <= std::fabs(x - y) / p.eps + 1e-12;
    ok = ok && !(x <= y && bu < bv - 1e-15);  // decreasing
    if (!ok) ck.require(false, "mollifier violation at u=" + fmt(u) + " v=" + fmt(v));
  }
  return ck.result();
}

SuiteResult suite_kac_sandwich(const ExperimentConfig& cfg) {
  Check ck;
  const std::uint64_t ms = suite_master(cfg.master_seed, 10);
  Stream ts(SeedSpec{ms, 50});
  const Interval iv{0.0, 1.0};
  for (int i = 0; i < 50; ++i) {
    const std::size_t m = 2 + static_cast<std::size_t>(ts.uniform01() * 11.0);
    const TrigPolynomial p = random_poly(CoefficientLaw::gaussian, m, ms, i);
    const double gap = min_gap_A(p, iv);
    double delta = 0.4 * gap, eps = 0.4 * gap;
    if (cfg.delta && cfg.eps) {
      delta = *cfg.delta;
      eps = *cfg.eps;
    }
    if (!(delta > 0.0) || !(eps > 0.0)) continue;
    const double lo = kac_phi_delta(p, iv, delta);
    const double mid = kac_phi_delta_eps(p, iv, KacParams{delta, eps});
    const double hi = kac_phi_delta(p, iv, delta + eps);
    // Phi_{delta,eps} carries a 1/(2 delta) normalization while Phi_{delta+eps}
    // carries 1/(2(delta+eps)); compare the un-normalized integrals.
    ck.require(lo * 2.0 * delta <= mid * 2.0 * delta + 1e-8, "lower sandwich, poly " + std::to_string(i));
    ck.require(mid * 2.0 * delta <= hi * 2.0 * (delta + eps) + 1e-8,
               "upper sandwich, poly " + std::to_string(i));
  }
  return ck.result();
}

SuiteResult suite_counting_equality(const ExperimentConfig& cfg) {
  Check ck;
  const std::uint64_t ms = suite_master(cfg.master_seed, 11);
  Stream ts(SeedSpec{ms, 123});
  const Interval iv{0.0, 1.0};
  for (int i = 0; i < 500; ++i) {
    const std::size_t m = 2 + static_cast<std::size_t>(ts.uniform01() * 19.0);
    const TrigPolynomial p = random_poly(CoefficientLaw::gaussian, m, ms, i);
    CountResult res;
    try {
      res = count_zeros(p, iv);
    } catch (const hypothesis_violation&) {
      continue;  // grazing configuration; measure zero, skip
    }
    if (!res.certified) {
      ck.require(false, "uncertified count, poly " + std::to_string(i));
      continue;
    }
    const double delta = 0.9 * res.min_abs_at_roots_gap;
    if (!(delta > 0.0)) continue;
    const double phi = kac_phi_delta(p, iv, delta);
    ck.require(std::fabs(phi - res.count) <= 1e-6,
               "kac integral vs count, poly " + std::to_string(i) + ": " + fmt(phi) + " vs " +
                   std::to_string(res.count));
    const RootLocations roots = locate_roots(p, iv);
    ck.require(roots.certified && roots.roots.size() == static_cast<std::size_t>(res.count),
               "locate_roots count mismatch, poly " + std::to_string(i));
  }
  return ck.result();
}

SuiteResult suite_count_refinement(const ExperimentConfig& cfg) {
  Check ck;
  const std::uint64_t ms = suite_master(cfg.master_seed, 12);
  Stream ts(SeedSpec{ms, 9});
  const Interval iv{0.0, 1.0};
  for (int i = 0; i < 50; ++i) {
    const std::size_t m = 2 + static_cast<std::size_t>(ts.uniform01() * 15.0);
    const TrigPolynomial p = random_poly(CoefficientLaw::uniform_scaled, m, ms, i);
    CountResult coarse, fine;
    try {
      coarse = count_zeros(p, iv, 1e-6);
      fine = count_zeros(p, iv, 1e-7);
    } catch (const hypothesis_violation&) {
      continue;
    }
    if (coarse.certified && fine.certified)
      ck.require(coarse.count == fine.count, "refinement changed the count, poly " + std::to_string(i));

    // Scale equivariance: counting and the Kac integral are invariant under
    // f -> c f (with delta -> |c| delta).
    for (double c : {2.0, -3.0}) {
      const ScaledCurve sc(p, c);
      try {
        const CountResult scaled = count_zeros(sc, iv, 1e-6);
        if (coarse.certified && scaled.certified)
          ck.require(scaled.count == coarse.count, "scale equivariance of the count");
        const double delta = 0.5 * coarse.min_abs_at_roots_gap;
        if (delta > 0.0 && coarse.certified) {
          const double base = kac_phi_delta(p, iv, delta);
          const double scaled_phi = kac_phi_delta(sc, iv, std::fabs(c) * delta);
          ck.require(std::fabs(base - scaled_phi) <= 1e-8, "scale equivariance of the Kac integral");
        }
      } catch (const hypothesis_violation&) {
      }
    }
  }
  return ck.result();
}

SuiteResult suite_metric_axioms(const ExperimentConfig& cfg) {
  Check ck;
  const std::uint64_t ms = suite_master(cfg.master_seed, 13);
  Stream ts(SeedSpec{ms, 0});
  auto random_sample = [&ts](const char* label) {
    ZeroCountSample s;
    s.meta.label = label;
    const std::size_t n = 5 + static_cast<std::size_t>(ts.uniform01() * 56.0);
    for (std::size_t i = 0; i < n; ++i)
      s.counts.push_back(static_cast<int>(ts.uniform01() * 7.0));
    return s;
  };
  for (int i = 0; i < 100; ++i) {
    const ZeroCountSample a = random_sample("a");
    const ZeroCountSample b = random_sample("b");
    const ZeroCountSample c = random_sample("c");
    const double wab = wasserstein1(a, b), wba = wasserstein1(b, a);
    const double fab = fortet_mourier(a, b), fba = fortet_mourier(b, a);
    ck.require(wab == wba, "W1 symmetry");
    ck.require(fab == fba, "FM symmetry");
    ck.require(wasserstein1(a, a) == 0.0 && fortet_mourier(a, a) == 0.0, "identity");
    ck.require(wab <= wasserstein1(a, c) + wasserstein1(c, b) + 1e-9, "W1 triangle");
    ck.require(fab <= fortet_mourier(a, c) + fortet_mourier(c, b) + 1e-9, "FM triangle");
    ck.require(fab <= std::min(2.0, wab) + 1e-9, "FM <= min(2, W1)");
  }
  auto point_mass = [](int k) {
    ZeroCountSample s;
    s.counts.assign(4, k);
    return s;
  };
  ck.require(std::fabs(fortet_mourier(point_mass(0), point_mass(1)) - 1.0) <= 1e-12,
             "FM(d0,d1) = 1");
  ck.require(std::fabs(fortet_mourier(point_mass(0), point_mass(3)) - 2.0) <= 1e-12,
             "FM(d0,d3) = 2");
  ZeroCountSample p02, p11;
  p02.counts = {0, 2};
  p11.counts = {1, 1};
  ck.require(std::fabs(wasserstein1(p02, p11) - 1.0) <= 1e-12, "W1({0,2},{1,1}) = 1");
  return ck.result();
}

SuiteResult suite_kac_rice_formulas(const ExperimentConfig&) {
  Check ck;
  for (std::size_t m : {2u, 10u, 100u, 1000u}) {
    const double md = static_cast<double>(m);
    const double expect = std::sqrt((2.0 * md - 1.0) * (md - 1.0) / 6.0) / md;
    ck.require(std::fabs(kac_rice_mean(gamma_m(m), 1.0) - expect) <= 1e-12,
               "finite-m mean formula, m=" + std::to_string(m));
  }
  ck.require(std::fabs(kac_rice_mean(limit_cov_pair(), 1.0) - 1.0 / std::sqrt(3.0)) <= 1e-15,
             "limit mean 1/sqrt(3)");
  ck.require(std::fabs(kac_rice_mean(gamma_m(100), 1.0) - 0.5730183243143276) <= 1e-12,
             "frozen m=100 constant");
  ck.require(std::fabs(gamma_m(1000000).var_deriv - kPi * kPi / 3.0) <= 1e-5 * kPi * kPi,
             "gamma_m approaches the limit pair");
  ck.require(kac_rice_mean(limit_cov_pair(), 0.5) == 0.5 * kac_rice_mean(limit_cov_pair(), 1.0),
             "length linearity");
  return ck.result();
}

SuiteResult suite_theta_identity(const ExperimentConfig& cfg) {
  Check ck;
  const std::uint64_t ms = suite_master(cfg.master_seed, 14);
  Stream ts(SeedSpec{ms, 777});
  for (std::size_t m : {2u, 8u, 64u}) {
    for (int rep = 0; rep < 20; ++rep) {
      const CoefficientPairs c = sample_pairs(CoefficientLaw::gaussian, m, SeedSpec{ms, 100 * m + rep});
      const TrigPolynomial p(c);
      const PathPL s = build_partial_sum(c);
      double l1 = 0.0;
      for (std::size_t r = 0; r < m; ++r) l1 += std::fabs(c.x[r]) + std::fabs(c.y[r]);
      const double tol = 1e-10 * (1.0 + l1 / std::sqrt(static_cast<double>(m)));
      for (int i = 0; i < 50; ++i) {
        const double t = ts.uniform01();
        ck.require(std::fabs(theta_m(s, m, t) - p.value(t, 0)) <= tol,
                   "identity at m=" + std::to_string(m));
      }
    }
  }
  // Annihilation of constants and linearity.
  std::vector<double> knots{0.0, 0.5, 1.0};
  const PathPL constant(knots, {std::complex<double>(2.0, -1.0), std::complex<double>(2.0, -1.0),
                                std::complex<double>(2.0, -1.0)});
  PathPL f(knots, {std::complex<double>(0.0, 0.0), std::complex<double>(1.0, 0.5),
                   std::complex<double>(-0.5, 1.0)});
  PathPL g(knots, {std::complex<double>(1.0, 1.0), std::complex<double>(-1.0, 0.25),
                   std::complex<double>(0.5, -0.75)});
  for (double t : {0.0, 0.3, 0.77, 1.0}) {
    ck.require(std::fabs(theta(constant, t)) <= 1e-12, "theta annihilates constants");
    ck.require(std::fabs(theta_m(constant, 2, t)) <= 1e-12, "theta_m annihilates constants");
    std::vector<std::complex<double>> combo(3);
    for (int i = 0; i < 3; ++i) combo[i] = 2.5 * f.z[i] - 1.75 * g.z[i];
    const PathPL h(knots, combo);
    ck.require(std::fabs(theta_m(h, 2, t) - (2.5 * theta_m(f, 2, t) - 1.75 * theta_m(g, 2, t))) <=
                   1e-12,
               "theta_m linearity");
    ck.require(std::fabs(theta(h, t) - (2.5 * theta(f, t) - 1.75 * theta(g, t))) <= 1e-12,
               "theta linearity");
  }
  // Boundedness with the calibrated constant (sup over a t grid).
  const double kBoundC = 4.0;
  Stream bs(SeedSpec{ms, 31});
  for (std::size_t m : {2u, 16u, 128u, 512u}) {
    std::vector<double> ks(m + 1);
    std::vector<std::complex<double>> vs(m + 1);
    double supf = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
      ks[k] = static_cast<double>(k) / static_cast<double>(m);
      vs[k] = std::complex<double>(2.0 * bs.uniform01() - 1.0, 2.0 * bs.uniform01() - 1.0);
      supf = std::max(supf, std::abs(vs[k]));
    }
    const PathPL path(ks, vs);
    for (int i = 0; i <= 64; ++i) {
      const double t = static_cast<double>(i) / 64.0;
      ck.require(std::fabs(theta_m(path, m, t)) <= kBoundC * supf,
                 "theta_m bounded by C sup|f| at m=" + std::to_string(m));
    }
  }
  return ck.result();
}

SuiteResult suite_theta_convergence(const ExperimentConfig&) {
  Check ck;
  auto smooth = [](double u) { return std::complex<double>(u, u * u); };
  std::vector<double> errs;
  for (std::size_t m : {8u, 16u, 32u, 64u, 128u, 256u}) {
    std::vector<double> ks(m + 1);
    std::vector<std::complex<double>> vs(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
      ks[k] = static_cast<double>(k) / static_cast<double>(m);
      vs[k] = smooth(ks[k]);
    }
    const PathPL path(ks, vs);
    double sup = 0.0;
    for (int i = 0; i < 257; ++i) {
      const double t = static_cast<double>(i) / 256.0;
      sup = std::max(sup, std::fabs(theta_m(path, m, t) - theta(smooth, t)));
    }
    errs.push_back(sup);
  }
  for (std::size_t i = 1; i < errs.size(); ++i)
    ck.require(errs[i] <= 1.1 * errs[i - 1], "error sequence nonincreasing (10% slack)");
  ck.require(errs.back() < errs.front() / 4.0, "final error < initial/4");
  return ck.result();
}

SuiteResult suite_engine_determinism(const ExperimentConfig& cfg) {
  Check ck;
  const std::uint64_t ms = suite_master(cfg.master_seed, 15);
  CountJob job;
  job.law = CoefficientLaw::gaussian;
  job.m = 25;
  job.n_reps = 400;
  job.master_seed = ms;
  const ZeroCountSample serial = run_count_job_serial(job);
  const ZeroCountSample par4 = run_count_job(job, 4);
  const ZeroCountSample par1 = run_count_job(job, 1);
  const ZeroCountSample again = run_count_job(job, 4);
  ck.require(serial.counts == par4.counts, "serial vs 4-thread counts");
  ck.require(serial.counts == par1.counts, "serial vs 1-thread counts");
  ck.require(par4.counts == again.counts, "repeat run identical");
  for (std::uint64_t j : {0ull, 17ull, 399ull}) {
    const ReplicationOutcome one = run_one_replication(job, j);
    ck.require(one.certified, "single replication certified");
  }
  // Mean-count sanity against the closed-form expectation.
  double sum = 0.0;
  for (int c : serial.counts) sum += c;
  const double mean = sum / static_cast<double>(serial.counts.size());
  double ss = 0.0;
  for (int c : serial.counts) ss += (c - mean) * (c - mean);
  const double se = std::sqrt(ss / (serial.counts.size() - 1.0) / serial.counts.size());
  const double expect = kac_rice_mean(gamma_m(job.m), 1.0);
  ck.require(std::fabs(mean - expect) <= 5.0 * se,
             "mean count " + fmt(mean) + " vs expectation " + fmt(expect));
  return ck.result();
}

SuiteResult suite_csv_round_trip(const ExperimentConfig&) {
  Check ck;
  ResultTable t;
  ResultRow r;
  r.m = 128;
  r.law = "rademacher";
  r.metric = "W1";
  r.value = 0.12345678901234567;
  r.ci_low = 0.1;
  r.ci_high = 1.0 / 3.0;
  r.n_reps = 5000;
  r.mean_count = 0.5773502691896258;
  r.se_count = 1e-300;
  r.wall_ms = 1234.5;
  t.rows.push_back(r);
  r.m = 8;
  r.law = "gaussian";
  r.metric = "count";
  r.value = std::numeric_limits<double>::quiet_NaN();
  r.mean_count = -0.0;
  t.rows.push_back(r);
  const auto path =
      (std::filesystem::temp_directory_path() / "rtpzero-validate-roundtrip.csv").string();
  write_csv(t, path);
  const ResultTable back = read_csv(path);
  std::filesystem::remove(path);
  ck.require(back.rows.size() == t.rows.size(), "row count");
  for (std::size_t i = 0; i < t.rows.size() && i < back.rows.size(); ++i) {
    const ResultRow& a = t.rows[i];
    const ResultRow& b = back.rows[i];
    auto same = [](double x, double y) {
      return (std::isnan(x) && std::isnan(y)) || x == y;
    };
    ck.require(a.m == b.m && a.law == b.law && a.metric == b.metric && same(a.value, b.value) &&
                   same(a.ci_low, b.ci_low) && same(a.ci_high, b.ci_high) &&
                   a.n_reps == b.n_reps && same(a.mean_count, b.mean_count) &&
                   same(a.se_count, b.se_count) && same(a.wall_ms, b.wall_ms),
               "row " + std::to_string(i) + " not reproduced");
  }
  return ck.result();
}

struct Suite {
  const char* name;
  SuiteResult (*fn)(const ExperimentConfig&);
};

}  // namespace

bool run_validate(const ExperimentConfig& cfg, std::ostream& report,
                  const std::string& inject_bug) {
  if (!inject_bug.empty() && inject_bug != "tampered-sinc")
    throw std::invalid_argument("run_validate: unknown fault '" + inject_bug + "'");
  struct TamperGuard {
    explicit TamperGuard(bool on) { testing::set_sinc_tamper(on); }
    ~TamperGuard() { testing::set_sinc_tamper(false); }
  } guard(inject_bug == "tampered-sinc");

  static const Suite suites[] = {
      {"coefficients-moments", suite_coefficients_moments},
      {"coefficients-determinism", suite_coefficients_determinism},
      {"stream-independence", suite_stream_independence},
      {"eval-agreement", suite_eval_agreement},
      {"deriv-bound-domination", suite_deriv_bound_domination},
      {"covariance-derivatives", suite_covariance_derivatives},
      {"covariance-psd", suite_covariance_psd},
      {"sampler-agreement", suite_sampler_agreement},
      {"mollifier-suite", suite_mollifier},
      {"kac-sandwich", suite_kac_sandwich},
      {"counting-equality", suite_counting_equality},
      {"count-refinement", suite_count_refinement},
      {"metric-axioms", suite_metric_axioms},
      {"kac-rice-formulas", suite_kac_rice_formulas},
      {"theta-identity", suite_theta_identity},
      {"theta-convergence", suite_theta_convergence},
      {"engine-determinism", suite_engine_determinism},
      {"csv-round-trip", suite_csv_round_trip},
  };

  report << "validation report (master seed " << cfg.master_seed << ")\n";
  if (!inject_bug.empty()) report << "fault injected: " << inject_bug << "\n";
  report << "-----------------------------  ------\n";
  std::size_t n_pass = 0;
  for (const Suite& s : suites) {
    SuiteResult r;
    try {
      r = s.fn(cfg);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    n_pass += r.pass ? 1 : 0;
    report << s.name;
    for (std::size_t i = std::string(s.name).size(); i < 31; ++i) report << ' ';
    report << (r.pass ? "PASS" : "FAIL");
    if (!r.pass && !r.detail.empty()) report << "  [" << r.detail << "]";
    report << "\n";
  }
  report << "-----------------------------  ------\n";
  const std::size_t total = sizeof(suites) / sizeof(suites[0]);
  report << n_pass << "/" << total << " suites passed\n";
  return n_pass == total;
}

}  // namespace rtpzero
