#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rtpzero/metrics.hpp"
#include "rtpzero/rng.hpp"

using namespace rtpzero;

namespace {

ZeroCountSample make_sample(std::vector<int> counts) {
  ZeroCountSample s;
  s.counts = std::move(counts);
  s.meta.label = "test";
  return s;
}

// Independent check for W1 on integer supports: the area between the two
// empirical CDFs, summed over unit steps.
double w1_cdf_oracle(const std::vector<int>& a, const std::vector<int>& b) {
  const int hi = std::max(*std::max_element(a.begin(), a.end()),
                          *std::max_element(b.begin(), b.end()));
  double total = 0.0;
  for (int k = 0; k < hi; ++k) {
    const double fa =
        static_cast<double>(std::count_if(a.begin(), a.end(), [k](int c) { return c <= k; })) /
        static_cast<double>(a.size());
    const double fb =
        static_cast<double>(std::count_if(b.begin(), b.end(), [k](int c) { return c <= k; })) /
        static_cast<double>(b.size());
    total += std::fabs(fa - fb);
  }
  return total;
}

// Independent check for the bounded-Lipschitz distance on a 3-point support
// {x0 < x1 < x2}: maximize c.f over |f_i| <= 1 and |f_{i+1} - f_i| <= gap_i
// by enumerating the vertices of the feasible polytope (every triple of
// active constraints, solved by Cramer's rule).
double fm_vertex_oracle(const std::array<double, 3>& x, const std::array<double, 3>& c) {
  const double g0 = x[1] - x[0];
  const double g1 = x[2] - x[1];
  // Constraint rows A.f <= r.
  std::vector<std::array<double, 4>> con = {
      {1, 0, 0, 1},   {-1, 0, 0, 1},  {0, 1, 0, 1},   {0, -1, 0, 1},  {0, 0, 1, 1},
      {0, 0, -1, 1},  {-1, 1, 0, g0}, {1, -1, 0, g0}, {0, -1, 1, g1}, {0, 1, -1, g1}};
  double best = 0.0;
  for (std::size_t i = 0; i < con.size(); ++i)
    for (std::size_t j = i + 1; j < con.size(); ++j)
      for (std::size_t k = j + 1; k < con.size(); ++k) {
        const auto& A = con[i];
        const auto& B = con[j];
        const auto& C = con[k];
        const double det = A[0] * (B[1] * C[2] - B[2] * C[1]) -
                           A[1] * (B[0] * C[2] - B[2] * C[0]) +
                           A[2] * (B[0] * C[1] - B[1] * C[0]);
        if (std::fabs(det) < 1e-9) continue;
        auto det3 = [](std::array<double, 3> r0, std::array<double, 3> r1,
                       std::array<double, 3> r2) {
          return r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) -
                 r0[1] * (r1[0] * r2[2] - r1[2] * r2[0]) +
                 r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
        };
        const double f0 = det3({A[3], A[1], A[2]}, {B[3], B[1], B[2]}, {C[3], C[1], C[2]}) / det;
        const double f1 = det3({A[0], A[3], A[2]}, {B[0], B[3], B[2]}, {C[0], C[3], C[2]}) / det;
        const double f2 = det3({A[0], A[1], A[3]}, {B[0], B[1], B[3]}, {C[0], C[1], C[3]}) / det;
        bool feasible = true;
        for (const auto& row : con)
          if (row[0] * f0 + row[1] * f1 + row[2] * f2 > row[3] + 1e-7) feasible = false;
        if (!feasible) continue;
        best = std::max(best, c[0] * f0 + c[1] * f1 + c[2] * f2);
      }
  return best;
}

int poisson_knuth(Stream& rng, double lambda) {
  const double limit = std::exp(-lambda);
  int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= rng.uniform01();
  } while (p > limit);
  return k - 1;
}

}  // namespace

TEST_CASE("metric names round-trip") {
  CHECK(metric_name(Metric::W1) == std::string("W1"));
  CHECK(metric_name(Metric::FM) == std::string("FM"));
  CHECK(metric_from_name("W1") == Metric::W1);
  CHECK(metric_from_name("FM") == Metric::FM);
  CHECK_THROWS_AS(metric_from_name("L2"), std::invalid_argument);
}

TEST_CASE("wasserstein closed forms") {
  CHECK(wasserstein1(make_sample({0, 0}), make_sample({1, 1})) == 1.0);
  CHECK(wasserstein1(make_sample({0, 2}), make_sample({1, 1})) == 1.0);
  CHECK(wasserstein1(make_sample({0}), make_sample({3})) == 3.0);
  CHECK(wasserstein1(make_sample({0}), make_sample({0, 1})) == doctest::Approx(0.5));
  CHECK(wasserstein1(make_sample({2, 5, 7}), make_sample({2, 5, 7})) == 0.0);
  CHECK_THROWS_AS(wasserstein1(make_sample({}), make_sample({1})), std::invalid_argument);
  CHECK_THROWS_AS(wasserstein1(make_sample({1, -1}), make_sample({1})), std::invalid_argument);
}

TEST_CASE("wasserstein agrees with the CDF-area oracle on unequal sizes") {
  Stream rng(SeedSpec{5000, 0});
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t na = 3 + static_cast<std::size_t>(rng.uniform01() * 50.0);
    const std::size_t nb = 3 + static_cast<std::size_t>(rng.uniform01() * 50.0);
    std::vector<int> a(na), b(nb);
    for (auto& v : a) v = static_cast<int>(rng.uniform01() * 30.0);
    for (auto& v : b) v = static_cast<int>(rng.uniform01() * 30.0);
    const double got = wasserstein1(make_sample(a), make_sample(b));
    CHECK(got == doctest::Approx(w1_cdf_oracle(a, b)).epsilon(1e-12));
    CHECK(got == wasserstein1(make_sample(b), make_sample(a)));
  }
}

TEST_CASE("wasserstein satisfies the triangle inequality") {
  Stream rng(SeedSpec{5001, 0});
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<int> a(20), b(31), c(17);
    for (auto& v : a) v = static_cast<int>(rng.uniform01() * 12.0);
    for (auto& v : b) v = static_cast<int>(rng.uniform01() * 12.0);
    for (auto& v : c) v = static_cast<int>(rng.uniform01() * 12.0);
    const ZeroCountSample sa = make_sample(a), sb = make_sample(b), sc = make_sample(c);
    CHECK(wasserstein1(sa, sc) <= wasserstein1(sa, sb) + wasserstein1(sb, sc) + 1e-9);
  }
}

TEST_CASE("bounded-Lipschitz closed forms") {
  // Point masses one apart: optimal witness is a unit step, distance 1.
  CHECK(fortet_mourier(make_sample({0, 0}), make_sample({1, 1})) == doctest::Approx(1.0));
  // Far-apart point masses saturate the |f| <= 1 box at 2, unlike W1 = 3.
  CHECK(fortet_mourier(make_sample({0}), make_sample({3})) == doctest::Approx(2.0));
  CHECK(fortet_mourier(make_sample({0, 2}), make_sample({1, 1})) == doctest::Approx(1.0));
  CHECK(fortet_mourier(make_sample({4, 4, 4}), make_sample({4, 4})) == doctest::Approx(0.0));
}

TEST_CASE("bounded-Lipschitz two-point law closed form") {
  // Masses p and q at height k over a common base point: distance
  // |p - q| * min(2, k).
  for (int k : {1, 2, 3, 5}) {
    for (int ja : {0, 2, 7, 10}) {
      for (int jb : {0, 4, 10}) {
        std::vector<int> a(10, 0), b(10, 0);
        for (int i = 0; i < ja; ++i) a[static_cast<std::size_t>(i)] = k;
        for (int i = 0; i < jb; ++i) b[static_cast<std::size_t>(i)] = k;
        const double expect = std::fabs(ja - jb) / 10.0 * std::min(2.0, static_cast<double>(k));
        CHECK(fortet_mourier(make_sample(a), make_sample(b)) ==
              doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("bounded-Lipschitz agrees with vertex enumeration on 3-point supports") {
  Stream rng(SeedSpec{5002, 0});
  for (const auto& support : {std::array<int, 3>{0, 1, 2}, std::array<int, 3>{0, 2, 7}}) {
    for (int rep = 0; rep < 40; ++rep) {
      const std::size_t na = 3 + static_cast<std::size_t>(rng.uniform01() * 20.0);
      const std::size_t nb = 3 + static_cast<std::size_t>(rng.uniform01() * 20.0);
      std::vector<int> a(na), b(nb);
      for (auto& v : a) v = support[static_cast<std::size_t>(rng.uniform01() * 3.0)];
      for (auto& v : b) v = support[static_cast<std::size_t>(rng.uniform01() * 3.0)];
      // Guarantee the full support shows up so the oracle always sees 3 points.
      a[0] = support[0];
      a[1] = support[1];
      a[2] = support[2];
      std::array<double, 3> c{};
      for (std::size_t i = 0; i < 3; ++i) {
        const double ma = static_cast<double>(std::count(a.begin(), a.end(), support[i])) /
                          static_cast<double>(na);
        const double mb = static_cast<double>(std::count(b.begin(), b.end(), support[i])) /
                          static_cast<double>(nb);
        c[i] = ma - mb;
      }
      const std::array<double, 3> x{static_cast<double>(support[0]),
                                    static_cast<double>(support[1]),
                                    static_cast<double>(support[2])};
      const double got = fortet_mourier(make_sample(a), make_sample(b));
      CHECK(got == doctest::Approx(fm_vertex_oracle(x, c)).epsilon(1e-9));
    }
  }
}

TEST_CASE("bounded-Lipschitz is dominated by min(2, W1) and is symmetric") {
  Stream rng(SeedSpec{5003, 0});
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t na = 2 + static_cast<std::size_t>(rng.uniform01() * 60.0);
    const std::size_t nb = 2 + static_cast<std::size_t>(rng.uniform01() * 60.0);
    std::vector<int> a(na), b(nb);
    for (auto& v : a) v = static_cast<int>(rng.uniform01() * 13.0);
    for (auto& v : b) v = static_cast<int>(rng.uniform01() * 13.0);
    const ZeroCountSample sa = make_sample(a), sb = make_sample(b);
    const double fm = fortet_mourier(sa, sb);
    CHECK(fm >= 0.0);
    CHECK(fm <= std::min(2.0, wasserstein1(sa, sb)) + 1e-9);
    CHECK(fm == doctest::Approx(fortet_mourier(sb, sa)).epsilon(1e-12));
  }
}

TEST_CASE("bootstrap input validation") {
  const ZeroCountSample a = make_sample({0, 1, 2});
  const ZeroCountSample b = make_sample({1, 1, 3});
  CHECK_THROWS_AS(bootstrap_ci(a, b, Metric::W1, 99, 0.95, SeedSpec{1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_ci(a, b, Metric::W1, 200, 0.0, SeedSpec{1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_ci(a, b, Metric::W1, 200, 1.0, SeedSpec{1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_ci(make_sample({}), b, Metric::W1, 200, 0.95, SeedSpec{1, 0}),
                  std::invalid_argument);
}

TEST_CASE("bootstrap degenerate cases pin the interval") {
  // Identical constant samples: every resample gives distance 0.
  const ZeroCountSample c2 = make_sample(std::vector<int>(50, 2));
  DistanceEstimate zero = bootstrap_ci(c2, c2, Metric::W1, 200, 0.95, SeedSpec{7, 0});
  CHECK(zero.value == 0.0);
  CHECK(zero.ci_low == 0.0);
  CHECK(zero.ci_high == 0.0);

  // Point masses one apart: every resample reproduces the same two point
  // masses, so the interval has zero width at 1.
  const ZeroCountSample d0 = make_sample(std::vector<int>(50, 0));
  const ZeroCountSample d1 = make_sample(std::vector<int>(50, 1));
  for (Metric m : {Metric::W1, Metric::FM}) {
    DistanceEstimate one = bootstrap_ci(d0, d1, m, 200, 0.95, SeedSpec{7, 1});
    CHECK(one.value == doctest::Approx(1.0));
    CHECK(one.ci_low == doctest::Approx(1.0));
    CHECK(one.ci_high == doctest::Approx(1.0));
    CHECK(one.metric == m);
    CHECK(one.bootstrap_B == 200);
  }
}

TEST_CASE("bootstrap is deterministic in the seed and fills replicates") {
  Stream rng(SeedSpec{5004, 0});
  std::vector<int> a(120), b(150);
  for (auto& v : a) v = static_cast<int>(rng.uniform01() * 9.0);
  for (auto& v : b) v = static_cast<int>(rng.uniform01() * 9.0);
  const ZeroCountSample sa = make_sample(a), sb = make_sample(b);

  std::vector<double> rep1, rep2, rep3;
  const DistanceEstimate e1 = bootstrap_ci(sa, sb, Metric::FM, 250, 0.9, SeedSpec{11, 4}, &rep1);
  const DistanceEstimate e2 = bootstrap_ci(sa, sb, Metric::FM, 250, 0.9, SeedSpec{11, 4}, &rep2);
  const DistanceEstimate e3 = bootstrap_ci(sa, sb, Metric::FM, 250, 0.9, SeedSpec{11, 5}, &rep3);

  CHECK(rep1 == rep2);
  CHECK(e1.value == e2.value);
  CHECK(e1.ci_low == e2.ci_low);
  CHECK(e1.ci_high == e2.ci_high);
  CHECK(rep1 != rep3);

  REQUIRE(rep1.size() == 250);
  const double lo = *std::min_element(rep1.begin(), rep1.end());
  const double hi = *std::max_element(rep1.begin(), rep1.end());
  CHECK(e1.ci_low >= lo - 1e-12);
  CHECK(e1.ci_high <= hi + 1e-12);
  CHECK(e1.ci_low <= e1.value);
  CHECK(e1.value <= e1.ci_high);
  CHECK(e1.value == fortet_mourier(sa, sb));
}

TEST_CASE("bootstrap interval covers a known distance at roughly its level") {
  // Poisson(1) stochastically dominates Poisson(1.5), so the true W1 between
  // the laws is the mean gap 0.5.  Coverage of a 95% interval over 50
  // independent trials should not fall far below the nominal level.
  int covered = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Stream rng(SeedSpec{5100, static_cast<std::uint64_t>(trial)});
    std::vector<int> a(2000), b(2000);
    for (auto& v : a) v = poisson_knuth(rng, 1.0);
    for (auto& v : b) v = poisson_knuth(rng, 1.5);
    const DistanceEstimate est =
        bootstrap_ci(make_sample(a), make_sample(b), Metric::W1, 200, 0.95,
                     SeedSpec{5200, static_cast<std::uint64_t>(trial)});
    if (est.ci_low <= 0.5 && 0.5 <= est.ci_high) ++covered;
  }
  CHECK(covered >= 45);
}
