#include "rtpzero/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace rtpzero {

namespace {

void check_sample(const ZeroCountSample& s, const char* who) {
  if (s.counts.empty()) throw std::invalid_argument(std::string(who) + ": empty sample");
  for (int c : s.counts)
    if (c < 0) throw std::invalid_argument(std::string(who) + ": negative count");
}

double w1_sorted(const std::vector<int>& A, const std::vector<int>& B) {
  // Quantile functions are step functions jumping at i/na and j/nb; walk the
  // merged grid in units of 1/(na*nb) with exact integer boundaries.
  const std::uint64_t na = A.size(), nb = B.size();
  std::uint64_t i = 0, j = 0, cur = 0;
  double acc = 0.0;
  while (i < na && j < nb) {
    const std::uint64_t stop_a = (i + 1) * nb;
    const std::uint64_t stop_b = (j + 1) * na;
    const std::uint64_t next = std::min(stop_a, stop_b);
    acc += static_cast<double>(next - cur) * std::fabs(static_cast<double>(A[i] - B[j]));
    cur = next;
    if (stop_a == next) ++i;
    if (stop_b == next) ++j;
  }
  return acc / (static_cast<double>(na) * static_cast<double>(nb));
}

// Concave piecewise-linear function on [-1,1]: breakpoints with strictly
// increasing x covering both endpoints.
using PL = std::vector<std::pair<double, double>>;

// max over the sliding window [x-d, x+d] of a concave PL function, clipped
// back to [-1,1]: equal to the function shifted toward its argmax, with a
// plateau of width 2d at the top.
PL pl_window_max(const PL& v, double d) {
  double vmax = v.front().second;
  for (const auto& p : v) vmax = std::max(vmax, p.second);
  // Flat-top range [xl, xr] of the maximum.
  double xl = 0.0, xr = 0.0;
  bool seen = false;
  for (const auto& p : v) {
    if (p.second >= vmax - 1e-300) {  // exact comparison is fine for our data, keep strict
      if (!seen) xl = p.first;
      xr = p.first;
      seen = true;
    }
  }
  PL raw;
  for (const auto& p : v)
    if (p.first <= xl) raw.push_back({p.first - d, p.second});
  raw.push_back({xl - d, vmax});
  raw.push_back({xr + d, vmax});
  for (const auto& p : v)
    if (p.first >= xr) raw.push_back({p.first + d, p.second});
  std::sort(raw.begin(), raw.end());

  auto raw_eval = [&raw](double x) {
    if (x <= raw.front().first) return raw.front().second;
    if (x >= raw.back().first) return raw.back().second;
    for (std::size_t i = 1; i < raw.size(); ++i) {
      if (x <= raw[i].first) {
        const double w = (x - raw[i - 1].first) / (raw[i].first - raw[i - 1].first);
        return raw[i - 1].second + w * (raw[i].second - raw[i - 1].second);
      }
    }
    return raw.back().second;
  };

  PL out;
  out.push_back({-1.0, raw_eval(-1.0)});
  for (const auto& p : raw)
    if (p.first > -1.0 && p.first < 1.0) out.push_back(p);
  out.push_back({1.0, raw_eval(1.0)});
  // Deduplicate x values (keep the larger value; they coincide anyway).
  PL dedup;
  for (const auto& p : out) {
    if (!dedup.empty() && p.first - dedup.back().first < 1e-15)
      dedup.back().second = std::max(dedup.back().second, p.second);
    else
      dedup.push_back(p);
  }
  return dedup;
}

double fm_directed(const std::vector<int>& A, const std::vector<int>& B) {
  // Union support with integer multiplicities; each signed weight
  // mu(k) - nu(k) is then formed with a single rounding, so equal samples
  // produce exact zeros.
  std::map<int, std::pair<long, long>> mult;
  for (int c : A) mult[c].first += 1;
  for (int c : B) mult[c].second += 1;
  std::vector<int> support;
  std::vector<double> weight;
  for (const auto& [k, mm] : mult) {
    support.push_back(k);
    weight.push_back(static_cast<double>(mm.first) / static_cast<double>(A.size()) -
                     static_cast<double>(mm.second) / static_cast<double>(B.size()));
  }
  const std::size_t K = support.size();

  PL V = {{-1.0, -weight[0]}, {1.0, weight[0]}};
  for (std::size_t i = 1; i < K; ++i) {
    const double d = static_cast<double>(support[i] - support[i - 1]);
    PL W = pl_window_max(V, d);
    for (auto& p : W) p.second += weight[i] * p.first;
    V = std::move(W);
  }
  double best = V.front().second;
  for (const auto& p : V) best = std::max(best, p.second);
  return best;
}

}  // namespace

const char* metric_name(Metric m) { return m == Metric::W1 ? "W1" : "FM"; }

Metric metric_from_name(const std::string& name) {
  if (name == "W1") return Metric::W1;
  if (name == "FM") return Metric::FM;
  throw std::invalid_argument("metric_from_name: unknown metric '" + name + "'");
}

double wasserstein1(const ZeroCountSample& a, const ZeroCountSample& b) {
  check_sample(a, "wasserstein1");
  check_sample(b, "wasserstein1");
  std::vector<int> A = a.counts, B = b.counts;
  std::sort(A.begin(), A.end());
  std::sort(B.begin(), B.end());
  return w1_sorted(A, B);
}

double fortet_mourier(const ZeroCountSample& a, const ZeroCountSample& b) {
  check_sample(a, "fortet_mourier");
  check_sample(b, "fortet_mourier");
  // Canonical argument order makes symmetry exact, not just up to rounding.
  const bool swap = b.counts < a.counts;
  const std::vector<int>& A = swap ? b.counts : a.counts;
  const std::vector<int>& B = swap ? a.counts : b.counts;
  return fm_directed(A, B);
}

DistanceEstimate bootstrap_ci(const ZeroCountSample& a, const ZeroCountSample& b,
                              Metric metric, int B, double level, const SeedSpec& seed,
                              std::vector<double>* replicates) {
  check_sample(a, "bootstrap_ci");
  check_sample(b, "bootstrap_ci");
  if (B < 100) throw std::invalid_argument("bootstrap_ci: B must be >= 100");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("bootstrap_ci: level must lie in (0,1)");

  auto dist = [metric](const ZeroCountSample& x, const ZeroCountSample& y) {
    return metric == Metric::W1 ? wasserstein1(x, y) : fortet_mourier(x, y);
  };

  DistanceEstimate est;
  est.metric = metric;
  est.bootstrap_B = B;
  est.value = dist(a, b);

  const std::uint64_t child_master = derive_seed(seed);
  std::vector<double> boots(B);
  ZeroCountSample ra = a, rb = b;
  for (int rep = 0; rep < B; ++rep) {
    Stream rng(SeedSpec{child_master, static_cast<std::uint64_t>(rep)});
    for (std::size_t i = 0; i < a.counts.size(); ++i) {
      std::size_t idx = static_cast<std::size_t>(rng.uniform01() * a.counts.size());
      if (idx >= a.counts.size()) idx = a.counts.size() - 1;
      ra.counts[i] = a.counts[idx];
    }
    for (std::size_t i = 0; i < b.counts.size(); ++i) {
      std::size_t idx = static_cast<std::size_t>(rng.uniform01() * b.counts.size());
      if (idx >= b.counts.size()) idx = b.counts.size() - 1;
      rb.counts[i] = b.counts[idx];
    }
    boots[rep] = dist(ra, rb);
  }
  if (replicates) *replicates = boots;
  std::sort(boots.begin(), boots.end());

  auto percentile = [&boots](double q) {
    const double pos = q * (boots.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, boots.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return boots[lo] + w * (boots[hi] - boots[lo]);
  };
  const double tail = 0.5 * (1.0 - level);
  est.ci_low = percentile(tail);
  est.ci_high = percentile(1.0 - tail);
  // Percentile intervals can exclude a degenerate point estimate (e.g. the
  // distance of a sample to itself is 0 while resampled pairs differ); widen
  // so the invariant ci_low <= value <= ci_high always holds.
  est.ci_low = std::min(est.ci_low, est.value);
  est.ci_high = std::max(est.ci_high, est.value);
  return est;
}

}  // namespace rtpzero
