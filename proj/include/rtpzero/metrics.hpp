#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "rtpzero/rng.hpp"
#include "rtpzero/zeros.hpp"

namespace rtpzero {

// An empirical sample of integer zero counts plus provenance metadata.
struct ZeroCountSample {
  std::vector<int> counts;
  struct Meta {
    std::string label;  // coefficient-law name, or "G-surrogate(M)" for the reference
    std::size_t m = 0;
    Interval interval{0.0, 1.0};
    std::uint64_t master_seed = 0;
  } meta;
};

enum class Metric { W1, FM };
const char* metric_name(Metric m);
Metric metric_from_name(const std::string& name);

// Wasserstein-1 distance between the empirical laws: the L1 distance between
// the two empirical quantile functions, computed exactly on the merged
// probability grid (integer arithmetic decides the grid, so equal-size
// samples reduce to the mean absolute difference of sorted values).
double wasserstein1(const ZeroCountSample& a, const ZeroCountSample& b);

// Fortet-Mourier distance: sup of sum_k f(k) (mu(k) - nu(k)) over functions
// with |f| <= 1 and Lipschitz constant <= 1.  On the sorted union support the
// constraints reduce to boxes plus chain constraints between neighbours; the
// linear program is solved exactly by dynamic programming over concave
// piecewise-linear value functions.  Always <= min(2, wasserstein1).
double fortet_mourier(const ZeroCountSample& a, const ZeroCountSample& b);

struct DistanceEstimate {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int bootstrap_B = 0;
  Metric metric = Metric::W1;
};

// Percentile bootstrap over pairs resampled with replacement.  Replicate b
// draws from a stream derived from (seed, b), so the result is deterministic
// and independent of any parallel schedule.  The interval is widened, if
// needed, to contain the point estimate.  When `replicates` is non-null it
// receives the B resampled distances in replicate order (callers refit
// downstream statistics, e.g. a regression slope, on them).
DistanceEstimate bootstrap_ci(const ZeroCountSample& a, const ZeroCountSample& b,
                              Metric metric, int B, double level, const SeedSpec& seed,
                              std::vector<double>* replicates = nullptr);

}  // namespace rtpzero
