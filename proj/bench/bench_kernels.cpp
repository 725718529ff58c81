// Micro-benchmarks for the two performance-sensitive kernels:
//   1. polynomial evaluation: rotation-recurrence jet vs per-term libm calls
//   2. the counting engine: OpenMP parallel vs the serial reference
// Both pairs must agree numerically; the benchmark prints the speedups.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rtpzero/coefficients.hpp"
#include "rtpzero/mc.hpp"
#include "rtpzero/rtp.hpp"

using namespace rtpzero;
using clock_type = std::chrono::steady_clock;

namespace {

double ms_since(clock_type::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

void bench_eval(std::size_t m, int n_points) {
  const TrigPolynomial p(sample_pairs(CoefficientLaw::gaussian, m, SeedSpec{2024, m}));
  std::vector<double> ts(n_points);
  for (int i = 0; i < n_points; ++i) ts[i] = static_cast<double>(i) / (n_points - 1);

  double sink = 0.0;
  auto t0 = clock_type::now();
  for (double t : ts) {
    double f, df, ddf;
    p.jet(t, f, df, ddf);
    sink += f + df + ddf;
  }
  const double fast_ms = ms_since(t0);

  t0 = clock_type::now();
  for (double t : ts) sink += p.value_reference(t, 0) + p.value_reference(t, 1) + p.value_reference(t, 2);
  const double ref_ms = ms_since(t0);

  double max_err = 0.0;
  for (double t : ts) {
    double f, df, ddf;
    p.jet(t, f, df, ddf);
    max_err = std::max(max_err, std::abs(f - p.value_reference(t, 0)));
  }
  std::printf("eval  m=%5zu  recurrence %8.2f ms   libm %8.2f ms   speedup %5.2fx   max|diff| %.2e  (sink %.3g)\n",
              m, fast_ms, ref_ms, ref_ms / fast_ms, max_err, sink);
}

void bench_engine(std::size_t m, std::size_t n_reps) {
  CountJob job;
  job.law = CoefficientLaw::gaussian;
  job.m = m;
  job.n_reps = n_reps;
  job.master_seed = 99;

  auto t0 = clock_type::now();
  const ZeroCountSample serial = run_count_job_serial(job);
  const double serial_ms = ms_since(t0);

  t0 = clock_type::now();
  const ZeroCountSample parallel = run_count_job(job, 0);
  const double par_ms = ms_since(t0);

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("count m=%5zu n=%5zu  serial %8.1f ms   openmp(%d) %8.1f ms   speedup %5.2fx   identical=%s\n",
              m, n_reps, serial_ms, threads, par_ms, serial_ms / par_ms,
              serial.counts == parallel.counts ? "yes" : "NO");
}

}  // namespace

int main() {
  std::printf("-- polynomial evaluation (full jet per point) --\n");
  for (std::size_t m : {64u, 512u, 2000u, 8192u}) bench_eval(m, 20000);
  std::printf("-- counting engine --\n");
  bench_engine(100, 2000);
  bench_engine(500, 500);
  return 0;
}
