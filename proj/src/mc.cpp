#include "rtpzero/mc.hpp"

#include <omp.h>

#include <chrono>
#include <stdexcept>
#include <vector>

#include "rtpzero/errors.hpp"
#include "rtpzero/rtp.hpp"

namespace rtpzero {

namespace {
void check_job(const CountJob& job) {
  if (job.m == 0) throw std::invalid_argument("CountJob: m must be >= 1");
  if (job.n_reps == 0) throw std::invalid_argument("CountJob: n_reps must be >= 1");
  if (!(job.interval.a >= 0.0 && job.interval.b <= 1.0 && job.interval.a < job.interval.b))
    throw std::invalid_argument("CountJob: interval must satisfy 0 <= a < b <= 1");
}

ZeroCountSample assemble(const CountJob& job, const std::vector<int>& counts,
                         const std::vector<unsigned char>& flagged,
                         const std::vector<unsigned char>& retried, CountJobStats* stats,
                         double wall_ms) {
  ZeroCountSample out;
  out.meta.label = job.label.empty() ? law_name(job.law) : job.label;
  out.meta.m = job.m;
  out.meta.interval = job.interval;
  out.meta.master_seed = job.master_seed;
  out.counts.reserve(counts.size());
  std::size_t n_flagged = 0, n_retried = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (flagged[j]) {
      ++n_flagged;
    } else {
      out.counts.push_back(counts[j]);
    }
    if (retried[j]) ++n_retried;
  }
  if (stats) {
    stats->n_flagged = n_flagged;
    stats->n_endpoint_retries = n_retried;
    stats->wall_ms = wall_ms;
  }
  if (out.counts.empty())
    throw numerical_failure("run_count_job: every replication was flagged uncertified");
  return out;
}
}  // namespace

ReplicationOutcome run_one_replication(const CountJob& job, std::uint64_t stream_index) {
  const TrigPolynomial poly(sample_pairs(job.law, job.m, SeedSpec{job.master_seed, stream_index}));
  ReplicationOutcome out;
  Interval iv = job.interval;
  CountResult cr;
  try {
    cr = count_zeros(poly, iv, job.tol);
  } catch (const hypothesis_violation&) {
    // A zero exactly at an endpoint: shrink the interval a hair and retry once.
    out.endpoint_retry = true;
    iv = {iv.a + 1e-9, iv.b - 1e-9};
    cr = count_zeros(poly, iv, job.tol);
  }
  if (!cr.certified) cr = count_zeros(poly, iv, job.tol / 100.0);
  out.count = cr.count;
  out.certified = cr.certified;
  return out;
}

ZeroCountSample run_count_job(const CountJob& job, int threads, CountJobStats* stats) {
  check_job(job);
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = job.n_reps;
  std::vector<int> counts(n, 0);
  std::vector<unsigned char> flagged(n, 0), retried(n, 0);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(nthreads)
  for (long long j = 0; j < static_cast<long long>(n); ++j) {
    // Exceptions must not unwind through the parallel region; a replication
    // that fails outright is flagged and excluded like an uncertified one.
    try {
      const ReplicationOutcome r = run_one_replication(job, static_cast<std::uint64_t>(j));
      counts[j] = r.count;
      flagged[j] = r.certified ? 0 : 1;
      retried[j] = r.endpoint_retry ? 1 : 0;
    } catch (const std::exception&) {
      flagged[j] = 1;
    }
  }
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return assemble(job, counts, flagged, retried, stats, wall_ms);
}

ZeroCountSample run_count_job_serial(const CountJob& job, CountJobStats* stats) {
  check_job(job);
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = job.n_reps;
  std::vector<int> counts(n, 0);
  std::vector<unsigned char> flagged(n, 0), retried(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    try {
      const ReplicationOutcome r = run_one_replication(job, j);
      counts[j] = r.count;
      flagged[j] = r.certified ? 0 : 1;
      retried[j] = r.endpoint_retry ? 1 : 0;
    } catch (const std::exception&) {
      flagged[j] = 1;
    }
  }
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return assemble(job, counts, flagged, retried, stats, wall_ms);
}

}  // namespace rtpzero
