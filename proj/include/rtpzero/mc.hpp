#pragma once
#include <cstdint>
#include <string>

#include "rtpzero/coefficients.hpp"
#include "rtpzero/metrics.hpp"
#include "rtpzero/zeros.hpp"

namespace rtpzero {

// One Monte Carlo counting job: n_reps independent replications of
// "sample coefficients, build the polynomial, count its zeros".
struct CountJob {
  CoefficientLaw law = CoefficientLaw::gaussian;
  std::size_t m = 0;
  std::size_t n_reps = 0;
  Interval interval{0.0, 1.0};
  double tol = 1e-9;
  std::uint64_t master_seed = 0;
  std::string label;  // sample label; defaults to the law name if empty
};

// Bookkeeping the engine reports alongside the sample.
struct CountJobStats {
  std::size_t n_flagged = 0;           // still uncertified after the tol/100 retry; excluded
  std::size_t n_endpoint_retries = 0;  // endpoint-zero events, retried on a shrunk interval
  double wall_ms = 0.0;
};

// Replication j draws its coefficients from stream_index = j under the job's
// master seed, so any replication can be reproduced alone and results do not
// depend on the parallel schedule.  Uncertified counts are re-run at tol/100;
// if still uncertified they are excluded from the sample and counted in
// stats.  The two entry points run the identical per-replication code; the
// parallel one distributes replications over OpenMP threads (threads <= 0
// means "all available") and is verified against the serial one in tests.
ZeroCountSample run_count_job(const CountJob& job, int threads, CountJobStats* stats = nullptr);
ZeroCountSample run_count_job_serial(const CountJob& job, CountJobStats* stats = nullptr);

// Single replication, exposed for tests and diagnostics.
struct ReplicationOutcome {
  int count = 0;
  bool certified = false;
  bool endpoint_retry = false;
};
ReplicationOutcome run_one_replication(const CountJob& job, std::uint64_t stream_index);

}  // namespace rtpzero
