#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rtpzero/coefficients.hpp"
#include "rtpzero/metrics.hpp"

namespace rtpzero {

// Declarative description of one experiment, mirrored 1:1 by the JSON config
// file (snake_case keys, unknown keys rejected).
struct ExperimentConfig {
  std::string kind;  // zero-count-law | rate-curve | validate | theta-convergence
  std::vector<CoefficientLaw> laws;
  std::vector<std::size_t> m_values;
  std::size_t surrogate_M = 2000;
  std::size_t n_reps = 1000;
  Interval interval{0.0, 1.0};
  std::optional<double> delta;
  std::optional<double> eps;
  Metric metric = Metric::W1;
  int bootstrap_B = 1000;
  std::uint64_t master_seed = 42;
  std::string output_path = "results.csv";
};

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void validate_config(const ExperimentConfig& cfg);  // kind-specific invariants

struct ResultRow {
  std::size_t m = 0;
  std::string law;
  std::string metric;
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n_reps = 0;
  double mean_count = 0.0;
  double se_count = 0.0;
  double wall_ms = 0.0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  // In-memory only: per-row bootstrap distance replicates (same length for
  // every row that has them), used by fit_rate's slope interval.  Not part
  // of the persisted schema.
  std::vector<std::vector<double>> row_bootstrap;
};

// CSV persistence.  Header is exactly
//   m,law,metric,value,ci_low,ci_high,n_reps,mean_count,se_count,wall_ms
// and floating-point fields carry 17 significant digits, so a write/read
// round trip reproduces every field bit for bit.
void write_csv(const ResultTable& table, const std::string& path);
std::string table_to_csv(const ResultTable& table);
ResultTable read_csv(const std::string& path);

struct FitRate {
  double slope = 0.0;
  double slope_ci_low = 0.0;
  double slope_ci_high = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares of log(value) on log(m) over rows with positive
// finite values; throws insufficient_data with fewer than 3 usable rows.
// When the table carries per-row bootstrap distributions the slope interval
// is the 95% percentile interval of the refitted slopes; otherwise it
// degenerates to [slope, slope].
FitRate fit_rate(const ResultTable& table);

// Everything a run produces: the table, the samples behind it, and the
// companion JSON document (config echo plus per-row diagnostics).
struct RunArtifacts {
  ResultTable table;
  std::vector<ZeroCountSample> samples;     // one per (law, m) row where applicable
  ZeroCountSample reference;                // surrogate sample (rate-curve only)
  bool has_reference = false;
  std::string companion_json;               // serialized JSON document
};

RunArtifacts run_zero_count_law(const ExperimentConfig& cfg, int threads);
RunArtifacts run_rate_curve(const ExperimentConfig& cfg, int threads);
RunArtifacts run_theta_convergence(const ExperimentConfig& cfg, int threads);

// Writes the CSV to cfg-resolved output path and the companion JSON next to
// it (extension swapped to .json).  Returns the two paths written.
std::pair<std::string, std::string> write_outputs(const RunArtifacts& art,
                                                  const std::string& output_path);

// Runs every invariant suite and streams a deterministic pass/fail table to
// `report`.  Returns true iff all suites pass.  `inject_bug` enables a named
// fault for negative-control testing ("tampered-sinc"); empty means none.
bool run_validate(const ExperimentConfig& cfg, std::ostream& report,
                  const std::string& inject_bug = "");

}  // namespace rtpzero
