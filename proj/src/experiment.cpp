#include "rtpzero/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rtpzero/errors.hpp"
#include "rtpzero/mc.hpp"
#include "rtpzero/rng.hpp"
#include "rtpzero/rtp.hpp"

namespace rtpzero {

namespace {

using nlohmann::json;

// Fixed stream-offset tags (ASCII-derived constants).  Replication streams
// use indices 0..n_reps-1 under the experiment master seed; every other
// consumer first derives an independent child master from one of these tags,
// so no engine stream is ever shared between two different purposes.
constexpr std::uint64_t kReferenceTag = 0x7265666572656e63ULL;  // "referenc"
constexpr std::uint64_t kBootstrapTagBase = 0x626f6f7400000000ULL;  // "boot" << 32
constexpr std::uint64_t kRoughPathTag = 0x726f756768776c6bULL;  // "roughwlk"

double now_ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct SummaryStats {
  double mean = 0.0;
  double se = 0.0;
};

SummaryStats summarize(const std::vector<int>& counts) {
  SummaryStats s;
  const std::size_t n = counts.size();
  if (n == 0) return s;
  double sum = 0.0;
  for (int c : counts) sum += c;
  s.mean = sum / static_cast<double>(n);
  if (n >= 2) {
    double ss = 0.0;
    for (int c : counts) {
      const double d = c - s.mean;
      ss += d * d;
    }
    s.se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  }
  return s;
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["kind"] = cfg.kind;
  json laws = json::array();
  for (CoefficientLaw l : cfg.laws) laws.push_back(law_name(l));
  j["laws"] = laws;
  j["m_values"] = cfg.m_values;
  j["surrogate_M"] = cfg.surrogate_M;
  j["n_reps"] = cfg.n_reps;
  j["interval"] = json::array({cfg.interval.a, cfg.interval.b});
  j["delta"] = cfg.delta ? json(*cfg.delta) : json(nullptr);
  j["eps"] = cfg.eps ? json(*cfg.eps) : json(nullptr);
  j["metric"] = metric_name(cfg.metric);
  j["bootstrap_B"] = cfg.bootstrap_B;
  j["master_seed"] = cfg.master_seed;
  j["output_path"] = cfg.output_path;
  return j;
}

json row_to_json(const ResultRow& r) {
  json j;
  j["m"] = r.m;
  j["law"] = r.law;
  j["metric"] = r.metric;
  j["value"] = r.value;
  j["ci_low"] = r.ci_low;
  j["ci_high"] = r.ci_high;
  j["n_reps"] = r.n_reps;
  j["mean_count"] = r.mean_count;
  j["se_count"] = r.se_count;
  return j;
}

json stats_to_json(const CountJobStats& st) {
  json j;
  j["n_flagged"] = st.n_flagged;
  j["n_endpoint_retries"] = st.n_endpoint_retries;
  return j;
}

double require_number(const json& v, const char* key) {
  if (!v.is_number()) throw std::invalid_argument(std::string("config: '") + key + "' must be a number");
  return v.get<double>();
}

std::size_t require_positive_integer(const json& v, const char* key) {
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw std::invalid_argument(std::string("config: '") + key + "' must be a positive integer");
  return static_cast<std::size_t>(v.get<unsigned long long>());
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config: top-level value must be an object");

  static const char* known[] = {"kind",  "laws",   "m_values", "surrogate_M",
                                "n_reps", "interval", "delta",   "eps",
                                "metric", "bootstrap_B", "master_seed", "output_path"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || (it.key() == k);
    if (!ok) throw std::invalid_argument("config: unknown key '" + it.key() + "'");
  }

  ExperimentConfig cfg;
  if (!doc.contains("kind") || !doc["kind"].is_string())
    throw std::invalid_argument("config: required string key 'kind' is missing");
  cfg.kind = doc["kind"].get<std::string>();

  if (doc.contains("laws")) {
    if (!doc["laws"].is_array()) throw std::invalid_argument("config: 'laws' must be an array");
    cfg.laws.clear();
    for (const auto& v : doc["laws"]) {
      if (!v.is_string()) throw std::invalid_argument("config: 'laws' entries must be strings");
      cfg.laws.push_back(law_from_name(v.get<std::string>()));
    }
  }
  if (doc.contains("m_values")) {
    if (!doc["m_values"].is_array())
      throw std::invalid_argument("config: 'm_values' must be an array");
    cfg.m_values.clear();
    for (const auto& v : doc["m_values"])
      cfg.m_values.push_back(require_positive_integer(v, "m_values"));
  }
  if (doc.contains("surrogate_M"))
    cfg.surrogate_M = require_positive_integer(doc["surrogate_M"], "surrogate_M");
  if (doc.contains("n_reps")) cfg.n_reps = require_positive_integer(doc["n_reps"], "n_reps");
  if (doc.contains("interval")) {
    const auto& iv = doc["interval"];
    if (!iv.is_array() || iv.size() != 2)
      throw std::invalid_argument("config: 'interval' must be a two-element array [a, b]");
    cfg.interval.a = require_number(iv[0], "interval");
    cfg.interval.b = require_number(iv[1], "interval");
  }
  if (doc.contains("delta") && !doc["delta"].is_null())
    cfg.delta = require_number(doc["delta"], "delta");
  if (doc.contains("eps") && !doc["eps"].is_null()) cfg.eps = require_number(doc["eps"], "eps");
  if (doc.contains("metric")) {
    if (!doc["metric"].is_string())
      throw std::invalid_argument("config: 'metric' must be a string");
    cfg.metric = metric_from_name(doc["metric"].get<std::string>());
  }
  if (doc.contains("bootstrap_B")) {
    if (!doc["bootstrap_B"].is_number_integer())
      throw std::invalid_argument("config: 'bootstrap_B' must be an integer");
    cfg.bootstrap_B = doc["bootstrap_B"].get<int>();
  }
  if (doc.contains("master_seed")) {
    if (!doc["master_seed"].is_number_integer())
      throw std::invalid_argument("config: 'master_seed' must be an integer");
    cfg.master_seed = doc["master_seed"].get<std::uint64_t>();
  }
  if (doc.contains("output_path")) {
    if (!doc["output_path"].is_string())
      throw std::invalid_argument("config: 'output_path' must be a string");
    cfg.output_path = doc["output_path"].get<std::string>();
  }

  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return config_from_json_text(os.str());
}

void validate_config(const ExperimentConfig& cfg) {
  const bool known_kind = cfg.kind == "zero-count-law" || cfg.kind == "rate-curve" ||
                          cfg.kind == "validate" || cfg.kind == "theta-convergence";
  if (!known_kind) throw std::invalid_argument("config: unknown kind '" + cfg.kind + "'");
  if (cfg.n_reps < 1) throw std::invalid_argument("config: n_reps must be >= 1");
  if (!(cfg.interval.a >= 0.0 && cfg.interval.a < cfg.interval.b && cfg.interval.b <= 1.0))
    throw std::invalid_argument("config: interval must satisfy 0 <= a < b <= 1");
  if (cfg.delta && !(std::isfinite(*cfg.delta) && *cfg.delta > 0.0))
    throw std::invalid_argument("config: delta must be positive and finite");
  if (cfg.eps && !(std::isfinite(*cfg.eps) && *cfg.eps > 0.0))
    throw std::invalid_argument("config: eps must be positive and finite");

  const bool needs_samples = cfg.kind == "zero-count-law" || cfg.kind == "rate-curve";
  if (needs_samples) {
    if (cfg.laws.empty()) throw std::invalid_argument("config: at least one law is required");
    if (cfg.m_values.empty()) throw std::invalid_argument("config: m_values must be nonempty");
  }
  if (cfg.kind == "rate-curve") {
    for (std::size_t i = 1; i < cfg.m_values.size(); ++i)
      if (cfg.m_values[i] <= cfg.m_values[i - 1])
        throw std::invalid_argument("config: m_values must be strictly increasing for rate-curve");
    if (cfg.bootstrap_B < 100)
      throw std::invalid_argument("config: bootstrap_B must be >= 100 for rate-curve");
  }
  if (cfg.kind == "theta-convergence" && cfg.m_values.empty())
    throw std::invalid_argument("config: m_values must be nonempty for theta-convergence");
}

RunArtifacts run_zero_count_law(const ExperimentConfig& cfg, int threads) {
  RunArtifacts art;
  json jrows = json::array();
  for (CoefficientLaw law : cfg.laws) {
    for (std::size_t m : cfg.m_values) {
      const auto t0 = std::chrono::steady_clock::now();
      CountJob job;
      job.law = law;
      job.m = m;
      job.n_reps = cfg.n_reps;
      job.interval = cfg.interval;
      job.master_seed = cfg.master_seed;
      CountJobStats stats;
      ZeroCountSample sample = run_count_job(job, threads, &stats);
      const SummaryStats s = summarize(sample.counts);

      ResultRow row;
      row.m = m;
      row.law = law_name(law);
      row.metric = "count";
      row.value = s.mean;
      row.ci_low = s.mean - 1.96 * s.se;
      row.ci_high = s.mean + 1.96 * s.se;
      row.n_reps = sample.counts.size();
      row.mean_count = s.mean;
      row.se_count = s.se;
      row.wall_ms = now_ms_since(t0);
      art.table.rows.push_back(row);
      art.table.row_bootstrap.emplace_back();

      json jr = row_to_json(row);
      jr["stats"] = stats_to_json(stats);
      jrows.push_back(jr);
      art.samples.push_back(std::move(sample));
    }
  }
  json doc;
  doc["config"] = config_to_json(cfg);
  doc["rows"] = jrows;
  art.companion_json = doc.dump(2) + "\n";
  return art;
}

RunArtifacts run_rate_curve(const ExperimentConfig& cfg, int threads) {
  RunArtifacts art;

  // One surrogate reference sample, shared by every (law, m) row.  Its
  // master seed is derived from the experiment master through a fixed tag so
  // its coefficient draws are independent of every law sample's draws
  // (replication j of every law job uses stream j of the experiment master).
  CountJob ref_job;
  ref_job.law = CoefficientLaw::gaussian;
  ref_job.m = cfg.surrogate_M;
  ref_job.n_reps = cfg.n_reps;
  ref_job.interval = cfg.interval;
  ref_job.master_seed = derive_seed(SeedSpec{cfg.master_seed, kReferenceTag});
  ref_job.label = "G-surrogate(" + std::to_string(cfg.surrogate_M) + ")";
  CountJobStats ref_stats;
  const auto tref = std::chrono::steady_clock::now();
  art.reference = run_count_job(ref_job, threads, &ref_stats);
  const double ref_ms = now_ms_since(tref);
  art.has_reference = true;
  const SummaryStats ref_summary = summarize(art.reference.counts);

  json jrows = json::array();
  std::uint64_t row_index = 0;
  for (CoefficientLaw law : cfg.laws) {
    for (std::size_t m : cfg.m_values) {
      const auto t0 = std::chrono::steady_clock::now();
      CountJob job;
      job.law = law;
      job.m = m;
      job.n_reps = cfg.n_reps;
      job.interval = cfg.interval;
      job.master_seed = cfg.master_seed;
      CountJobStats stats;
      ZeroCountSample sample = run_count_job(job, threads, &stats);
      const SummaryStats s = summarize(sample.counts);

      std::vector<double> boots;
      const SeedSpec boot_seed{cfg.master_seed, kBootstrapTagBase + row_index};
      DistanceEstimate est = bootstrap_ci(sample, art.reference, cfg.metric, cfg.bootstrap_B,
                                          0.95, boot_seed, &boots);

      ResultRow row;
      row.m = m;
      row.law = law_name(law);
      row.metric = metric_name(cfg.metric);
      row.value = est.value;
      row.ci_low = est.ci_low;
      row.ci_high = est.ci_high;
      row.n_reps = sample.counts.size();
      row.mean_count = s.mean;
      row.se_count = s.se;
      row.wall_ms = now_ms_since(t0);
      art.table.rows.push_back(row);
      art.table.row_bootstrap.push_back(std::move(boots));

      json jr = row_to_json(row);
      jr["stats"] = stats_to_json(stats);
      jrows.push_back(jr);
      art.samples.push_back(std::move(sample));
      ++row_index;
    }
  }

  // Fit one convergence rate per law over that law's rows.
  json jfit = json::object();
  for (CoefficientLaw law : cfg.laws) {
    const std::string name = law_name(law);
    ResultTable sub;
    for (std::size_t i = 0; i < art.table.rows.size(); ++i) {
      if (art.table.rows[i].law != name) continue;
      sub.rows.push_back(art.table.rows[i]);
      sub.row_bootstrap.push_back(art.table.row_bootstrap[i]);
    }
    json rec;
    try {
      const FitRate fit = fit_rate(sub);
      rec["slope"] = fit.slope;
      rec["slope_ci_low"] = fit.slope_ci_low;
      rec["slope_ci_high"] = fit.slope_ci_high;
      rec["r_squared"] = fit.r_squared;
    } catch (const insufficient_data& e) {
      rec["slope"] = nullptr;  // serialized form of not-a-number
      rec["warning"] = e.what();
    }
    jfit[name] = rec;
  }

  json doc;
  doc["config"] = config_to_json(cfg);
  doc["rows"] = jrows;
  json jref;
  jref["label"] = ref_job.label;
  jref["m"] = cfg.surrogate_M;
  jref["n_reps"] = art.reference.counts.size();
  jref["mean_count"] = ref_summary.mean;
  jref["se_count"] = ref_summary.se;
  jref["wall_ms"] = ref_ms;
  jref["stats"] = stats_to_json(ref_stats);
  doc["reference"] = jref;
  doc["fitted_rate"] = jfit;
  art.companion_json = doc.dump(2) + "\n";
  return art;
}

RunArtifacts run_theta_convergence(const ExperimentConfig& cfg, int /*threads*/) {
  RunArtifacts art;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const int grid_n = 257;

  // Smooth test path and a rough random-walk path with Donsker scaling.
  auto smooth = [](double u) { return std::complex<double>(u, u * u); };

  const std::size_t walk_steps = 4096;
  std::vector<double> knots(walk_steps + 1);
  std::vector<std::complex<double>> values(walk_steps + 1);
  Stream rough_rng(SeedSpec{derive_seed(SeedSpec{cfg.master_seed, kRoughPathTag}), 0});
  std::complex<double> acc(0.0, 0.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(walk_steps));
  knots[0] = 0.0;
  values[0] = acc;
  for (std::size_t k = 1; k <= walk_steps; ++k) {
    double g1 = 0.0, g2 = 0.0;
    rough_rng.normal_pair(g1, g2);
    acc += std::complex<double>(g1, g2) * scale;
    knots[k] = static_cast<double>(k) / static_cast<double>(walk_steps);
    values[k] = acc;
  }
  const PathPL rough(knots, values);

  json jrows = json::array();
  auto push_rows = [&](const std::string& label, auto&& theta_exact, auto&& theta_m_of) {
    for (std::size_t m : cfg.m_values) {
      const auto t0 = std::chrono::steady_clock::now();
      double sup_err = 0.0;
      for (int j = 0; j < grid_n; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(grid_n - 1);
        sup_err = std::max(sup_err, std::abs(theta_m_of(m, t) - theta_exact(t)));
      }
      ResultRow row;
      row.m = m;
      row.law = label;
      row.metric = "sup_err";
      row.value = sup_err;
      row.ci_low = sup_err;
      row.ci_high = sup_err;
      row.n_reps = 1;
      row.mean_count = nan;
      row.se_count = nan;
      row.wall_ms = now_ms_since(t0);
      art.table.rows.push_back(row);
      art.table.row_bootstrap.emplace_back();
      jrows.push_back(row_to_json(row));
    }
  };

  push_rows(
      "smooth-quadratic", [&](double t) { return theta(smooth, t); },
      [&](std::size_t m, double t) {
        std::vector<double> ks(m + 1);
        std::vector<std::complex<double>> vs(m + 1);
        for (std::size_t k = 0; k <= m; ++k) {
          ks[k] = static_cast<double>(k) / static_cast<double>(m);
          vs[k] = smooth(ks[k]);
        }
        return theta_m(PathPL(ks, vs), m, t);
      });
  push_rows(
      "rough-walk-4096", [&](double t) { return theta(rough, t); },
      [&](std::size_t m, double t) { return theta_m(rough, m, t); });

  json doc;
  doc["config"] = config_to_json(cfg);
  doc["rows"] = jrows;
  doc["rough_path_holder_one_third"] = holder_seminorm(rough, 1.0 / 3.0);
  art.companion_json = doc.dump(2) + "\n";
  return art;
}

FitRate fit_rate(const ResultTable& table) {
  std::vector<std::size_t> usable;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const ResultRow& r = table.rows[i];
    if (!(std::isfinite(r.value) && r.value > 0.0) || r.m < 1) continue;
    usable.push_back(i);
    lx.push_back(std::log(static_cast<double>(r.m)));
    ly.push_back(std::log(r.value));
  }
  if (usable.size() < 3)
    throw insufficient_data("fit_rate: need at least 3 rows with positive distance values, have " +
                            std::to_string(usable.size()));

  auto ols = [](const std::vector<double>& x, const std::vector<double>& y, double* r2) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
      syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0) throw insufficient_data("fit_rate: all usable rows share the same m");
    const double slope = sxy / sxx;
    if (r2) {
      double ssres = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double resid = (y[i] - my) - slope * (x[i] - mx);
        ssres += resid * resid;
      }
      *r2 = syy > 0.0 ? 1.0 - ssres / syy : 1.0;
    }
    return slope;
  };

  FitRate fit;
  fit.slope = ols(lx, ly, &fit.r_squared);
  fit.slope_ci_low = fit.slope;
  fit.slope_ci_high = fit.slope;

  // Percentile interval of slopes refit on the per-row bootstrap replicates,
  // when the table carries them for every usable row.
  bool have_boot = table.row_bootstrap.size() == table.rows.size();
  std::size_t B = 0;
  for (std::size_t i : usable) {
    if (!have_boot) break;
    const auto& reps = table.row_bootstrap[i];
    if (reps.empty() || (B != 0 && reps.size() != B)) {
      have_boot = false;
      break;
    }
    B = reps.size();
  }
  if (have_boot && B >= 100) {
    std::vector<double> slopes;
    slopes.reserve(B);
    for (std::size_t b = 0; b < B; ++b) {
      std::vector<double> bx, by;
      for (std::size_t i : usable) {
        const double v = table.row_bootstrap[i][b];
        if (!(std::isfinite(v) && v > 0.0)) continue;
        bx.push_back(std::log(static_cast<double>(table.rows[i].m)));
        by.push_back(std::log(v));
      }
      if (bx.size() < 3) continue;
      try {
        slopes.push_back(ols(bx, by, nullptr));
      } catch (const insufficient_data&) {
      }
    }
    if (slopes.size() >= 100) {
      std::sort(slopes.begin(), slopes.end());
      auto percentile = [&slopes](double q) {
        const double pos = q * (slopes.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, slopes.size() - 1);
        const double w = pos - static_cast<double>(lo);
        return slopes[lo] + w * (slopes[hi] - slopes[lo]);
      };
      fit.slope_ci_low = std::min(percentile(0.025), fit.slope);
      fit.slope_ci_high = std::max(percentile(0.975), fit.slope);
    }
  }
  return fit;
}

std::pair<std::string, std::string> write_outputs(const RunArtifacts& art,
                                                  const std::string& output_path) {
  write_csv(art.table, output_path);
  const std::size_t slash = output_path.find_last_of("/\\");
  const std::size_t dot = output_path.find_last_of('.');
  std::string json_path;
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    json_path = output_path.substr(0, dot) + ".json";
  else
    json_path = output_path + ".json";
  std::ofstream jf(json_path, std::ios::binary);
  if (!jf) throw std::runtime_error("cannot open '" + json_path + "' for writing");
  jf << art.companion_json;
  if (!jf) throw std::runtime_error("write to '" + json_path + "' failed");
  return {output_path, json_path};
}

}  // namespace rtpzero
