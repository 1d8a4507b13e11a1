#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "systolic/lattice.hpp"
#include "systolic/metric_field.hpp"
#include "systolic/systole.hpp"

namespace systolic {

/// Every side of the isosystolic inequality chain for one metric.
struct DefectReport {
  TauParameter tau;
  double area = 0.0;
  double sys = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double loewner_lhs = 0.0;         // area - (sqrt(3)/2) sys^2
  double sharp_lhs = 0.0;           // area - sigma^2 sys^2
  std::optional<double> rect_lhs;   // area - sys^2, rectangular lattices only
  double fubini_rhs = 0.0;          // sigma * sys
  double tol = 0.0;                 // kMetricationBudget * area
  bool loewner_pass = false;
  bool sharp_pass = false;
  std::optional<bool> rect_pass;
  bool fubini_pass = false;
  double min_curvature = 0.0;
  double max_curvature = 0.0;
  LatticeVector witness_class;
  int classes_examined = 0;

  bool all_pass() const {
    return loewner_pass && sharp_pass && fubini_pass && rect_pass.value_or(true);
  }
};

DefectReport build_report(const ConformalMetric& metric, const SystoleOptions& options = {});

/// Reports for every metric, computed on up to `threads` worker threads
/// (0 = hardware concurrency). Results are in input order and do not depend
/// on the thread count.
std::vector<DefectReport> build_reports(std::span<const ConformalMetric> metrics, int threads = 0,
                                        const SystoleOptions& options = {});

/// True iff the metric sits at the equality case of Loewner's inequality:
/// loewner_lhs <= tol, variance <= tol and tau within 1e-6 of e^{i pi / 3}.
bool equality_case_check(const DefectReport& report);
bool equality_case_check(const ConformalMetric& metric);

struct CorpusOptions {
  /// Grid count along the shorter basis vector; the other count is scaled
  /// to keep cells roughly square.
  int grid = 128;
  /// Largest |k|, |l| of the trigonometric modes.
  int max_mode = 3;
};

/// Deterministic random metrics: tau uniform in the truncated fundamental
/// domain (|re| <= 1/2, sqrt(3)/2 <= im <= 2, |tau| >= 1) and
/// f = exp(sum of modes), mode (k, l) having cos/sin coefficients uniform in
/// [-0.5, 0.5] damped by 1 / (k^2 + l^2). Throws PreconditionError for
/// count < 1.
std::vector<ConformalMetric> random_corpus(int count, std::uint64_t seed,
                                           const CorpusOptions& options = {});

/// CSV header and one row per report (index, tau_re, tau_im, area, sys, var,
/// loewner_lhs, sharp_lhs, rect_lhs, then the pass flags).
void write_corpus_csv(std::ostream& out, std::span<const DefectReport> reports);
void write_report_summary(std::ostream& out, const DefectReport& report);

// ---------------------------------------------------------------------------
// JSON configuration:
//   {
//     "lattice": {"basis": [[b1x, b1y], [b2x, b2y]]}  or  {"tau": [re, im]},
//     "grid":    {"nu": 128, "nv": 128},
//     "factor":  {"family": "constant" | "trig" | "trig-poly" |
//                 "gaussian-bump" | "riemann-bump", ...parameters}
//                or {"grid_file": "path"}
//   }
// A basis is rescaled to unit coarea before the factor is sampled. A grid
// file whose lattice is not of unit coarea is rescaled together with its
// factor so the metric is unchanged.

struct MetricConfig {
  Lattice2D lattice = Lattice2D::square();
  int nu = 128;
  int nv = 128;
  AnalyticFamily family = ConstantFamily{};
  std::optional<std::string> grid_file;
};

MetricConfig parse_metric_config(const std::string& json_text);
MetricConfig load_metric_config(const std::string& path);
ConformalMetric build_metric(const MetricConfig& config);

/// Rescales lattice and factor to unit coarea without changing the metric.
ConformalMetric normalized_metric(const ScalarField& factor);

}  // namespace systolic
