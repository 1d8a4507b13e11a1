#pragma once

#include <span>
#include <vector>

#include "systolic/lattice.hpp"
#include "systolic/metric_field.hpp"

namespace systolic {

/// Grid node in the universal cover; (i, j) are not wrapped.
struct GridIndex {
  int i = 0;
  int j = 0;
  friend constexpr bool operator==(GridIndex, GridIndex) = default;
};

struct SystoleOptions {
  /// Initial strip half-width around the straight segment, as a fraction of
  /// the class length |v|.
  double initial_halfwidth = 0.3;
  /// Doublings of the strip allowed before giving up with StripExhausted.
  int max_widenings = 3;
};

struct SystoleResult {
  double sys = 0.0;
  LatticeVector witness_class;
  std::vector<GridIndex> witness_nodes;
  /// Cartesian polyline in the cover from x to x + witness_class.
  std::vector<Vec2> witness_path;
  int classes_examined = 0;
};

/// Relative error budget of 16-neighbour grid geodesics used by every
/// systole-dependent check.
inline constexpr double kMetricationBudget = 0.02;

/// Metric length of the edge between two cover nodes: Euclidean length times
/// the mean of f at the endpoints.
double edge_length(const ScalarField& factor, GridIndex a, GridIndex b);
double path_length(const ScalarField& factor, std::span<const GridIndex> nodes);

/// Shortest grid-graph distance from `source` to source + v in the cover,
/// where v = m*b1 + n*b2 is given in the lattice basis of the metric.
double cover_distance(const ConformalMetric& metric, GridIndex source, const LatticeVector& v,
                      const SystoleOptions& options = {});

/// Length of the straight closed curve from `base` to base + v, integrating
/// the interpolated factor with the midpoint rule.
double straight_loop_length(const ConformalMetric& metric, Vec2 base, const LatticeVector& v);

SystoleResult systole(const ConformalMetric& metric, const SystoleOptions& options = {});

struct FubiniCheck {
  double lhs = 0.0;  // E_mu(f)
  double rhs = 0.0;  // sigma * sys
  double tol = 0.0;
  bool ok = false;
};

FubiniCheck fubini_bound_check(const ConformalMetric& metric, double sys);
FubiniCheck fubini_bound_check(const ConformalMetric& metric);

}  // namespace systolic
