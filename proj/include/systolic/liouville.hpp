#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "systolic/metric_field.hpp"

namespace systolic {

/// Radial samples f(r_i) at cell centres r_i = (i + 1/2) * rmax / n. Values
/// must be finite; operations that take a logarithm additionally require
/// them to be positive.
class PolarProfile {
 public:
  PolarProfile(double rmax, std::vector<double> values);

  template <typename Fn>
  static PolarProfile sample(double rmax, int n, Fn&& fn) {
    std::vector<double> v(static_cast<std::size_t>(n));
    const double dr = rmax / n;
    for (int i = 0; i < n; ++i) {
      v[static_cast<std::size_t>(i)] = fn((i + 0.5) * dr);
    }
    return PolarProfile(rmax, std::move(v));
  }

  double rmax() const { return rmax_; }
  int size() const { return static_cast<int>(values_.size()); }
  double dr() const { return rmax_ / static_cast<double>(values_.size()); }
  double radius(int i) const { return (i + 0.5) * dr(); }
  std::span<const double> values() const { return values_; }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

 private:
  double rmax_;
  std::vector<double> values_;
};

/// f'' + f'/r with central differences inside and second-order one-sided
/// differences at both ends. Requires n >= 8.
PolarProfile polar_laplacian(const PolarProfile& profile);

/// The same operator written as 4 d/dzeta (zeta d/dzeta) on the nodes
/// zeta_i = r_i^2 (conservative flux form). Ends are NaN.
std::vector<double> zeta_operator(const PolarProfile& profile);

/// The same operator written as (4/zeta) d^2/dt^2 with t = log zeta, using
/// the unequal-spacing second difference. Ends are NaN.
std::vector<double> t_operator(const PolarProfile& profile);

/// 4 phi^2 d/dzeta (zeta d/dzeta) log phi on arbitrary increasing nodes; the
/// reciprocal form of Liouville's equation for rotationally invariant
/// factors. Ends are NaN.
std::vector<double> reciprocal_liouville_operator(std::span<const double> zeta,
                                                  std::span<const double> phi);

/// -f Lap f + |grad f|^2 - K f^4, sample-wise.
ScalarField liouville_residual_cartesian(const ConformalMetric& metric, const ScalarField& K);

/// a(z) = sum_k coeffs[k] z^k, degree >= 1 with a' not identically zero.
class HolomorphicSolution {
 public:
  explicit HolomorphicSolution(std::vector<std::complex<double>> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const std::complex<double>> coeffs() const { return coeffs_; }
  std::complex<double> value(std::complex<double> z) const;
  std::complex<double> derivative(std::complex<double> z) const;
  /// |a'| / (1 + |a|^2), a metric of curvature +4.
  double factor(std::complex<double> z) const;
  /// Zeros of a'.
  std::vector<std::complex<double>> critical_points() const;

 private:
  std::vector<std::complex<double>> coeffs_;
};

/// Cartesian patch covering the disk (or annulus) of the given centre and
/// radius with `cells` intervals per side.
struct PatchSpec {
  std::complex<double> center{0.0, 0.0};
  double radius = 0.5;
  int cells = 64;
  double inner_radius = 0.0;
};

struct HolomorphicPatch {
  PatchField factor;        // NaN outside the disk/annulus
  PatchSpec spec;
  std::vector<std::complex<double>> critical_points_inside;
  bool degenerate = false;  // a' vanishes inside the patch
};

HolomorphicPatch holomorphic_factor(const HolomorphicSolution& sol, const PatchSpec& spec);

struct CurvatureCheck {
  double max_abs_error = 0.0;
  int nodes_checked = 0;
};

/// max |K_numeric - expected| over nodes at least margin_fraction * (radius -
/// inner_radius) away from both patch boundaries, skipping nodes within
/// `critical_exclusion` of a zero of a'.
CurvatureCheck constant_curvature_check(const HolomorphicPatch& patch, double expected,
                                        double margin_fraction = 0.25,
                                        double critical_exclusion = 0.1);

/// f0 = 1 / (1 + alpha r^2 / 4).
class RiemannProfile {
 public:
  explicit RiemannProfile(double alpha) : alpha_(alpha) {}
  double alpha() const { return alpha_; }
  double operator()(double r) const { return 1.0 / (1.0 + 0.25 * alpha_ * r * r); }
  /// Supremum of valid radii (infinite for alpha >= 0).
  double domain_radius() const;

 private:
  double alpha_;
};

/// Samples Riemann's profile; InvalidDomain if alpha < 0 and rmax^2 >= -4/alpha.
PolarProfile riemann_profile(double alpha, double rmax, int n);

/// f~(zeta) := f(sqrt(zeta)) on the nodes zeta_i = r_i^2.
struct ZetaForm {
  std::vector<double> zeta;
  std::vector<double> values;
};
ZetaForm zeta_form(const PolarProfile& profile);

/// Variance of f~ for the uniform probability measure on [0, rmax^2]; cell i
/// is the image [ (i dr)^2, ((i+1) dr)^2 ] of the radial cell.
double zeta_variance(const PolarProfile& profile);

/// Variance of f for the uniform probability measure in t = log zeta over the
/// nodes with zeta in [lo, hi].
double t_variance(const PolarProfile& profile, double zeta_lo, double zeta_hi);
/// Same window, uniform measure in zeta.
double zeta_window_variance(const PolarProfile& profile, double zeta_lo, double zeta_hi);

struct TOperatorNode {
  double zeta = 0.0;
  double u_tt = 0.0;             // d^2 (log f) / dt^2
  double derivation_margin = 0.0;  // -u_tt - (zeta/4) alpha f^2
  double lemma_margin = 0.0;       // -u_tt - (alpha rho/4) f^2
};

struct TOperatorReport {
  std::vector<TOperatorNode> nodes;  // nodes with zeta in [rho, 2 rho]
  double min_derivation_margin = 0.0;
  double min_lemma_margin = 0.0;
  double max_u_tt = 0.0;  // concavity: <= 0 up to discretisation
  bool decreasing = false;  // f strictly decreasing over the whole profile
  bool monotonicity_ok = false;  // decreasing, or alpha <= 0
  double t_variance = 0.0;
  double zeta_variance = 0.0;
};

/// Evaluates u = log f against t = log zeta on the window zeta in
/// [rho, 2 rho]. Throws InsufficientResolution with fewer than 8 window
/// nodes and InvalidFactor for non-positive samples.
TOperatorReport t_operator_check(const PolarProfile& profile, double alpha, double rho);

// ---------------------------------------------------------------------------
// Exploration of the variance of constant-curvature factors on a disk.

struct SweepOptions {
  int radial_nodes = 200;
  int angular_nodes = 128;
  int max_redraws = 100;
};

struct SweepRow {
  std::string id;
  int degree = 0;
  double l2norm = 0.0;    // normalised L2 norm on D(rho) before rescaling
  double variance = 0.0;  // after rescaling to the Riemann L2 norm
  std::vector<std::complex<double>> coeffs;
};

struct SweepTable {
  double alpha = 0.0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  SweepRow riemann;
  std::vector<SweepRow> samples;
};

/// Disk moments of a factor under the normalised measure r dr dtheta / (pi rho^2).
struct DiskMoments {
  double mean = 0.0;
  double second = 0.0;  // E(f^2)
  double variance = 0.0;
};
DiskMoments disk_moments(double rho, const SweepOptions& options,
                         const std::function<double(std::complex<double>)>& factor);

/// Draws random polynomials a(z) (degree uniform in 1..4, coefficient real
/// and imaginary parts uniform in [-1, 1]); sample i uses seed ^ i. The
/// factor (2/sqrt(alpha)) |a'| / (1 + |a|^2) has curvature alpha.
SweepTable variance_sweep_experiment(double alpha, double rho, int samples, std::uint64_t seed,
                                     const SweepOptions& options = {});

/// Same rescaling and disk variance for a given polynomial.
SweepRow sweep_row_for(const HolomorphicSolution& sol, double alpha, double rho,
                       double riemann_l2, const SweepOptions& options = {});

/// CSV: id,degree,l2norm,variance; the Riemann row first.
void write_sweep_csv(std::ostream& out, const SweepTable& table);

}  // namespace systolic
