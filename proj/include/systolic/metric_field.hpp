#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "systolic/lattice.hpp"

namespace systolic {

/// Pairwise (cascade) summation in a fixed order. Results depend only on the
/// input sequence, never on threading.
double pairwise_sum(std::span<const double> values);

/// Samples of an L-periodic function at (i/nu)*b1 + (j/nv)*b2, stored
/// row-major (i outer, j inner). Indices wrap modulo nu and nv.
class ScalarField {
 public:
  ScalarField(Lattice2D lattice, int nu, int nv, std::vector<double> values);
  ScalarField(Lattice2D lattice, int nu, int nv, double fill);

  const Lattice2D& lattice() const { return lattice_; }
  int nu() const { return nu_; }
  int nv() const { return nv_; }
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double operator()(int i, int j) const { return values_[index(i, j)]; }
  double& operator()(int i, int j) { return values_[index(i, j)]; }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(wrap(i, nu_)) * static_cast<std::size_t>(nv_) +
           static_cast<std::size_t>(wrap(j, nv_));
  }

  /// Cartesian location of grid node (i, j) (no wrapping).
  Vec2 point(int i, int j) const {
    return lattice_.point(static_cast<double>(i) / nu_, static_cast<double>(j) / nv_);
  }

  /// Larger of the two grid steps |b1|/nu and |b2|/nv.
  double spacing() const;

  /// Periodic bicubic (Catmull-Rom) interpolation at a Cartesian point.
  double interpolate(Vec2 p) const;

  static int wrap(int i, int n) {
    const int r = i % n;
    return r < 0 ? r + n : r;
  }

 private:
  Lattice2D lattice_;
  int nu_;
  int nv_;
  std::vector<double> values_;
};

/// f^2 (dx^2 + dy^2) on R^2 / L with L of unit coarea and f > 0.
class ConformalMetric {
 public:
  explicit ConformalMetric(ScalarField factor);

  const ScalarField& factor() const { return factor_; }
  const Lattice2D& lattice() const { return factor_.lattice(); }

  /// Same lattice and grid, factor multiplied by c > 0.
  ConformalMetric scaled(double c) const;

 private:
  ScalarField factor_;
};

/// Smallest admissible sample of a conformal factor.
inline constexpr double kMinFactor = 1e-12;

double field_mean(const ScalarField& field);

/// E_mu(f) over the unit-area flat measure.
double mean(const ConformalMetric& metric);
/// E_mu(f^2) = area of f^2 ds^2.
double area(const ConformalMetric& metric);

struct VarianceForms {
  double moment;    // E(f^2) - E(f)^2
  double centered;  // E((f - m)^2)
};
VarianceForms variance_forms(const ConformalMetric& metric);
/// Centered variance; throws NumericalError if the two forms disagree by more
/// than 1e-10 relative to E(f^2).
double variance(const ConformalMetric& metric);

ScalarField log_field(const ScalarField& field);

/// Flat Laplacian with periodic second-order central differences, including
/// the mixed term for non-orthogonal bases.
ScalarField flat_laplacian(const ScalarField& field);
/// |grad f|^2 with periodic central differences.
ScalarField gradient_norm2(const ScalarField& field);

/// K = -Lap(log f) / f^2.
ScalarField gaussian_curvature(const ConformalMetric& metric);
/// K = (-f Lap f + |grad f|^2) / f^4.
ScalarField gaussian_curvature_pde_form(const ConformalMetric& metric);

/// Cartesian node grid on a rectangle, not periodic. Nodes at
/// origin + (i*h, j*h), 0 <= i < nx, 0 <= j < ny, row-major in i.
/// Entries may be NaN where a quantity is undefined.
struct PatchField {
  Vec2 origin;
  double h = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  Vec2 point(int i, int j) const { return {origin.x + i * h, origin.y + j * h}; }
  double operator()(int i, int j) const {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) +
                  static_cast<std::size_t>(j)];
  }
  double& operator()(int i, int j) {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) +
                  static_cast<std::size_t>(j)];
  }
};

/// Five-point Laplacian at nodes whose stencil is complete and finite; NaN
/// elsewhere.
PatchField patch_laplacian(const PatchField& field);
/// K = -Lap(log f) / f^2 on a patch; NaN where the stencil is incomplete or
/// f <= 0.
PatchField patch_curvature(const PatchField& factor);

// ---------------------------------------------------------------------------
// Built-in analytic families. Centres are given in lattice coordinates (u, v);
// widths and radii are Cartesian lengths.

struct ConstantFamily {
  double c = 1.0;
};

/// 1 + epsilon * cos(2 pi (k u + l v)).
struct TrigFamily {
  double epsilon = 0.1;
  int k = 1;
  int l = 0;
};

struct TrigMode {
  int k = 0;
  int l = 0;
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};

/// p = constant + sum of modes; the factor is p, or exp(p) when
/// `exponentiate` is set.
struct TrigPolynomialFamily {
  double constant = 1.0;
  std::vector<TrigMode> modes;
  bool exponentiate = false;
};

/// 1 + amplitude * sum over translates of exp(-|x - x0 - lambda|^2 / width^2).
struct GaussianBumpFamily {
  double amplitude = 0.5;
  double width = 0.15;
  Vec2 center{0.5, 0.5};
};

/// Riemann's constant-curvature profile 1 / (1 + alpha r^2 / 4) around the
/// nearest translate of `center`, blended smoothly into the constant
/// f0(outer_radius) between inner_radius and outer_radius. Inside
/// inner_radius the curvature is exactly alpha. Radii <= 0 select
/// 0.3 * lambda1 and 0.48 * lambda1.
struct RiemannBumpFamily {
  double alpha = 4.0;
  Vec2 center{0.5, 0.5};
  double inner_radius = 0.0;
  double outer_radius = 0.0;
};

using AnalyticFamily = std::variant<ConstantFamily, TrigFamily, TrigPolynomialFamily,
                                    GaussianBumpFamily, RiemannBumpFamily>;

/// Samples a family on an nu x nv grid. Throws InvalidFactor if a sample is
/// <= kMinFactor or not finite, PreconditionError if nu or nv < 8.
ScalarField from_analytic(const Lattice2D& lattice, int nu, int nv, const AnalyticFamily& family);

/// Inner/outer radii a RiemannBumpFamily resolves to on `lattice`.
std::array<double, 2> riemann_bump_radii(const Lattice2D& lattice, const RiemannBumpFamily& family);

// ---------------------------------------------------------------------------
// Grid file format:
//   SYSTOLIC-GRID 1
//   lattice b1x b1y b2x b2y
//   dims nu nv
//   nu*nv values, row-major (i outer, j inner), 17 significant digits.

void write_grid(std::ostream& out, const ScalarField& field);
ScalarField read_grid(std::istream& in);
void write_grid_file(const std::string& path, const ScalarField& field);
ScalarField read_grid_file(const std::string& path);

}  // namespace systolic
