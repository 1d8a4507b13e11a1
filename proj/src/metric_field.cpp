#include "systolic/metric_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "systolic/errors.hpp"

namespace systolic {

namespace {

constexpr std::size_t kPairwiseBlock = 8;

// Inverse Gram matrix of the basis scaled to grid steps: Lap = guu d_ii +
// 2 guv d_ij + gvv d_jj in index units.
struct IndexMetric {
  double guu;
  double guv;
  double gvv;
};

IndexMetric index_metric(const ScalarField& field) {
  const Vec2 b1 = field.lattice().b1();
  const Vec2 b2 = field.lattice().b2();
  const double g11 = dot(b1, b1);
  const double g12 = dot(b1, b2);
  const double g22 = dot(b2, b2);
  const double det = g11 * g22 - g12 * g12;
  const double nu = field.nu();
  const double nv = field.nv();
  return {g22 / det * nu * nu, -g12 / det * nu * nv, g11 / det * nv * nv};
}

void check_grid(int nu, int nv) {
  if (nu < 8 || nv < 8) {
    throw PreconditionError("grid counts must be >= 8, got " + std::to_string(nu) + "x" +
                            std::to_string(nv));
  }
}

double catmull_rom(double p0, double p1, double p2, double p3, double t) {
  return p1 + 0.5 * t *
                  (p2 - p0 +
                   t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= kPairwiseBlock) {
    double s = 0.0;
    for (double v : values) {
      s += v;
    }
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

ScalarField::ScalarField(Lattice2D lattice, int nu, int nv, std::vector<double> values)
    : lattice_(lattice), nu_(nu), nv_(nv), values_(std::move(values)) {
  check_grid(nu, nv);
  if (values_.size() != static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv)) {
    throw PreconditionError("field sample count does not match nu*nv");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw NumericalError("field sample is not finite");
    }
  }
}

ScalarField::ScalarField(Lattice2D lattice, int nu, int nv, double fill)
    : ScalarField(lattice, nu, nv,
                  std::vector<double>(static_cast<std::size_t>(std::max(nu, 0)) *
                                          static_cast<std::size_t>(std::max(nv, 0)),
                                      fill)) {}

double ScalarField::spacing() const {
  const Vec2 du = (1.0 / nu_) * lattice_.b1();
  const Vec2 dv = (1.0 / nv_) * lattice_.b2();
  return std::max(norm(du), norm(dv));
}

double ScalarField::interpolate(Vec2 p) const {
  const auto uv = lattice_.coordinates(p);
  const double s = uv[0] * nu_;
  const double t = uv[1] * nv_;
  const double fs = std::floor(s);
  const double ft = std::floor(t);
  const int i0 = static_cast<int>(fs);
  const int j0 = static_cast<int>(ft);
  const double ds = s - fs;
  const double dt = t - ft;
  double rows[4];
  for (int a = 0; a < 4; ++a) {
    const int i = i0 - 1 + a;
    rows[a] = catmull_rom((*this)(i, j0 - 1), (*this)(i, j0), (*this)(i, j0 + 1),
                          (*this)(i, j0 + 2), dt);
  }
  return catmull_rom(rows[0], rows[1], rows[2], rows[3], ds);
}

ConformalMetric::ConformalMetric(ScalarField factor) : factor_(std::move(factor)) {
  if (std::abs(factor_.lattice().coarea() - 1.0) > 1e-9) {
    throw InvalidLattice("conformal metric requires a unit-coarea lattice");
  }
  for (double v : factor_.values()) {
    if (!(v > kMinFactor)) {
      throw InvalidFactor("conformal factor must be strictly positive");
    }
  }
}

ConformalMetric ConformalMetric::scaled(double c) const {
  ScalarField f = factor_;
  for (double& v : f.values()) {
    v *= c;
  }
  return ConformalMetric(std::move(f));
}

double field_mean(const ScalarField& field) {
  return pairwise_sum(field.values()) / static_cast<double>(field.size());
}

double mean(const ConformalMetric& metric) { return field_mean(metric.factor()); }

double area(const ConformalMetric& metric) {
  const auto f = metric.factor().values();
  std::vector<double> sq(f.size());
  std::transform(f.begin(), f.end(), sq.begin(), [](double v) { return v * v; });
  return pairwise_sum(sq) / static_cast<double>(sq.size());
}

VarianceForms variance_forms(const ConformalMetric& metric) {
  const double m = mean(metric);
  const auto f = metric.factor().values();
  std::vector<double> dev(f.size());
  std::transform(f.begin(), f.end(), dev.begin(), [m](double v) { return (v - m) * (v - m); });
  const double centered = pairwise_sum(dev) / static_cast<double>(dev.size());
  return {area(metric) - m * m, centered};
}

double variance(const ConformalMetric& metric) {
  const VarianceForms forms = variance_forms(metric);
  const double scale = std::max(area(metric), std::numeric_limits<double>::min());
  if (std::abs(forms.moment - forms.centered) > 1e-10 * scale) {
    throw NumericalError("moment and centered variance disagree");
  }
  return forms.centered;
}

ScalarField log_field(const ScalarField& field) {
  ScalarField out = field;
  for (double& v : out.values()) {
    if (!(v > 0.0)) {
      throw InvalidFactor("log of a non-positive sample");
    }
    v = std::log(v);
  }
  return out;
}

ScalarField flat_laplacian(const ScalarField& field) {
  const IndexMetric g = index_metric(field);
  ScalarField out(field.lattice(), field.nu(), field.nv(), 0.0);
  for (int i = 0; i < field.nu(); ++i) {
    for (int j = 0; j < field.nv(); ++j) {
      const double c = field(i, j);
      const double duu = field(i + 1, j) - 2.0 * c + field(i - 1, j);
      const double dvv = field(i, j + 1) - 2.0 * c + field(i, j - 1);
      const double duv = 0.25 * (field(i + 1, j + 1) - field(i + 1, j - 1) -
                                 field(i - 1, j + 1) + field(i - 1, j - 1));
      out(i, j) = g.guu * duu + 2.0 * g.guv * duv + g.gvv * dvv;
    }
  }
  return out;
}

ScalarField gradient_norm2(const ScalarField& field) {
  const IndexMetric g = index_metric(field);
  ScalarField out(field.lattice(), field.nu(), field.nv(), 0.0);
  for (int i = 0; i < field.nu(); ++i) {
    for (int j = 0; j < field.nv(); ++j) {
      const double du = 0.5 * (field(i + 1, j) - field(i - 1, j));
      const double dv = 0.5 * (field(i, j + 1) - field(i, j - 1));
      out(i, j) = g.guu * du * du + 2.0 * g.guv * du * dv + g.gvv * dv * dv;
    }
  }
  return out;
}

ScalarField gaussian_curvature(const ConformalMetric& metric) {
  const ScalarField& f = metric.factor();
  ScalarField k = flat_laplacian(log_field(f));
  auto kv = k.values();
  const auto fv = f.values();
  for (std::size_t n = 0; n < kv.size(); ++n) {
    kv[n] = -kv[n] / (fv[n] * fv[n]);
  }
  return k;
}

ScalarField gaussian_curvature_pde_form(const ConformalMetric& metric) {
  const ScalarField& f = metric.factor();
  const ScalarField lap = flat_laplacian(f);
  const ScalarField grad2 = gradient_norm2(f);
  ScalarField k(f.lattice(), f.nu(), f.nv(), 0.0);
  auto kv = k.values();
  const auto fv = f.values();
  const auto lv = lap.values();
  const auto gv = grad2.values();
  for (std::size_t n = 0; n < kv.size(); ++n) {
    const double f2 = fv[n] * fv[n];
    kv[n] = (-fv[n] * lv[n] + gv[n]) / (f2 * f2);
  }
  return k;
}

PatchField patch_laplacian(const PatchField& field) {
  PatchField out{field.origin, field.h, field.nx, field.ny,
                 std::vector<double>(field.values.size(), std::nan(""))};
  const double inv = 1.0 / (field.h * field.h);
  for (int i = 1; i + 1 < field.nx; ++i) {
    for (int j = 1; j + 1 < field.ny; ++j) {
      const double c = field(i, j);
      const double s =
          field(i + 1, j) + field(i - 1, j) + field(i, j + 1) + field(i, j - 1) - 4.0 * c;
      out(i, j) = s * inv;  // NaN neighbours propagate
    }
  }
  return out;
}

PatchField patch_curvature(const PatchField& factor) {
  PatchField logf = factor;
  for (double& v : logf.values) {
    v = v > 0.0 ? std::log(v) : std::nan("");
  }
  PatchField k = patch_laplacian(logf);
  for (std::size_t n = 0; n < k.values.size(); ++n) {
    const double f = factor.values[n];
    k.values[n] = -k.values[n] / (f * f);
  }
  return k;
}

}  // namespace systolic
