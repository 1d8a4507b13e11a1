#include <cmath>
#include <numbers>
#include <type_traits>

#include "systolic/errors.hpp"
#include "systolic/metric_field.hpp"

namespace systolic {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGaussianCutoff = 1e-14;

// Displacement from `d`'s nearest lattice translate, via the reduced basis.
Vec2 nearest_image(const Lattice2D& reduced, Vec2 d) {
  const auto st = reduced.coordinates(d);
  const double s0 = std::round(st[0]);
  const double t0 = std::round(st[1]);
  Vec2 best = d - reduced.point(s0, t0);
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      const Vec2 cand = d - reduced.point(s0 + a, t0 + b);
      if (norm2(cand) < norm2(best)) {
        best = cand;
      }
    }
  }
  return best;
}

// C-infinity step: 1 for s <= 0, 0 for s >= 1.
double smooth_step_down(double s) {
  if (s <= 0.0) {
    return 1.0;
  }
  if (s >= 1.0) {
    return 0.0;
  }
  const double a = std::exp(-1.0 / (1.0 - s));
  const double b = std::exp(-1.0 / s);
  return a / (a + b);
}

double riemann_f0(double alpha, double r) { return 1.0 / (1.0 + 0.25 * alpha * r * r); }

struct Sampler {
  const Lattice2D& lattice;
  Lattice2D reduced;
  int nu;
  int nv;

  double u(int i) const { return static_cast<double>(i) / nu; }
  double v(int j) const { return static_cast<double>(j) / nv; }

  double operator()(const ConstantFamily& fam, int, int) const { return fam.c; }

  double operator()(const TrigFamily& fam, int i, int j) const {
    return 1.0 + fam.epsilon * std::cos(kTwoPi * (fam.k * u(i) + fam.l * v(j)));
  }

  double operator()(const TrigPolynomialFamily& fam, int i, int j) const {
    double p = fam.constant;
    for (const TrigMode& m : fam.modes) {
      const double phase = kTwoPi * (m.k * u(i) + m.l * v(j));
      p += m.cos_coeff * std::cos(phase) + m.sin_coeff * std::sin(phase);
    }
    return fam.exponentiate ? std::exp(p) : p;
  }

  double operator()(const GaussianBumpFamily& fam, int i, int j) const {
    const Vec2 x = lattice.point(u(i), v(j));
    const Vec2 d0 = nearest_image(reduced, x - lattice.point(fam.center.x, fam.center.y));
    const double ratio = std::abs(fam.amplitude) / kGaussianCutoff;
    const double reach = ratio > 1.0 ? fam.width * std::sqrt(std::log(ratio)) : 0.0;
    const double height = reduced.coarea() / std::max(norm(reduced.b1()), norm(reduced.b2()));
    const int span = static_cast<int>(std::ceil(reach / height)) + 1;
    double sum = 0.0;
    for (int a = -span; a <= span; ++a) {
      for (int b = -span; b <= span; ++b) {
        const Vec2 d = d0 - reduced.vector(a, b);
        const double r2 = norm2(d);
        if (r2 <= reach * reach) {
          sum += std::exp(-r2 / (fam.width * fam.width));
        }
      }
    }
    return 1.0 + fam.amplitude * sum;
  }

  double operator()(const RiemannBumpFamily& fam, int i, int j) const {
    const auto radii = riemann_bump_radii(lattice, fam);
    const Vec2 x = lattice.point(u(i), v(j));
    const double r = norm(nearest_image(reduced, x - lattice.point(fam.center.x, fam.center.y)));
    const double w = smooth_step_down((r - radii[0]) / (radii[1] - radii[0]));
    const double outer = riemann_f0(fam.alpha, radii[1]);
    if (w == 1.0) {
      return riemann_f0(fam.alpha, r);
    }
    if (w == 0.0) {
      return outer;
    }
    return w * riemann_f0(fam.alpha, r) + (1.0 - w) * outer;
  }
};

}  // namespace

std::array<double, 2> riemann_bump_radii(const Lattice2D& lattice, const RiemannBumpFamily& family) {
  const double l1 = lambda1(lattice);
  const double inner = family.inner_radius > 0.0 ? family.inner_radius : 0.3 * l1;
  const double outer = family.outer_radius > 0.0 ? family.outer_radius : 0.48 * l1;
  if (!(outer > inner) || outer >= 0.5 * l1) {
    throw PreconditionError("riemann-bump radii must satisfy inner < outer < lambda1/2");
  }
  if (family.alpha < 0.0 && outer * outer >= -4.0 / family.alpha) {
    throw InvalidDomain("riemann-bump with alpha < 0 requires outer_radius^2 < -4/alpha");
  }
  return {inner, outer};
}

ScalarField from_analytic(const Lattice2D& lattice, int nu, int nv, const AnalyticFamily& family) {
  if (nu < 8 || nv < 8) {
    throw PreconditionError("grid counts must be >= 8");
  }
  const Sampler sampler{lattice, gauss_reduce(lattice), nu, nv};
  std::vector<double> values(static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv));
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const double f = std::visit([&](const auto& fam) { return sampler(fam, i, j); }, family);
      if (!std::isfinite(f) || f <= kMinFactor) {
        throw InvalidFactor("analytic family produced a non-positive conformal factor");
      }
      values[static_cast<std::size_t>(i) * static_cast<std::size_t>(nv) +
             static_cast<std::size_t>(j)] = f;
    }
  }
  return {lattice, nu, nv, std::move(values)};
}

}  // namespace systolic
