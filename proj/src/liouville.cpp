#include "systolic/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "systolic/errors.hpp"

namespace systolic {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// 4 * d/dz (z d/dz) g on increasing nodes z, conservative flux form.
std::vector<double> zeta_flux_operator(std::span<const double> z, std::span<const double> g) {
  const std::size_t n = z.size();
  std::vector<double> out(n, kNaN);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double flux_hi = 0.5 * (z[i] + z[i + 1]) * (g[i + 1] - g[i]) / (z[i + 1] - z[i]);
    const double flux_lo = 0.5 * (z[i - 1] + z[i]) * (g[i] - g[i - 1]) / (z[i] - z[i - 1]);
    out[i] = 4.0 * (flux_hi - flux_lo) / (0.5 * (z[i + 1] - z[i - 1]));
  }
  return out;
}

// Second derivative on unequally spaced nodes.
double second_difference(double tm, double t0, double tp, double um, double u0, double up) {
  const double hp = tp - t0;
  const double hm = t0 - tm;
  return 2.0 * ((up - u0) / hp - (u0 - um) / hm) / (hp + hm);
}

std::vector<double> logs_of(const PolarProfile& profile) {
  std::vector<double> u(profile.values().begin(), profile.values().end());
  for (double& v : u) {
    if (!(v > 0.0)) {
      throw InvalidFactor("profile must be strictly positive");
    }
    v = std::log(v);
  }
  return u;
}

double weighted_variance(std::span<const double> values, std::span<const double> weights) {
  std::vector<double> wv(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    wv[i] = weights[i] * values[i];
  }
  const double total = pairwise_sum(weights);
  const double m = pairwise_sum(wv) / total;
  for (std::size_t i = 0; i < values.size(); ++i) {
    wv[i] = weights[i] * (values[i] - m) * (values[i] - m);
  }
  return pairwise_sum(wv) / total;
}

}  // namespace

PolarProfile::PolarProfile(double rmax, std::vector<double> values)
    : rmax_(rmax), values_(std::move(values)) {
  if (!(rmax > 0.0) || values_.empty()) {
    throw PreconditionError("polar profile needs rmax > 0 and at least one sample");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw NumericalError("polar profile sample is not finite");
    }
  }
}

PolarProfile polar_laplacian(const PolarProfile& profile) {
  const int n = profile.size();
  if (n < 8) {
    throw InsufficientResolution("polar_laplacian needs at least 8 nodes");
  }
  const double h = profile.dr();
  const auto f = profile.values();
  std::vector<double> out(static_cast<std::size_t>(n));
  auto at = [&](int i) { return f[static_cast<std::size_t>(i)]; };
  for (int i = 0; i < n; ++i) {
    double d2;
    double d1;
    if (i == 0) {
      d2 = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (h * h);
      d1 = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    } else if (i == n - 1) {
      d2 = (2.0 * at(i) - 5.0 * at(i - 1) + 4.0 * at(i - 2) - at(i - 3)) / (h * h);
      d1 = (3.0 * at(i) - 4.0 * at(i - 1) + at(i - 2)) / (2.0 * h);
    } else {
      d2 = (at(i + 1) - 2.0 * at(i) + at(i - 1)) / (h * h);
      d1 = (at(i + 1) - at(i - 1)) / (2.0 * h);
    }
    out[static_cast<std::size_t>(i)] = d2 + d1 / profile.radius(i);
  }
  return {profile.rmax(), std::move(out)};
}

std::vector<double> zeta_operator(const PolarProfile& profile) {
  const ZetaForm z = zeta_form(profile);
  return zeta_flux_operator(z.zeta, z.values);
}

std::vector<double> t_operator(const PolarProfile& profile) {
  const int n = profile.size();
  const auto f = profile.values();
  std::vector<double> out(static_cast<std::size_t>(n), kNaN);
  for (int i = 1; i + 1 < n; ++i) {
    const double zeta = profile.radius(i) * profile.radius(i);
    const double utt = second_difference(
        2.0 * std::log(profile.radius(i - 1)), 2.0 * std::log(profile.radius(i)),
        2.0 * std::log(profile.radius(i + 1)), f[static_cast<std::size_t>(i - 1)],
        f[static_cast<std::size_t>(i)], f[static_cast<std::size_t>(i + 1)]);
    out[static_cast<std::size_t>(i)] = 4.0 / zeta * utt;
  }
  return out;
}

std::vector<double> reciprocal_liouville_operator(std::span<const double> zeta,
                                                  std::span<const double> phi) {
  if (zeta.size() != phi.size()) {
    throw PreconditionError("zeta and phi sample counts differ");
  }
  std::vector<double> logphi(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (!(phi[i] > 0.0)) {
      throw InvalidFactor("phi must be strictly positive");
    }
    logphi[i] = std::log(phi[i]);
  }
  std::vector<double> out = zeta_flux_operator(zeta, logphi);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] *= phi[i] * phi[i];
  }
  return out;
}

ScalarField liouville_residual_cartesian(const ConformalMetric& metric, const ScalarField& K) {
  const ScalarField& f = metric.factor();
  if (K.nu() != f.nu() || K.nv() != f.nv()) {
    throw PreconditionError("curvature field must share the factor's grid");
  }
  const ScalarField lap = flat_laplacian(f);
  const ScalarField grad2 = gradient_norm2(f);
  ScalarField out(f.lattice(), f.nu(), f.nv(), 0.0);
  const auto fv = f.values();
  const auto kv = K.values();
  const auto lv = lap.values();
  const auto gv = grad2.values();
  auto ov = out.values();
  for (std::size_t n = 0; n < ov.size(); ++n) {
    const double f2 = fv[n] * fv[n];
    ov[n] = -fv[n] * lv[n] + gv[n] - kv[n] * f2 * f2;
  }
  return out;
}

HolomorphicSolution::HolomorphicSolution(std::vector<std::complex<double>> coeffs)
    : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == std::complex<double>{}) {
    coeffs_.pop_back();
  }
  if (coeffs_.size() < 2) {
    throw PreconditionError("holomorphic solution needs degree >= 1 (a' not identically zero)");
  }
}

std::complex<double> HolomorphicSolution::value(std::complex<double> z) const {
  std::complex<double> acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * z + *it;
  }
  return acc;
}

std::complex<double> HolomorphicSolution::derivative(std::complex<double> z) const {
  std::complex<double> acc{};
  for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) {
    acc = acc * z + static_cast<double>(k) * coeffs_[k];
  }
  return acc;
}

double HolomorphicSolution::factor(std::complex<double> z) const {
  return std::abs(derivative(z)) / (1.0 + std::norm(value(z)));
}

std::vector<std::complex<double>> HolomorphicSolution::critical_points() const {
  // a'(z) = sum_k d_k z^k with d_k = (k+1) c_{k+1}.
  std::vector<std::complex<double>> d;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    d.push_back(static_cast<double>(k) * coeffs_[k]);
  }
  const std::size_t deg = d.size() - 1;
  if (deg == 0) {
    return {};
  }
  for (auto& c : d) {
    c /= d.back();
  }
  // Durand-Kerner on the monic derivative.
  std::vector<std::complex<double>> roots(deg);
  const std::complex<double> seed{0.4, 0.9};
  for (std::size_t k = 0; k < deg; ++k) {
    roots[k] = std::pow(seed, static_cast<double>(k));
  }
  auto eval = [&](std::complex<double> z) {
    std::complex<double> acc{};
    for (auto it = d.rbegin(); it != d.rend(); ++it) {
      acc = acc * z + *it;
    }
    return acc;
  };
  for (int iter = 0; iter < 500; ++iter) {
    double change = 0.0;
    for (std::size_t k = 0; k < deg; ++k) {
      std::complex<double> denom{1.0, 0.0};
      for (std::size_t m = 0; m < deg; ++m) {
        if (m != k) {
          denom *= roots[k] - roots[m];
        }
      }
      const std::complex<double> step = eval(roots[k]) / denom;
      roots[k] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15) {
      break;
    }
  }
  return roots;
}

HolomorphicPatch holomorphic_factor(const HolomorphicSolution& sol, const PatchSpec& spec) {
  if (spec.cells < 8 || !(spec.radius > spec.inner_radius) || spec.inner_radius < 0.0) {
    throw PreconditionError("patch needs cells >= 8 and 0 <= inner_radius < radius");
  }
  HolomorphicPatch patch;
  patch.spec = spec;
  const int n = spec.cells + 1;
  const double h = 2.0 * spec.radius / spec.cells;
  patch.factor = PatchField{{spec.center.real() - spec.radius, spec.center.imag() - spec.radius},
                            h, n, n,
                            std::vector<double>(static_cast<std::size_t>(n) *
                                                static_cast<std::size_t>(n))};
  const double slack = 1e-12 * spec.radius;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 p = patch.factor.point(i, j);
      const std::complex<double> z{p.x, p.y};
      const double r = std::abs(z - spec.center);
      const bool inside = r <= spec.radius + slack && r >= spec.inner_radius - slack;
      patch.factor(i, j) = inside ? sol.factor(z) : kNaN;
    }
  }
  for (const auto& c : sol.critical_points()) {
    const double r = std::abs(c - spec.center);
    if (r <= spec.radius && r >= spec.inner_radius) {
      patch.critical_points_inside.push_back(c);
    }
  }
  patch.degenerate = !patch.critical_points_inside.empty();
  return patch;
}

CurvatureCheck constant_curvature_check(const HolomorphicPatch& patch, double expected,
                                        double margin_fraction, double critical_exclusion) {
  const PatchField k = patch_curvature(patch.factor);
  const PatchSpec& spec = patch.spec;
  const double margin = margin_fraction * (spec.radius - spec.inner_radius);
  CurvatureCheck out;
  for (int i = 0; i < k.nx; ++i) {
    for (int j = 0; j < k.ny; ++j) {
      const Vec2 p = k.point(i, j);
      const std::complex<double> z{p.x, p.y};
      const double r = std::abs(z - spec.center);
      if (r > spec.radius - margin || (spec.inner_radius > 0.0 && r < spec.inner_radius + margin)) {
        continue;
      }
      const bool near_zero =
          std::any_of(patch.critical_points_inside.begin(), patch.critical_points_inside.end(),
                      [&](std::complex<double> c) { return std::abs(z - c) < critical_exclusion; });
      if (near_zero || !std::isfinite(k(i, j))) {
        continue;
      }
      out.max_abs_error = std::max(out.max_abs_error, std::abs(k(i, j) - expected));
      ++out.nodes_checked;
    }
  }
  return out;
}

double RiemannProfile::domain_radius() const {
  return alpha_ >= 0.0 ? std::numeric_limits<double>::infinity() : std::sqrt(-4.0 / alpha_);
}

PolarProfile riemann_profile(double alpha, double rmax, int n) {
  const RiemannProfile f0(alpha);
  if (alpha < 0.0 && rmax * rmax >= -4.0 / alpha) {
    throw InvalidDomain("Riemann profile with alpha < 0 needs rmax^2 < -4/alpha");
  }
  return PolarProfile::sample(rmax, n, f0);
}

ZetaForm zeta_form(const PolarProfile& profile) {
  ZetaForm z;
  z.zeta.reserve(static_cast<std::size_t>(profile.size()));
  for (int i = 0; i < profile.size(); ++i) {
    z.zeta.push_back(profile.radius(i) * profile.radius(i));
  }
  z.values.assign(profile.values().begin(), profile.values().end());
  return z;
}

double zeta_variance(const PolarProfile& profile) {
  std::vector<double> w(static_cast<std::size_t>(profile.size()));
  for (int i = 0; i < profile.size(); ++i) {
    w[static_cast<std::size_t>(i)] = 2.0 * i + 1.0;
  }
  return weighted_variance(profile.values(), w);
}

namespace {

template <typename Weight>
double window_variance(const PolarProfile& profile, double lo, double hi, Weight&& weight) {
  std::vector<double> v;
  std::vector<double> w;
  for (int i = 0; i < profile.size(); ++i) {
    const double zeta = profile.radius(i) * profile.radius(i);
    if (zeta >= lo && zeta <= hi) {
      v.push_back(profile[i]);
      w.push_back(weight(i));
    }
  }
  if (v.empty()) {
    throw InsufficientResolution("no profile nodes inside the zeta window");
  }
  return weighted_variance(v, w);
}

}  // namespace

double t_variance(const PolarProfile& profile, double zeta_lo, double zeta_hi) {
  // t-cell of node i is the image of [i dr, (i+1) dr] under t = 2 log r.
  return window_variance(profile, zeta_lo, zeta_hi, [](int i) {
    return i == 0 ? 2.0 * std::log(2.0) : 2.0 * std::log((i + 1.0) / i);
  });
}

double zeta_window_variance(const PolarProfile& profile, double zeta_lo, double zeta_hi) {
  return window_variance(profile, zeta_lo, zeta_hi, [](int i) { return 2.0 * i + 1.0; });
}

TOperatorReport t_operator_check(const PolarProfile& profile, double alpha, double rho) {
  if (!(rho > 0.0)) {
    throw PreconditionError("rho must be positive");
  }
  const std::vector<double> u = logs_of(profile);
  const int n = profile.size();
  auto t_at = [&](int i) { return 2.0 * std::log(profile.radius(i)); };

  TOperatorReport rep;
  rep.min_derivation_margin = std::numeric_limits<double>::infinity();
  rep.min_lemma_margin = std::numeric_limits<double>::infinity();
  rep.max_u_tt = -std::numeric_limits<double>::infinity();
  for (int i = 1; i + 1 < n; ++i) {
    const double zeta = profile.radius(i) * profile.radius(i);
    if (zeta < rho || zeta > 2.0 * rho) {
      continue;
    }
    const auto ui = static_cast<std::size_t>(i);
    const double utt =
        second_difference(t_at(i - 1), t_at(i), t_at(i + 1), u[ui - 1], u[ui], u[ui + 1]);
    const double f2 = profile[i] * profile[i];
    TOperatorNode node{zeta, utt, -utt - 0.25 * zeta * alpha * f2, -utt - 0.25 * alpha * rho * f2};
    rep.min_derivation_margin = std::min(rep.min_derivation_margin, node.derivation_margin);
    rep.min_lemma_margin = std::min(rep.min_lemma_margin, node.lemma_margin);
    rep.max_u_tt = std::max(rep.max_u_tt, utt);
    rep.nodes.push_back(node);
  }
  if (rep.nodes.size() < 8) {
    throw InsufficientResolution("fewer than 8 profile nodes in the window [rho, 2 rho]");
  }
  rep.decreasing = true;
  for (int i = 0; i + 1 < n; ++i) {
    if (!(profile[i + 1] < profile[i])) {
      rep.decreasing = false;
      break;
    }
  }
  rep.monotonicity_ok = alpha <= 0.0 || rep.decreasing;
  rep.t_variance = t_variance(profile, rho, 2.0 * rho);
  rep.zeta_variance = zeta_window_variance(profile, rho, 2.0 * rho);
  return rep;
}

}  // namespace systolic
