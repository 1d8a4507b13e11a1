#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>

#include "systolic/errors.hpp"
#include "systolic/liouville.hpp"

using namespace systolic;
using cd = std::complex<double>;

namespace {

double max_interior_error(std::span<const double> got, const PolarProfile& p, auto&& exact,
                          double rlo = 0.0, double rhi = INFINITY) {
  double e = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    const double r = p.radius(i);
    if (r >= rlo && r <= rhi && std::isfinite(got[static_cast<std::size_t>(i)])) {
      e = std::max(e, std::abs(got[static_cast<std::size_t>(i)] - exact(r)));
    }
  }
  return e;
}

// Normalised disk moments by an independent polar midpoint rule.
std::array<double, 2> disk_mean_and_variance(const PolarProfile& p, int ntheta) {
  double w = 0.0;
  double s1 = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    for (int j = 0; j < ntheta; ++j) {
      w += p.radius(i);
      s1 += p.radius(i) * p[i];
    }
  }
  const double m = s1 / w;
  double s2 = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    for (int j = 0; j < ntheta; ++j) {
      s2 += p.radius(i) * (p[i] - m) * (p[i] - m);
    }
  }
  return {m, s2 / w};
}

}  // namespace

TEST_CASE("polar_laplacian examples") {
  const PolarProfile c = PolarProfile::sample(1.0, 16, [](double) { return 3.0; });
  const PolarProfile lc = polar_laplacian(c);
  for (double v : lc.values()) {
    CHECK(v == doctest::Approx(0.0));
  }
  const PolarProfile q = PolarProfile::sample(1.0, 16, [](double r) { return r * r; });
  const PolarProfile lq = polar_laplacian(q);
  for (double v : lq.values()) {
    CHECK(v == doctest::Approx(4.0).epsilon(1e-10));
  }
  const PolarProfile lg = PolarProfile::sample(2.0, 400, [](double r) { return std::log(r); });
  CHECK(max_interior_error(polar_laplacian(lg).values(), lg, [](double) { return 0.0; }, 1.0, 2.0) <
        1e-4);
  CHECK_THROWS_AS(polar_laplacian(PolarProfile::sample(1.0, 7, [](double) { return 1.0; })),
                  InsufficientResolution);
}

TEST_CASE("T written three ways agree") {
  double prev = 0.0;
  for (int n : {100, 200, 400}) {
    const PolarProfile p = PolarProfile::sample(1.5, n, [](double r) { return std::exp(-r * r); });
    const PolarProfile lap = polar_laplacian(p);
    const auto z = zeta_operator(p);
    const auto t = t_operator(p);
    // Exact: (r^2 e^{-r^2})'' ... Lap e^{-r^2} = (4 r^2 - 4) e^{-r^2}.
    auto exact = [](double r) { return (4 * r * r - 4) * std::exp(-r * r); };
    const double e1 = max_interior_error(lap.values(), p, exact, 0.2, 1.3);
    const double e2 = max_interior_error(z, p, exact, 0.2, 1.3);
    const double e3 = max_interior_error(t, p, exact, 0.2, 1.3);
    CHECK(e1 < 10.0 / (n * n));
    CHECK(e2 < 10.0 / (n * n));
    // The t-grid is non-uniform, so its error constant is larger.
    CHECK(e3 < 200.0 / (n * n));
    if (prev > 0) {
      CHECK(prev / std::max({e1, e2, e3}) == doctest::Approx(4.0).epsilon(0.15));
    }
    prev = std::max({e1, e2, e3});
  }
}

TEST_CASE("linear phi solves the reciprocal equation") {
  for (double k : {-4.0, 0.5, 4.0}) {
    const int n = 10000;
    std::vector<double> zeta(n);
    std::vector<double> phi(n);
    for (int i = 0; i < n; ++i) {
      zeta[i] = 0.5 * (i + 1) / n;
      phi[i] = 1.0 + 0.25 * k * zeta[i];
    }
    const auto lhs = reciprocal_liouville_operator(zeta, phi);
    double err = 0.0;
    for (double v : lhs) {
      if (std::isfinite(v)) {
        err = std::max(err, std::abs(v - k));
      }
    }
    CHECK(err <= 1e-6);
  }
}

TEST_CASE("Cartesian Liouville residual") {
  const Lattice2D z = Lattice2D::square();
  const ConformalMetric one(from_analytic(z, 32, 32, ConstantFamily{}));
  const ScalarField r0 = liouville_residual_cartesian(one, ScalarField(z, 32, 32, 0.0));
  for (double v : r0.values()) {
    CHECK(v == 0.0);
  }
  const ScalarField r1 = liouville_residual_cartesian(one, ScalarField(z, 32, 32, 1.0));
  for (double v : r1.values()) {
    CHECK(v == -1.0);
  }

  // Riemann bump: inside the inner radius the residual against K = 4 is O(h^2).
  double prev = 0.0;
  for (int n : {64, 128, 256}) {
    const RiemannBumpFamily rb;
    const ConformalMetric m(from_analytic(z, n, n, rb));
    const ScalarField res = liouville_residual_cartesian(m, ScalarField(z, n, n, 4.0));
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (norm(res.point(i, j) - Vec2{0.5, 0.5}) < 0.25) {
          err = std::max(err, std::abs(res(i, j)));
        }
      }
    }
    if (prev > 0) {
      CHECK(prev / err == doctest::Approx(4.0).epsilon(0.125));
    }
    prev = err;
  }

  // Residual against the computed curvature converges for a smooth family.
  prev = 0.0;
  for (int n : {32, 64, 128}) {
    const ConformalMetric m(from_analytic(z, n, n, GaussianBumpFamily{0.3, 0.2, {0.5, 0.5}}));
    const ScalarField res = liouville_residual_cartesian(m, gaussian_curvature(m));
    double err = 0.0;
    for (double v : res.values()) {
      err = std::max(err, std::abs(v));
    }
    if (prev > 0) {
      CHECK(prev / err > 3.5);
    }
    prev = err;
  }
}

TEST_CASE("holomorphic solutions") {
  CHECK_THROWS_AS(HolomorphicSolution({cd(1.0)}), PreconditionError);
  CHECK_THROWS_AS(HolomorphicSolution({cd(1.0), cd(0.0)}), PreconditionError);

  const HolomorphicSolution a1({0.0, 1.0});
  const RiemannProfile f0(4.0);
  for (double x : {0.0, 0.3, 0.9}) {
    CHECK(a1.factor(cd(x, 0.4 * x)) == doctest::Approx(f0(std::hypot(x, 0.4 * x))).epsilon(1e-15));
  }

  const HolomorphicSolution a2({0.0, 2.0});
  CHECK(a2.factor(cd(0.5, 0.0)) == doctest::Approx(2.0 / (1.0 + 4.0 * 0.25)));
  PatchSpec spec;
  spec.cells = 128;
  const CurvatureCheck c2 = constant_curvature_check(holomorphic_factor(a2, spec), 4.0);
  CHECK(c2.nodes_checked > 1000);
  CHECK(c2.max_abs_error < 0.01);

  const HolomorphicSolution sq({0.0, 0.0, 1.0});
  PatchSpec ann;
  ann.radius = 1.0;
  ann.inner_radius = 0.5;
  ann.cells = 128;
  const HolomorphicPatch pa = holomorphic_factor(sq, ann);
  CHECK_FALSE(pa.degenerate);
  CHECK(sq.factor(cd(0.0, 0.8)) == doctest::Approx(2 * 0.8 / (1 + std::pow(0.8, 4))));
  const CurvatureCheck ca = constant_curvature_check(pa, 4.0);
  CHECK(ca.nodes_checked > 100);
  CHECK(ca.max_abs_error < 0.02);

  // a' = 2z vanishes at the origin: flagged, and outside an excluded disk
  // around the zero the curvature still converges to 4 at second order.
  const HolomorphicPatch pd = holomorphic_factor(sq, PatchSpec{});
  CHECK(pd.degenerate);
  REQUIRE(pd.critical_points_inside.size() == 1);
  CHECK(std::abs(pd.critical_points_inside[0]) < 1e-9);
  double prev = 0.0;
  for (int cells : {64, 128, 256}) {
    PatchSpec ps;
    ps.cells = cells;
    const CurvatureCheck cd0 = constant_curvature_check(holomorphic_factor(sq, ps), 4.0, 0.25, 0.2);
    CHECK(cd0.nodes_checked > 0);
    if (prev > 0) {
      CHECK(prev / cd0.max_abs_error == doctest::Approx(4.0).epsilon(0.15));
    }
    prev = cd0.max_abs_error;
  }

  const auto cp = HolomorphicSolution({0.0, 1.0, 1.0}).critical_points();
  REQUIRE(cp.size() == 1);
  CHECK(std::abs(cp[0] - cd(-0.5, 0.0)) < 1e-12);
}

TEST_CASE("riemann_profile examples") {
  const PolarProfile flat = riemann_profile(0.0, 3.0, 16);
  for (double v : flat.values()) {
    CHECK(v == 1.0);
  }
  CHECK(RiemannProfile(4.0)(1.0) == 0.5);
  const PolarProfile h = riemann_profile(-4.0, 0.9, 32);
  for (int i = 0; i < h.size(); ++i) {
    CHECK(h[i] == doctest::Approx(1.0 / (1.0 - h.radius(i) * h.radius(i))));
  }
  CHECK_THROWS_AS(riemann_profile(-4.0, 1.0, 32), InvalidDomain);
  CHECK_THROWS_AS(riemann_profile(-4.0, 1.5, 32), InvalidDomain);
  CHECK(RiemannProfile(-4.0).domain_radius() == doctest::Approx(1.0));
}

TEST_CASE("zeta_form examples") {
  const ZetaForm c = zeta_form(PolarProfile::sample(2.0, 10, [](double) { return 1.5; }));
  for (double v : c.values) {
    CHECK(v == 1.5);
  }
  const PolarProfile rp = riemann_profile(4.0, 1.0, 20);
  const ZetaForm r = zeta_form(rp);
  for (std::size_t i = 0; i < r.zeta.size(); ++i) {
    CHECK(r.zeta[i] == doctest::Approx(rp.radius(static_cast<int>(i)) * rp.radius(static_cast<int>(i))));
    CHECK(r.values[i] == doctest::Approx(1.0 / (1.0 + r.zeta[i])));
  }
  const ZetaForm lin = zeta_form(PolarProfile::sample(1.0, 20, [](double x) { return x; }));
  for (std::size_t i = 0; i < lin.zeta.size(); ++i) {
    CHECK(lin.values[i] == doctest::Approx(std::sqrt(lin.zeta[i])));
  }
}

TEST_CASE("zeta_variance examples") {
  CHECK(zeta_variance(PolarProfile::sample(1.0, 50, [](double) { return 2.0; })) == doctest::Approx(0.0));

  // f~(zeta) = zeta on [0, 1] is uniform: variance 1/12.
  const PolarProfile sq = PolarProfile::sample(1.0, 2000, [](double r) { return r * r; });
  CHECK(zeta_variance(sq) == doctest::Approx(1.0 / 12.0).epsilon(1e-5));

  // Riemann alpha = 4 on the unit disk: E = ln 2, E f^2 = 1/2.
  const PolarProfile rp = riemann_profile(4.0, 1.0, 4000);
  const double exact = 0.5 - std::log(2.0) * std::log(2.0);
  CHECK(zeta_variance(rp) == doctest::Approx(exact).epsilon(1e-6));
  // Independent 2D quadrature at matched resolution.
  const auto mv = disk_mean_and_variance(riemann_profile(4.0, 1.0, 400), 64);
  CHECK(std::abs(mv[1] - zeta_variance(riemann_profile(4.0, 1.0, 400))) <= 1e-8 * mv[1]);
}

TEST_CASE("t_operator_check examples") {
  // Riemann alpha = 4: -u''(t) = zeta / (1 + zeta)^2 = (zeta / 4) * 4 * f0^2.
  const PolarProfile rp = riemann_profile(4.0, 2.0, 4000);
  const TOperatorReport r = t_operator_check(rp, 4.0, 0.5);
  REQUIRE(r.nodes.size() >= 8);
  CHECK(r.decreasing);
  CHECK(r.monotonicity_ok);
  CHECK(r.max_u_tt < 0);
  CHECK(std::abs(r.min_derivation_margin) < 1e-6);
  for (const TOperatorNode& node : r.nodes) {
    CHECK(node.zeta >= 0.5);
    CHECK(node.zeta <= 1.0);
    CHECK(node.u_tt == doctest::Approx(-node.zeta / ((1 + node.zeta) * (1 + node.zeta))).epsilon(1e-5));
    CHECK(node.lemma_margin >= node.derivation_margin - 1e-12);
  }
  CHECK(r.t_variance > 0);
  CHECK(r.zeta_variance > 0);

  const TOperatorReport c = t_operator_check(PolarProfile::sample(1.0, 200, [](double) { return 2.0; }), 0.0, 0.25);
  CHECK(c.max_u_tt == doctest::Approx(0.0));
  CHECK(c.min_derivation_margin == doctest::Approx(0.0));
  CHECK(c.monotonicity_ok);

  const TOperatorReport inc =
      t_operator_check(PolarProfile::sample(1.0, 200, [](double x) { return 1.0 + x; }), 4.0, 0.25);
  CHECK_FALSE(inc.decreasing);
  CHECK_FALSE(inc.monotonicity_ok);

  CHECK_THROWS_AS(t_operator_check(riemann_profile(4.0, 1.0, 10), 4.0, 0.25), InsufficientResolution);
}

TEST_CASE("variance sweep") {
  SweepOptions small;
  small.radial_nodes = 40;
  small.angular_nodes = 32;
  const SweepTable empty = variance_sweep_experiment(4.0, 0.5, 0, 1, small);
  CHECK(empty.samples.empty());
  CHECK(empty.riemann.id == "riemann");
  CHECK(empty.riemann.variance > 0);

  // a(z) = (sqrt(alpha)/2) z rescales to Riemann's profile exactly.
  for (double alpha : {4.0, 1.0}) {
    const SweepTable t = variance_sweep_experiment(alpha, 0.5, 0, 1, small);
    const SweepRow row = sweep_row_for(HolomorphicSolution({0.0, std::sqrt(alpha) / 2}), alpha, 0.5,
                                       t.riemann.l2norm, small);
    CHECK(row.variance == doctest::Approx(t.riemann.variance).epsilon(1e-12));
    CHECK(row.l2norm == doctest::Approx(t.riemann.l2norm).epsilon(1e-12));
  }

  const SweepTable a = variance_sweep_experiment(4.0, 0.5, 10, 42, small);
  const SweepTable b = variance_sweep_experiment(4.0, 0.5, 10, 42, small);
  std::ostringstream sa;
  std::ostringstream sb;
  write_sweep_csv(sa, a);
  write_sweep_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(a.samples.size() == 10);
  CHECK(sa.str().rfind("id,degree,l2norm,variance\nriemann,0,", 0) == 0);
  for (const SweepRow& r : a.samples) {
    CHECK(r.degree >= 1);
    CHECK(r.degree <= 4);
    CHECK(r.variance >= 0);
  }

  CHECK_THROWS_AS(variance_sweep_experiment(0.0, 0.5, 1, 1), PreconditionError);
  CHECK_THROWS_AS(variance_sweep_experiment(4.0, -1.0, 1, 1), PreconditionError);
}
