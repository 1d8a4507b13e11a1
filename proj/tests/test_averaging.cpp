#include <doctest.h>

#include <cmath>

#include "random_fields.hpp"
#include "systolic/averaging.hpp"
#include "systolic/errors.hpp"

using namespace systolic;

namespace {

DiskField polar(double radius, int nr, int nt, auto&& fn) {
  return DiskField::sample({0.0, 0.0}, radius, nr, nt, fn);
}

DiskField exp_of(const DiskField& h) {
  std::vector<double> v(h.samples().begin(), h.samples().end());
  for (double& x : v) {
    x = std::exp(x);
  }
  return {h.center(), h.radius(), h.nr(), h.ntheta(), std::move(v)};
}

// I0(2) = sum 1 / (k!)^2.
double bessel_i0_of_2() {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    term /= static_cast<double>(k) * k;
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("disk field preconditions") {
  CHECK_THROWS_AS(DiskField({0, 0}, 1.0, 4, 15, std::vector<double>(60, 1.0)), PreconditionError);
  CHECK_THROWS_AS(DiskField({0, 0}, 1.0, 4, 18, std::vector<double>(60, 1.0)), PreconditionError);
  CHECK_THROWS_AS(DiskField({0, 0}, 0.0, 4, 16, std::vector<double>(64, 1.0)), PreconditionError);
  CHECK_THROWS_AS(DiskField({0, 0}, 1.0, 4, 16, std::vector<double>(64, NAN)), NumericalError);
}

TEST_CASE("rotational_average examples") {
  const PolarProfile s = rotational_average(polar(1.0, 20, 32, [](double, double t) { return std::sin(t); }));
  for (double v : s.values()) {
    CHECK(std::abs(v) < 1e-15);
  }
  const DiskField inv = polar(1.0, 20, 32, [](double r, double) { return std::exp(r); });
  const PolarProfile a = rotational_average(inv);
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a[i] == inv(i, 0));
  }
  const PolarProfile q =
      rotational_average(polar(1.0, 20, 32, [](double r, double t) { return r * std::cos(t) + r * r; }));
  for (int i = 0; i < q.size(); ++i) {
    CHECK(q[i] == doctest::Approx(q.radius(i) * q.radius(i)).epsilon(1e-14));
  }
}

TEST_CASE("log_average examples") {
  const PolarProfile c = log_average(polar(1.0, 10, 16, [](double, double) { return 2.5; }));
  for (double v : c.values()) {
    CHECK(v == doctest::Approx(2.5).epsilon(1e-15));
  }
  const PolarProfile s = log_average(polar(1.0, 10, 32, [](double, double t) { return std::exp(std::sin(t)); }));
  for (double v : s.values()) {
    CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  }
  const PolarProfile g = log_average(
      polar(1.0, 10, 32, [](double r, double t) { return (1 + r * r) * std::exp(std::cos(t)); }));
  for (int i = 0; i < g.size(); ++i) {
    CHECK(g[i] == doctest::Approx(1 + g.radius(i) * g.radius(i)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(log_average(polar(1.0, 10, 16, [](double, double t) { return std::cos(t); })),
                  InvalidFactor);
}

TEST_CASE("jensen_exp_check examples") {
  const JensenReport inv = jensen_exp_check(polar(1.0, 10, 16, [](double r, double) { return 1 + r; }));
  CHECK(inv.ok);
  for (double s : inv.slack) {
    CHECK(std::abs(s) < 1e-14);
  }

  // h = cos(theta): av(e^{2 cos}) = I0(2) >= e^0 = 1.
  const JensenReport c = jensen_exp_check(polar(1.0, 4, 64, [](double, double t) { return std::exp(std::cos(t)); }));
  CHECK(c.ok);
  for (double s : c.slack) {
    CHECK(s + 1.0 == doctest::Approx(bessel_i0_of_2()).epsilon(1e-14));
  }
  CHECK(bessel_i0_of_2() == doctest::Approx(2.2796).epsilon(1e-4));

  const JensenReport z = jensen_exp_check(polar(1.0, 4, 16, [](double, double) { return 1.0; }));
  CHECK(z.ok);
  CHECK(z.min_slack == 0.0);
}

TEST_CASE("averaged inequality") {
  const RiemannProfile f0(4.0);
  const DiskField riemann = polar(1.0, 400, 32, [&](double r, double) { return f0(r); });
  const AveragedInequalityReport r = averaged_inequality_check(riemann, 4.0);
  CHECK(r.hypothesis_ok);
  CHECK(r.proof_ok);
  CHECK(std::abs(r.min_proof_margin) <= r.tolerance);
  // The e^{h_av} display is violated wherever f0 < 1.
  CHECK_FALSE(r.displayed_ok);

  const AveragedInequalityReport c = averaged_inequality_check(polar(1.0, 50, 16, [](double, double) { return 1.7; }), 0.0);
  CHECK(c.hypothesis_ok);
  CHECK(c.proof_ok);
  CHECK(c.displayed_ok);
  CHECK(std::abs(c.min_proof_margin) < 1e-9);

  // Harmonic perturbation f0 e^{0.01 x}: K = 4 e^{-0.02 x} >= 4 e^{-0.02 R}.
  const double radius = 1.0;
  const double alpha_p = 4.0 * std::exp(-0.02 * radius);
  const DiskField pert = polar(radius, 400, 64, [&](double rr, double t) {
    return f0(rr) * std::exp(0.01 * rr * std::cos(t));
  });
  const AveragedInequalityReport p = averaged_inequality_check(pert, alpha_p);
  CHECK(p.hypothesis_ok);
  CHECK(p.min_curvature >= alpha_p - 0.02 * alpha_p);
  CHECK(p.proof_ok);

  // Hypothesis failure is reported, checks still run.
  const AveragedInequalityReport bad = averaged_inequality_check(riemann, 10.0);
  CHECK_FALSE(bad.hypothesis_ok);
  CHECK_FALSE(bad.lhs.empty());
}

TEST_CASE("variance_monotonicity examples") {
  const VarianceMonotonicity inv = variance_monotonicity_check(polar(1.0, 30, 16, [](double r, double) { return r * r; }));
  CHECK(inv.ok);
  CHECK(inv.var_h == inv.var_hav);

  const VarianceMonotonicity s = variance_monotonicity_check(polar(1.0, 30, 32, [](double, double t) { return std::sin(t); }));
  CHECK(s.ok);
  CHECK(s.var_h == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(s.var_hav) < 1e-30);

  // h = r + sin(theta): E r = 2/3, E r^2 = 1/2, var(r) = 1/18 on the unit disk.
  const VarianceMonotonicity m = variance_monotonicity_check(
      polar(1.0, 400, 32, [](double r, double t) { return r + std::sin(t); }));
  CHECK(m.ok);
  CHECK(m.var_hav == doctest::Approx(1.0 / 18.0).epsilon(1e-4));
  CHECK(m.var_h - m.var_hav == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("averaging properties on random fields") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const DiskField h = testing::random_disk_field(seed);
    const VarianceMonotonicity vm = variance_monotonicity_check(h);
    CHECK(vm.means_agree);
    CHECK(vm.ok);

    const PolarProfile once = rotational_average(h);
    const PolarProfile twice = rotational_average(DiskField::broadcast(h.center(), once, h.ntheta()));
    for (int i = 0; i < once.size(); ++i) {
      CHECK(once[i] == twice[i]);
    }

    const DiskField f = exp_of(h);
    const JensenReport j = jensen_exp_check(f);
    CHECK(j.min_slack >= -1e-12);

    // AM-GM: log average below arithmetic average.
    const PolarProfile la = log_average(f);
    const PolarProfile aa = rotational_average(f);
    for (int i = 0; i < la.size(); ++i) {
      CHECK(la[i] <= aa[i] + 1e-12);
    }
  }
}

TEST_CASE("disk field interpolation reproduces smooth fields") {
  const DiskField f = DiskField::sample({0.3, -0.2}, 1.0, 64, 64,
                                       [](double r, double t) { return 1 + r * r + 0.3 * r * std::cos(t); });
  for (double x : {-0.5, 0.0, 0.01, 0.4}) {
    for (double y : {-0.3, 0.0, 0.2}) {
      const double r = std::hypot(x, y);
      const double t = std::atan2(y, x);
      CHECK(f.interpolate({0.3 + x, -0.2 + y}) ==
            doctest::Approx(1 + r * r + 0.3 * r * std::cos(t)).epsilon(1e-4));
    }
  }
}
