// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "random_fields.hpp"
#include "systolic/averaging.hpp"
#include "systolic/defect_report.hpp"
#include "systolic/liouville.hpp"
#include "systolic/systole.hpp"

using namespace systolic;
using cd = std::complex<double>;

namespace {

const double kSqrt3Over2 = std::sqrt(3.0) / 2.0;

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = budget_s <= 0 || secs <= budget_s;
  const bool pass = o.ok && in_time;
  failures += pass ? 0 : 1;
  std::printf("%s  [%d] %s: %s (%.1f s%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              o.detail.c_str(), secs, in_time ? "" : ", over budget");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool ratios_in_band(const std::vector<double>& errs, std::string& text) {
  bool ok = true;
  for (std::size_t i = 0; i < errs.size(); ++i) {
    text += fmt("%s%.3e", i ? " " : "errors ", errs[i]);
  }
  text += "; ratios";
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double r = errs[i - 1] / errs[i];
    text += fmt(" %.3f", r);
    ok = ok && r >= 3.5 && r <= 4.5;
  }
  return ok;
}

ConformalMetric flat(const Lattice2D& l) {
  return ConformalMetric(from_analytic(l, 128, 128, ConstantFamily{}));
}

// Normalised disk moments by a 2D polar midpoint rule, ntheta samples per ring.
double disk_variance_2d(const PolarProfile& p, int ntheta) {
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
  return s2 / w;
}

}  // namespace

int main() {
  criterion(1, "flat equality cases at 128x128", 60.0, [] {
    const auto t0 = std::chrono::steady_clock::now();
    const DefectReport e = build_report(flat(Lattice2D::eisenstein()));
    const double te = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const DefectReport z = build_report(flat(Lattice2D::square()));
    const double tz = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() - te;
    const double de = std::abs(e.area - kSqrt3Over2 * e.sys * e.sys);
    const double dz = std::abs(z.area - z.sys * z.sys);
    const bool ok = de <= 0.02 && e.variance <= 1e-15 && dz <= 0.02 && te < 30 && tz < 30;
    return Outcome{ok, fmt("eisenstein |area-(sqrt3/2)sys^2| = %.2e, var = %.1e (%.2f s); "
                           "Z^2 |area-sys^2| = %.2e (%.2f s)",
                           de, e.variance, te, dz, tz)};
  });

  criterion(2, "riemann-bump curvature converges at second order", 60.0, [] {
    const RiemannBumpFamily rb;
    std::vector<double> errs;
    for (int n : {32, 64, 128, 256}) {
      const ConformalMetric m(from_analytic(Lattice2D::square(), n, n, rb));
      const ScalarField k = gaussian_curvature(m);
      double err = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (norm(k.point(i, j) - rb.center) <= 0.25) {
            err = std::max(err, std::abs(k(i, j) - 4.0));
          }
        }
      }
      errs.push_back(err);
    }
    std::string text = "r <= 0.25, grids 32..256: ";
    const bool ok = ratios_in_band(errs, text);
    return Outcome{ok, text};
  });

  criterion(3, "holomorphic factors have curvature 4", 0.0, [] {
    struct Case {
      const char* name;
      HolomorphicSolution sol;
      cd center;
    };
    const std::vector<Case> cases{{"z", HolomorphicSolution({0.0, 1.0}), 0.0},
                                  {"2z", HolomorphicSolution({0.0, 2.0}), 0.0},
                                  {"z^2+z", HolomorphicSolution({0.0, 1.0, 1.0}), cd(0.5, 0.0)}};
    bool ok = true;
    std::string text;
    for (const Case& c : cases) {
      std::vector<double> errs;
      for (int cells : {32, 64, 128, 256}) {
        PatchSpec spec;
        spec.center = c.center;
        spec.radius = 0.5;
        spec.cells = cells;
        const HolomorphicPatch patch = holomorphic_factor(c.sol, spec);
        ok = ok && !patch.degenerate;
        errs.push_back(constant_curvature_check(patch, 4.0).max_abs_error);
      }
      text += fmt("%s%s: ", text.empty() ? "" : "; ", c.name);
      ok = ratios_in_band(errs, text) && ok;
    }
    return Outcome{ok, text};
  });

  criterion(4, "linear phi satisfies the reciprocal equation", 0.0, [] {
    bool ok = true;
    std::string text = "max error";
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
      int finite = 0;
      for (double v : lhs) {
        if (std::isfinite(v)) {
          err = std::max(err, std::abs(v - k));
          ++finite;
        }
      }
      ok = ok && err <= 1e-6 && finite >= n - 2;
      text += fmt(" K=%g: %.2e", k, err);
    }
    return Outcome{ok, text};
  });

  std::vector<DefectReport> corpus;
  criterion(5, "inequality chain on the seed-42 corpus", 600.0, [&] {
    corpus = build_reports(random_corpus(100, 42), 0);
    int sharp = 0;
    int loewner = 0;
    double worst_identity = 0.0;
    double min_sharp_slack = INFINITY;
    for (const DefectReport& r : corpus) {
      sharp += r.sharp_pass ? 1 : 0;
      loewner += r.loewner_pass ? 1 : 0;
      const double expect = (r.tau.sigma2() - kSqrt3Over2) * r.sys * r.sys;
      worst_identity = std::max(worst_identity, std::abs(r.loewner_lhs - r.sharp_lhs - expect));
      min_sharp_slack = std::min(min_sharp_slack, r.sharp_lhs - r.variance);
    }
    const bool ok = sharp == 100 && loewner == 100 && worst_identity <= 1e-9;
    return Outcome{ok, fmt("sharp %d/100, loewner %d/100, min sharp slack %.4f, identity error %.1e",
                           sharp, loewner, min_sharp_slack, worst_identity)};
  });

  criterion(6, "averaging properties on 50 random disk fields", 60.0, [] {
    double mean_gap = 0.0;
    double var_excess = -INFINITY;
    double jensen = INFINITY;
    bool idempotent = true;
    for (std::uint64_t seed = 1001; seed <= 1050; ++seed) {
      const DiskField h = testing::random_disk_field(seed);
      const VarianceMonotonicity vm = variance_monotonicity_check(h);
      mean_gap = std::max(mean_gap, std::abs(vm.mean_h - vm.mean_hav));
      var_excess = std::max(var_excess, vm.var_hav - vm.var_h);

      std::vector<double> e(h.samples().begin(), h.samples().end());
      for (double& x : e) {
        x = std::exp(x);
      }
      jensen = std::min(jensen, jensen_exp_check(DiskField(h.center(), h.radius(), h.nr(), h.ntheta(),
                                                           std::move(e))).min_slack);

      const PolarProfile once = rotational_average(h);
      const PolarProfile twice = rotational_average(DiskField::broadcast(h.center(), once, h.ntheta()));
      for (int i = 0; i < once.size(); ++i) {
        idempotent = idempotent && once[i] == twice[i];
      }
    }
    const bool ok = mean_gap <= 1e-10 && var_excess <= 1e-12 && jensen >= -1e-12 && idempotent;
    return Outcome{ok, fmt("|E h_av - E h| <= %.1e, max var(h_av)-var(h) = %.2e, min Jensen slack %.1e, "
                           "idempotent %s",
                           mean_gap, var_excess, jensen, idempotent ? "yes" : "no")};
  });

  criterion(7, "zeta variance equals disk variance for Riemann's profile", 0.0, [] {
    const PolarProfile p = riemann_profile(4.0, 1.0, 400);
    const double z = zeta_variance(p);
    const double d = disk_variance_2d(p, 64);
    return Outcome{std::abs(z - d) <= 1e-8,
                   fmt("zeta %.12f, disk %.12f, |diff| %.1e", z, d, std::abs(z - d))};
  });

  criterion(8, "Fubini bound on the corpus and equality for flat metrics", 0.0, [&] {
    int pass = 0;
    for (const DefectReport& r : corpus) {
      pass += r.fubini_pass ? 1 : 0;
    }
    bool eq = true;
    std::string flat_text;
    for (const Lattice2D& l : {Lattice2D::eisenstein(), Lattice2D::square()}) {
      const DefectReport r = build_report(flat(l));
      const double gap = std::abs(r.mean - r.fubini_rhs);
      eq = eq && gap <= r.tol;
      flat_text += fmt(" %.1e", gap);
    }
    const bool ok = !corpus.empty() && pass == static_cast<int>(corpus.size()) && eq;
    return Outcome{ok, fmt("corpus %d/%zu; flat |E f - sigma sys|", pass, corpus.size()) + flat_text};
  });

  criterion(9, "Riemann profile monotone, log-concave in t, t-operator margins", 0.0, [] {
    const PolarProfile p = riemann_profile(4.0, 2.0, 4000);
    bool decreasing = true;
    for (int i = 1; i < p.size(); ++i) {
      decreasing = decreasing && p[i] < p[i - 1];
    }
    // Divided second differences of u = log f against t = log r^2.
    double max_d2 = -INFINITY;
    for (int i = 2; i + 1 < p.size(); ++i) {
      const double t0 = 2 * std::log(p.radius(i - 1));
      const double t1 = 2 * std::log(p.radius(i));
      const double t2 = 2 * std::log(p.radius(i + 1));
      const double s1 = (std::log(p[i]) - std::log(p[i - 1])) / (t1 - t0);
      const double s2 = (std::log(p[i + 1]) - std::log(p[i])) / (t2 - t1);
      max_d2 = std::max(max_d2, 2 * (s2 - s1) / (t2 - t0));
    }
    bool ok = decreasing && max_d2 <= 1e-9;
    std::string text = fmt("decreasing %s, max u'' %.2e", decreasing ? "yes" : "no", max_d2);
    for (double rho : {0.25, 0.5}) {
      const TOperatorReport r = t_operator_check(p, 4.0, rho);
      ok = ok && r.min_derivation_margin >= -1e-6 && r.max_u_tt <= 1e-9 && r.monotonicity_ok;
      text += fmt("; rho %.2f margin %.1e (%zu nodes)", rho, r.min_derivation_margin, r.nodes.size());
    }
    return Outcome{ok, text};
  });

  criterion(10, "seed-42 sweep CSV is deterministic with the Riemann row", 0.0, [] {
    std::ostringstream a;
    std::ostringstream b;
    write_sweep_csv(a, variance_sweep_experiment(4.0, 0.5, 20, 42));
    write_sweep_csv(b, variance_sweep_experiment(4.0, 0.5, 20, 42));
    const bool riemann = a.str().find("\nriemann,0,") != std::string::npos;
    return Outcome{a.str() == b.str() && riemann,
                   fmt("identical %s, riemann row %s", a.str() == b.str() ? "yes" : "no",
                       riemann ? "present" : "missing")};
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures == 0 ? 0 : 1;
}
