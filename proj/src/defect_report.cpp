#include "systolic/defect_report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>

#include "systolic/errors.hpp"

namespace systolic {

namespace {

const double kSqrt3Over2 = std::sqrt(3.0) / 2.0;

}  // namespace

DefectReport build_report(const ConformalMetric& metric, const SystoleOptions& options) {
  DefectReport rep;
  rep.tau = tau_of(metric.lattice());
  rep.area = area(metric);
  rep.mean = mean(metric);
  rep.variance = variance(metric);

  const SystoleResult s = systole(metric, options);
  rep.sys = s.sys;
  rep.witness_class = s.witness_class;
  rep.classes_examined = s.classes_examined;

  const double sys2 = rep.sys * rep.sys;
  rep.loewner_lhs = rep.area - kSqrt3Over2 * sys2;
  rep.sharp_lhs = rep.area - rep.tau.sigma2() * sys2;
  rep.tol = kMetricationBudget * rep.area;
  rep.loewner_pass = rep.loewner_lhs >= rep.variance - rep.tol;
  rep.sharp_pass = rep.sharp_lhs >= rep.variance - rep.tol;
  if (std::abs(rep.tau.re) <= 1e-9) {
    rep.rect_lhs = rep.area - sys2;
    rep.rect_pass = *rep.rect_lhs >= rep.variance - rep.tol;
  }

  const FubiniCheck fub = fubini_bound_check(metric, rep.sys);
  rep.fubini_rhs = fub.rhs;
  rep.fubini_pass = fub.ok;

  const ScalarField k = gaussian_curvature(metric);
  const auto [kmin, kmax] = std::minmax_element(k.values().begin(), k.values().end());
  rep.min_curvature = *kmin;
  rep.max_curvature = *kmax;
  return rep;
}

std::vector<DefectReport> build_reports(std::span<const ConformalMetric> metrics, int threads,
                                        const SystoleOptions& options) {
  std::vector<DefectReport> out(metrics.size());
  if (threads <= 0) {
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  threads = std::min<int>(threads, static_cast<int>(std::max<std::size_t>(1, metrics.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t k = next++; k < metrics.size(); k = next++) {
      try {
        out[k] = build_report(metrics[k], options);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) {
    pool.emplace_back(work);
  }
  work();
  for (std::thread& t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return out;
}

bool equality_case_check(const DefectReport& report) {
  const double dre = report.tau.re - 0.5;
  const double dim = report.tau.im - kSqrt3Over2;
  const bool hexagonal = std::hypot(dre, dim) <= 1e-6;
  return report.loewner_lhs <= report.tol && report.variance <= report.tol && hexagonal;
}

bool equality_case_check(const ConformalMetric& metric) {
  return equality_case_check(build_report(metric));
}

std::vector<ConformalMetric> random_corpus(int count, std::uint64_t seed,
                                           const CorpusOptions& options) {
  if (count < 1) {
    throw PreconditionError("random_corpus needs count >= 1");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re_dist(-0.5, 0.5);
  std::uniform_real_distribution<double> im_dist(kSqrt3Over2, 2.0);
  std::uniform_real_distribution<double> coeff_dist(-0.5, 0.5);

  std::vector<ConformalMetric> corpus;
  corpus.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    TauParameter tau;
    do {
      tau.re = re_dist(rng);
      tau.im = im_dist(rng);
    } while (tau.re * tau.re + tau.im * tau.im < 1.0);

    TrigPolynomialFamily family;
    family.constant = 0.0;
    family.exponentiate = true;
    const int km = options.max_mode;
    for (int k = 0; k <= km; ++k) {
      for (int l = -km; l <= km; ++l) {
        if (k == 0 && l <= 0) {
          continue;
        }
        const double damping = 1.0 / (k * k + l * l);
        const double a = coeff_dist(rng);
        const double b = coeff_dist(rng);
        family.modes.push_back({k, l, damping * a, damping * b});
      }
    }

    const Lattice2D lattice = Lattice2D::from_tau(tau);
    const int nu = options.grid;
    const double ratio = norm(lattice.b2()) / norm(lattice.b1());
    const int nv = std::max(8, 2 * static_cast<int>(std::lround(0.5 * nu * ratio)));
    corpus.emplace_back(from_analytic(lattice, nu, nv, family));
  }
  return corpus;
}

void write_corpus_csv(std::ostream& out, std::span<const DefectReport> reports) {
  out << std::setprecision(17);
  out << "index,tau_re,tau_im,area,sys,var,loewner_lhs,sharp_lhs,rect_lhs,"
         "loewner_pass,sharp_pass,rect_pass,fubini_pass\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const DefectReport& r = reports[i];
    out << i << ',' << r.tau.re << ',' << r.tau.im << ',' << r.area << ',' << r.sys << ','
        << r.variance << ',' << r.loewner_lhs << ',' << r.sharp_lhs << ',';
    if (r.rect_lhs) {
      out << *r.rect_lhs;
    }
    out << ',' << r.loewner_pass << ',' << r.sharp_pass << ',';
    if (r.rect_pass) {
      out << *r.rect_pass;
    }
    out << ',' << r.fubini_pass << '\n';
  }
}

void write_report_summary(std::ostream& out, const DefectReport& r) {
  auto flag = [](bool ok) { return ok ? "PASS" : "FAIL"; };
  out << std::setprecision(10);
  out << "tau            = " << r.tau.re << " + " << r.tau.im << "i  (sigma^2 = "
      << r.tau.sigma2() << ")\n";
  out << "area           = " << r.area << '\n';
  out << "mean E(f)      = " << r.mean << '\n';
  out << "var(f)         = " << r.variance << '\n';
  out << "sys            = " << r.sys << "  (class " << r.witness_class.m << ','
      << r.witness_class.n << "; " << r.classes_examined << " classes examined)\n";
  out << "curvature      in [" << r.min_curvature << ", " << r.max_curvature << "]\n";
  out << "tolerance      = " << r.tol << '\n';
  out << "Loewner defect   area - (sqrt3/2) sys^2 = " << r.loewner_lhs << " >= var  "
      << flag(r.loewner_pass) << '\n';
  out << "sharp defect     area - sigma^2 sys^2   = " << r.sharp_lhs << " >= var  "
      << flag(r.sharp_pass) << '\n';
  if (r.rect_lhs) {
    out << "rectangular      area - sys^2           = " << *r.rect_lhs << " >= var  "
        << flag(r.rect_pass.value_or(false)) << '\n';
  }
  out << "Fubini           E(f) = " << r.mean << " >= sigma sys = " << r.fubini_rhs << "  "
      << flag(r.fubini_pass) << '\n';
  out << "equality case  = " << (equality_case_check(r) ? "yes" : "no") << '\n';
}

}  // namespace systolic
