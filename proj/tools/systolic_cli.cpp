// Command-line front end: verify, corpus, curvature, systole, sweep and
// average-check. Exit status is 0 when every checked inequality passes, 1 when
// one fails and 2 on errors.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>

#include "systolic/averaging.hpp"
#include "systolic/defect_report.hpp"
#include "systolic/errors.hpp"
#include "systolic/liouville.hpp"
#include "systolic/systole.hpp"

namespace {

using namespace systolic;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kError = 2;

const char* flag(bool ok) { return ok ? "PASS" : "FAIL"; }

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open " + path + " for writing");
  }
  return out;
}

int run_verify(const std::string& config) {
  const ConformalMetric metric = build_metric(load_metric_config(config));
  const DefectReport r = build_report(metric);
  write_report_summary(std::cout, r);
  return r.all_pass() ? kPass : kFail;
}

int run_corpus(int count, std::uint64_t seed, int grid, int threads, const std::string& out_path) {
  const auto corpus = random_corpus(count, seed, {grid, 3});
  const auto reports = build_reports(corpus, threads);
  std::ofstream out = open_out(out_path);
  write_corpus_csv(out, reports);
  int failed = 0;
  for (const DefectReport& r : reports) {
    failed += r.all_pass() ? 0 : 1;
  }
  std::cout << reports.size() << " metrics, " << failed << " failing; rows written to " << out_path
            << '\n';
  return failed == 0 ? kPass : kFail;
}

int run_curvature(const std::string& config, const std::string& out_path) {
  const ConformalMetric metric = build_metric(load_metric_config(config));
  const ScalarField k = gaussian_curvature(metric);
  write_grid_file(out_path, k);
  const auto [lo, hi] = std::minmax_element(k.values().begin(), k.values().end());
  std::cout << std::setprecision(10) << "curvature in [" << *lo << ", " << *hi << "] written to "
            << out_path << '\n';
  return kPass;
}

int run_systole(const std::string& config, const std::string& path_file) {
  const ConformalMetric metric = build_metric(load_metric_config(config));
  const SystoleResult s = systole(metric);
  std::cout << std::setprecision(12) << "sys = " << s.sys << '\n'
            << "witness class = (" << s.witness_class.m << ", " << s.witness_class.n << ")\n"
            << "classes examined = " << s.classes_examined << '\n';
  if (!path_file.empty()) {
    std::ofstream out = open_out(path_file);
    out << std::setprecision(17);
    for (const Vec2& p : s.witness_path) {
      out << p.x << ',' << p.y << '\n';
    }
  }
  const FubiniCheck fub = fubini_bound_check(metric, s.sys);
  std::cout << "Fubini E(f) = " << fub.lhs << " >= sigma sys = " << fub.rhs << "  " << flag(fub.ok)
            << '\n';
  return fub.ok ? kPass : kFail;
}

int run_sweep(double alpha, double rho, int samples, std::uint64_t seed, const std::string& out_path) {
  const SweepTable table = variance_sweep_experiment(alpha, rho, samples, seed);
  std::ofstream out = open_out(out_path);
  write_sweep_csv(out, table);
  std::cout << std::setprecision(10) << "riemann variance = " << table.riemann.variance << "; "
            << table.samples.size() << " samples written to " << out_path << '\n';
  return kPass;
}

struct AverageOptions {
  std::string field = "riemann";
  std::string grid_file;
  double alpha = 4.0;
  double radius = 1.0;
  std::vector<double> center{0.0, 0.0};
  int nr = 200;
  int ntheta = 64;
};

DiskField average_field(const AverageOptions& o, double& alpha) {
  const Vec2 c{o.center.at(0), o.center.at(1)};
  if (!o.grid_file.empty()) {
    const ConformalMetric m = normalized_metric(read_grid_file(o.grid_file));
    return DiskField::sample(c, o.radius, o.nr, o.ntheta, [&](double r, double t) {
      return m.factor().interpolate(c + Vec2{r * std::cos(t), r * std::sin(t)});
    });
  }
  const RiemannProfile f0(o.alpha);
  if (o.field == "riemann") {
    return DiskField::sample(c, o.radius, o.nr, o.ntheta, [&](double r, double) { return f0(r); });
  }
  if (o.field == "perturbed-riemann") {
    // f0 * exp(0.01 x) has curvature alpha * exp(-0.02 x) >= alpha * exp(-0.02 R).
    alpha = o.alpha * std::exp(-0.02 * o.radius);
    return DiskField::sample(c, o.radius, o.nr, o.ntheta, [&](double r, double t) {
      return f0(r) * std::exp(0.01 * r * std::cos(t));
    });
  }
  if (o.field == "constant") {
    alpha = 0.0;
    return DiskField::sample(c, o.radius, o.nr, o.ntheta, [](double, double) { return 1.0; });
  }
  throw ParseError("unknown field '" + o.field + "' (riemann, perturbed-riemann, constant)");
}

int run_average_check(const AverageOptions& o) {
  double alpha = o.alpha;
  const DiskField f = average_field(o, alpha);
  const JensenReport jensen = jensen_exp_check(f);
  const AveragedInequalityReport avg = averaged_inequality_check(f, alpha);

  std::vector<double> logs(f.samples().begin(), f.samples().end());
  for (double& v : logs) {
    v = std::log(v);
  }
  const DiskField h(f.center(), f.radius(), f.nr(), f.ntheta(), std::move(logs));
  const VarianceMonotonicity vm = variance_monotonicity_check(h);

  const PolarProfile la = log_average(f);
  const PolarProfile aa = rotational_average(f);
  bool amgm = true;
  for (int i = 0; i < la.size(); ++i) {
    amgm = amgm && la[i] <= aa[i] + 1e-12;
  }

  std::cout << std::setprecision(10);
  std::cout << "Jensen av(e^{2h}) >= e^{2 h_av}: min slack " << jensen.min_slack << "  "
            << flag(jensen.ok) << '\n';
  std::cout << "curvature hypothesis K >= " << alpha << ": min K " << avg.min_curvature << "  "
            << flag(avg.hypothesis_ok) << '\n';
  std::cout << "averaged inequality, alpha e^{2 h_av} form: min margin " << avg.min_proof_margin
            << " (tol " << avg.tolerance << ")  " << flag(avg.proof_ok) << '\n';
  std::cout << "averaged inequality, alpha e^{h_av} form:   min margin "
            << avg.min_displayed_margin << "  " << flag(avg.displayed_ok) << " (reported only)\n";
  std::cout << "E(h) = " << vm.mean_h << ", E(h_av) = " << vm.mean_hav << "; var(h) = " << vm.var_h
            << " >= var(h_av) = " << vm.var_hav << "  " << flag(vm.ok) << '\n';
  std::cout << "log average <= arithmetic average  " << flag(amgm) << '\n';

  const bool averaged_ok = !avg.hypothesis_ok || avg.proof_ok;
  return jensen.ok && vm.ok && amgm && averaged_ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of isosystolic inequalities on conformal tori"};
  app.require_subcommand(1);
  int status = kPass;

  std::string config;
  std::string out;

  auto* verify = app.add_subcommand("verify", "Full defect report for one metric");
  verify->add_option("--config", config, "JSON metric configuration")->required();
  verify->callback([&] { status = run_verify(config); });

  int count = 100;
  std::uint64_t seed = 42;
  int grid = 128;
  int threads = 0;
  auto* corpus = app.add_subcommand("corpus", "Defect reports for a random corpus, as CSV");
  corpus->add_option("--count", count, "Number of metrics")->capture_default_str();
  corpus->add_option("--seed", seed, "Generator seed")->capture_default_str();
  corpus->add_option("--grid", grid, "Grid count along the shorter basis vector")->capture_default_str();
  corpus->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  corpus->add_option("--out", out, "CSV output file")->required();
  corpus->callback([&] { status = run_corpus(count, seed, grid, threads, out); });

  auto* curvature = app.add_subcommand("curvature", "Gaussian curvature as a grid file");
  curvature->add_option("--config", config, "JSON metric configuration")->required();
  curvature->add_option("--out", out, "Grid output file")->required();
  curvature->callback([&] { status = run_curvature(config, out); });

  std::string emit_path;
  auto* sys = app.add_subcommand("systole", "Systole, witness class and Fubini bound");
  sys->add_option("--config", config, "JSON metric configuration")->required();
  sys->add_option("--emit-path", emit_path, "Write the witness polyline as x,y CSV");
  sys->callback([&] { status = run_systole(config, emit_path); });

  double alpha = 4.0;
  double rho = 0.5;
  int samples = 100;
  auto* sweep = app.add_subcommand("sweep", "Variance of random constant-curvature factors on a disk");
  sweep->add_option("--alpha", alpha, "Curvature")->capture_default_str();
  sweep->add_option("--rho", rho, "Disk radius")->capture_default_str();
  sweep->add_option("--samples", samples, "Random solutions")->capture_default_str();
  sweep->add_option("--seed", seed, "Generator seed")->capture_default_str();
  sweep->add_option("--out", out, "CSV output file")->required();
  sweep->callback([&] { status = run_sweep(alpha, rho, samples, seed, out); });

  AverageOptions avg;
  auto* average = app.add_subcommand("average-check", "Rotational averaging checks on a disk field");
  average->add_option("--field", avg.field, "riemann, perturbed-riemann or constant")->capture_default_str();
  average->add_option("--grid-file", avg.grid_file, "Sample a disk from a grid file instead");
  average->add_option("--alpha", avg.alpha, "Curvature lower bound")->capture_default_str();
  average->add_option("--radius", avg.radius, "Disk radius")->capture_default_str();
  average->add_option("--center", avg.center, "Disk centre x y")->expected(2);
  average->add_option("--nr", avg.nr, "Radial nodes")->capture_default_str();
  average->add_option("--ntheta", avg.ntheta, "Angular nodes")->capture_default_str();
  average->callback([&] { status = run_average_check(avg); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kError;
  } catch (const systolic::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return status;
}
