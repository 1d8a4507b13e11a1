#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>

#include "systolic/errors.hpp"
#include "systolic/liouville.hpp"

namespace systolic {

DiskMoments disk_moments(double rho, const SweepOptions& options,
                         const std::function<double(std::complex<double>)>& factor) {
  const int nr = options.radial_nodes;
  const int nt = options.angular_nodes;
  const double dr = rho / nr;
  std::vector<double> w;
  std::vector<double> wf;
  std::vector<double> wf2;
  w.reserve(static_cast<std::size_t>(nr) * static_cast<std::size_t>(nt));
  wf.reserve(w.capacity());
  wf2.reserve(w.capacity());
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) * dr;
    for (int j = 0; j < nt; ++j) {
      const double th = 2.0 * std::numbers::pi * j / nt;
      const double f = factor(std::polar(r, th));
      w.push_back(r);
      wf.push_back(r * f);
      wf2.push_back(r * f * f);
    }
  }
  const double total = pairwise_sum(w);
  DiskMoments m;
  m.mean = pairwise_sum(wf) / total;
  m.second = pairwise_sum(wf2) / total;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double d = wf[k] / w[k] - m.mean;
    wf[k] = w[k] * d * d;
  }
  m.variance = pairwise_sum(wf) / total;
  return m;
}

SweepRow sweep_row_for(const HolomorphicSolution& sol, double alpha, double rho,
                       double riemann_l2, const SweepOptions& options) {
  const double scale = 2.0 / std::sqrt(alpha);
  const DiskMoments m =
      disk_moments(rho, options, [&](std::complex<double> z) { return scale * sol.factor(z); });
  SweepRow row;
  row.degree = sol.degree();
  row.l2norm = std::sqrt(m.second);
  const double c = riemann_l2 / row.l2norm;
  row.variance = c * c * m.variance;
  row.coeffs.assign(sol.coeffs().begin(), sol.coeffs().end());
  return row;
}

SweepTable variance_sweep_experiment(double alpha, double rho, int samples, std::uint64_t seed,
                                     const SweepOptions& options) {
  if (!(alpha > 0.0) || !(rho > 0.0) || samples < 0) {
    throw PreconditionError("sweep needs alpha > 0, rho > 0 and samples >= 0");
  }
  SweepTable table;
  table.alpha = alpha;
  table.rho = rho;
  table.seed = seed;

  const RiemannProfile f0(alpha);
  const DiskMoments rm = disk_moments(rho, options, [&](std::complex<double> z) {
    return f0(std::abs(z));
  });
  table.riemann.id = "riemann";
  table.riemann.degree = 0;
  table.riemann.l2norm = std::sqrt(rm.second);
  table.riemann.variance = rm.variance;

  for (int s = 0; s < samples; ++s) {
    std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(s));
    std::uniform_int_distribution<int> degree_dist(1, 4);
    std::uniform_real_distribution<double> coeff_dist(-1.0, 1.0);
    bool accepted = false;
    for (int attempt = 0; attempt <= options.max_redraws && !accepted; ++attempt) {
      const int degree = degree_dist(rng);
      std::vector<std::complex<double>> coeffs(static_cast<std::size_t>(degree) + 1);
      for (auto& c : coeffs) {
        const double re = coeff_dist(rng);
        const double im = coeff_dist(rng);
        c = {re, im};
      }
      if (std::abs(coeffs.back()) < 1e-12) {
        continue;
      }
      const HolomorphicSolution sol(coeffs);
      bool vanishes = false;
      for (const auto& z : sol.critical_points()) {
        vanishes = vanishes || std::abs(z) <= rho;
      }
      if (vanishes) {
        continue;
      }
      SweepRow row = sweep_row_for(sol, alpha, rho, table.riemann.l2norm, options);
      row.id = std::to_string(s);
      table.samples.push_back(std::move(row));
      accepted = true;
    }
    if (!accepted) {
      throw NumericalError("sweep sample " + std::to_string(s) +
                           ": a' vanished in the disk on every redraw");
    }
  }
  return table;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << std::setprecision(17);
  out << "id,degree,l2norm,variance\n";
  auto row = [&](const SweepRow& r) {
    out << r.id << ',' << r.degree << ',' << r.l2norm << ',' << r.variance << '\n';
  };
  row(table.riemann);
  for (const SweepRow& r : table.samples) {
    row(r);
  }
}

}  // namespace systolic
