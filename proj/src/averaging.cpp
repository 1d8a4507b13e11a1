#include "systolic/averaging.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "systolic/errors.hpp"
#include "systolic/metric_field.hpp"

namespace systolic {

namespace {

// Mean as x0 + mean(x - x0): exact for constant input, so averaging an
// already averaged field reproduces it bit for bit.
double shifted_mean(std::span<const double> x) {
  std::vector<double> d(x.size());
  const double x0 = x.front();
  std::transform(x.begin(), x.end(), d.begin(), [x0](double v) { return v - x0; });
  return x0 + pairwise_sum(d) / static_cast<double>(x.size());
}

double catmull_rom(double p0, double p1, double p2, double p3, double t) {
  return p1 + 0.5 * t *
                  (p2 - p0 +
                   t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
}

// Weighted radial quadrature of per-ring values with weight r_i.
double radial_mean(const DiskField& field, std::span<const double> per_ring) {
  std::vector<double> w(per_ring.size());
  std::vector<double> wv(per_ring.size());
  for (int i = 0; i < field.nr(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    w[k] = field.r(i);
    wv[k] = field.r(i) * per_ring[k];
  }
  return pairwise_sum(wv) / pairwise_sum(w);
}

// Resamples f onto a Cartesian patch inside 0.9 R and returns min curvature.
double resampled_min_curvature(const DiskField& f) {
  const double h = f.radius() / f.nr();
  const double reach = 0.9 * f.radius();
  const int half = static_cast<int>(std::floor(reach / h));
  const int n = 2 * half + 1;
  PatchField patch{{f.center().x - half * h, f.center().y - half * h},
                   h,
                   n,
                   n,
                   std::vector<double>(static_cast<std::size_t>(n) * static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 p = patch.point(i, j);
      patch(i, j) = norm(p - f.center()) <= reach ? f.interpolate(p)
                                                   : std::numeric_limits<double>::quiet_NaN();
    }
  }
  const PatchField k = patch_curvature(patch);
  double kmin = std::numeric_limits<double>::infinity();
  for (double v : k.values) {
    if (std::isfinite(v)) {
      kmin = std::min(kmin, v);
    }
  }
  return kmin;
}

DiskField log_of(const DiskField& f, const char* what) {
  std::vector<double> logs(f.samples().begin(), f.samples().end());
  for (double& v : logs) {
    if (!(v > 0.0)) {
      throw InvalidFactor(std::string(what) + " needs a strictly positive field");
    }
    v = std::log(v);
  }
  return {f.center(), f.radius(), f.nr(), f.ntheta(), std::move(logs)};
}

}  // namespace

DiskField::DiskField(Vec2 center, double radius, int nr, int ntheta, std::vector<double> samples)
    : center_(center), radius_(radius), nr_(nr), ntheta_(ntheta), samples_(std::move(samples)) {
  if (!(radius > 0.0) || nr < 1 || ntheta < 16 || ntheta % 2 != 0) {
    throw PreconditionError("disk field needs radius > 0, nr >= 1 and even ntheta >= 16");
  }
  if (samples_.size() != static_cast<std::size_t>(nr) * static_cast<std::size_t>(ntheta)) {
    throw PreconditionError("disk field sample count does not match nr*ntheta");
  }
  for (double v : samples_) {
    if (!std::isfinite(v)) {
      throw NumericalError("disk field sample is not finite");
    }
  }
}

DiskField DiskField::broadcast(Vec2 center, const PolarProfile& profile, int ntheta) {
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(profile.size()) * static_cast<std::size_t>(ntheta));
  for (int i = 0; i < profile.size(); ++i) {
    s.insert(s.end(), static_cast<std::size_t>(ntheta), profile[i]);
  }
  return {center, profile.rmax(), profile.size(), ntheta, std::move(s)};
}

double DiskField::interpolate(Vec2 p) const {
  const Vec2 d = p - center_;
  const double rr = norm(d);
  double th = std::atan2(d.y, d.x);
  if (th < 0.0) {
    th += 2.0 * std::numbers::pi;
  }
  const double s = th / (2.0 * std::numbers::pi) * ntheta_;
  const int j0 = static_cast<int>(std::floor(s));
  const double ds = s - j0;
  // Ring i < 0 is ring -1 - i seen through the origin (theta + pi).
  auto ring_value = [&](int i) {
    int shift = 0;
    if (i < 0) {
      i = -1 - i;
      shift = ntheta_ / 2;
    }
    i = std::min(i, nr_ - 1);
    auto at = [&](int j) { return (*this)(i, ScalarField::wrap(j + shift, ntheta_)); };
    return catmull_rom(at(j0 - 1), at(j0), at(j0 + 1), at(j0 + 2), ds);
  };
  const double t = rr / radius_ * nr_ - 0.5;
  const int i0 = static_cast<int>(std::floor(t));
  const double dt = t - i0;
  return catmull_rom(ring_value(i0 - 1), ring_value(i0), ring_value(i0 + 1), ring_value(i0 + 2),
                     dt);
}

PolarProfile rotational_average(const DiskField& field) {
  std::vector<double> av(static_cast<std::size_t>(field.nr()));
  for (int i = 0; i < field.nr(); ++i) {
    av[static_cast<std::size_t>(i)] = shifted_mean(field.ring(i));
  }
  return {field.radius(), std::move(av)};
}

PolarProfile log_average(const DiskField& f) {
  const PolarProfile av = rotational_average(log_of(f, "log_average"));
  std::vector<double> out(av.values().begin(), av.values().end());
  for (double& v : out) {
    v = std::exp(v);
  }
  return {f.radius(), std::move(out)};
}

double disk_mean(const DiskField& field) {
  std::vector<double> ring_means(static_cast<std::size_t>(field.nr()));
  for (int i = 0; i < field.nr(); ++i) {
    ring_means[static_cast<std::size_t>(i)] =
        pairwise_sum(field.ring(i)) / static_cast<double>(field.ntheta());
  }
  return radial_mean(field, ring_means);
}

double disk_variance(const DiskField& field) {
  const double m = disk_mean(field);
  std::vector<double> ring_means(static_cast<std::size_t>(field.nr()));
  std::vector<double> dev(static_cast<std::size_t>(field.ntheta()));
  for (int i = 0; i < field.nr(); ++i) {
    const auto ring = field.ring(i);
    std::transform(ring.begin(), ring.end(), dev.begin(),
                   [m](double v) { return (v - m) * (v - m); });
    ring_means[static_cast<std::size_t>(i)] =
        pairwise_sum(dev) / static_cast<double>(field.ntheta());
  }
  return radial_mean(field, ring_means);
}

JensenReport jensen_exp_check(const DiskField& f) {
  const PolarProfile hav = rotational_average(log_of(f, "jensen_exp_check"));
  JensenReport rep;
  rep.min_slack = std::numeric_limits<double>::infinity();
  rep.ok = true;
  std::vector<double> sq(static_cast<std::size_t>(f.ntheta()));
  for (int i = 0; i < f.nr(); ++i) {
    const auto ring = f.ring(i);
    std::transform(ring.begin(), ring.end(), sq.begin(), [](double v) { return v * v; });
    const double lhs = pairwise_sum(sq) / static_cast<double>(f.ntheta());
    const double rhs = std::exp(2.0 * hav[i]);
    const double slack = lhs - rhs;
    rep.slack.push_back(slack);
    rep.min_slack = std::min(rep.min_slack, slack);
    rep.ok = rep.ok && slack >= -1e-12 * std::max(1.0, lhs);
  }
  return rep;
}

AveragedInequalityReport averaged_inequality_check(const DiskField& f, double alpha) {
  AveragedInequalityReport rep;
  rep.min_curvature = resampled_min_curvature(f);
  rep.hypothesis_ok = rep.min_curvature >= alpha - 0.02 * std::max(1.0, std::abs(alpha));

  const PolarProfile hav = rotational_average(log_of(f, "averaged_inequality_check"));
  const PolarProfile lap = polar_laplacian(hav);
  double scale = 1.0;
  rep.min_proof_margin = std::numeric_limits<double>::infinity();
  rep.min_displayed_margin = std::numeric_limits<double>::infinity();
  for (int i = 1; i + 1 < hav.size(); ++i) {
    rep.radii.push_back(hav.radius(i));
    rep.lhs.push_back(-lap[i]);
    rep.proof_rhs.push_back(alpha * std::exp(2.0 * hav[i]));
    rep.displayed_rhs.push_back(alpha * std::exp(hav[i]));
    rep.min_proof_margin = std::min(rep.min_proof_margin, rep.lhs.back() - rep.proof_rhs.back());
    rep.min_displayed_margin =
        std::min(rep.min_displayed_margin, rep.lhs.back() - rep.displayed_rhs.back());
    scale = std::max(scale, std::abs(rep.lhs.back()));
  }
  // Second-order finite differences: tolerance proportional to dr^2.
  rep.tolerance = 50.0 * hav.dr() * hav.dr() * scale;
  rep.proof_ok = rep.min_proof_margin >= -rep.tolerance;
  rep.displayed_ok = rep.min_displayed_margin >= -rep.tolerance;
  return rep;
}

VarianceMonotonicity variance_monotonicity_check(const DiskField& h) {
  const DiskField hav = DiskField::broadcast(h.center(), rotational_average(h), h.ntheta());
  VarianceMonotonicity out;
  out.mean_h = disk_mean(h);
  out.mean_hav = disk_mean(hav);
  out.var_h = disk_variance(h);
  out.var_hav = disk_variance(hav);
  out.means_agree =
      std::abs(out.mean_h - out.mean_hav) <= 1e-10 * std::max(1.0, std::abs(out.mean_h));
  out.ok = out.means_agree && out.var_hav <= out.var_h + 1e-12;
  return out;
}

}  // namespace systolic
