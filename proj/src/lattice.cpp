#include "systolic/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <utility>

#include "systolic/errors.hpp"

namespace systolic {

namespace {

constexpr int kMaxReductionSteps = 10000;

}  // namespace

Lattice2D::Lattice2D(Vec2 b1, Vec2 b2) : b1_(b1), b2_(b2) {
  const double l1 = norm(b1);
  const double l2 = norm(b2);
  if (!std::isfinite(l1) || !std::isfinite(l2) || l1 == 0.0 || l2 == 0.0 ||
      std::abs(cross(b1, b2)) <= 1e-12 * l1 * l2) {
    throw InvalidLattice("lattice basis is degenerate (det = 0)");
  }
}

Lattice2D Lattice2D::from_tau(TauParameter tau) {
  if (!(tau.im > 0.0)) {
    throw InvalidLattice("tau must have positive imaginary part");
  }
  const double s = std::sqrt(tau.im);
  return {{1.0 / s, 0.0}, {tau.re / s, tau.im / s}};
}

Lattice2D Lattice2D::square() { return {{1.0, 0.0}, {0.0, 1.0}}; }

Lattice2D Lattice2D::eisenstein() { return from_tau({0.5, std::sqrt(3.0) / 2.0}); }

std::array<double, 2> Lattice2D::coordinates(Vec2 p) const {
  const double d = det();
  return {cross(p, b2_) / d, cross(b1_, p) / d};
}

Reduction gauss_reduce_with_transform(const Lattice2D& lattice) {
  Vec2 a = lattice.b1();
  Vec2 b = lattice.b2();
  std::array<std::int64_t, 2> ta{1, 0};
  std::array<std::int64_t, 2> tb{0, 1};
  if (norm2(b) < norm2(a) * (1.0 - 1e-14)) {
    std::swap(a, b);
    std::swap(ta, tb);
  }
  for (int step = 0;; ++step) {
    if (step == kMaxReductionSteps) {
      throw NumericalError("lattice reduction did not terminate");
    }
    // Leave |mu| = 1/2 ties alone so already reduced bases come back unchanged.
    const double ratio = dot(a, b) / norm2(a);
    const double mu = std::abs(ratio) <= 0.5 + 1e-12 ? 0.0 : std::round(ratio);
    if (mu != 0.0) {
      const auto k = static_cast<std::int64_t>(mu);
      b -= mu * a;
      tb[0] -= k * ta[0];
      tb[1] -= k * ta[1];
    }
    if (norm2(b) < norm2(a) * (1.0 - 1e-14)) {
      std::swap(a, b);
      std::swap(ta, tb);
      continue;
    }
    break;
  }
  return {Lattice2D(a, b), Unimodular{ta, tb}};
}

Lattice2D gauss_reduce(const Lattice2D& lattice) {
  return gauss_reduce_with_transform(lattice).basis;
}

double lambda1(const Lattice2D& lattice) { return norm(gauss_reduce(lattice).b1()); }

TauParameter tau_of(const Lattice2D& lattice) {
  const Lattice2D reduced = gauss_reduce(lattice);
  const Vec2 a = reduced.b1();
  const double a2 = norm2(a);
  Vec2 b = reduced.b2();
  if (cross(a, b) < 0.0) {
    b = -b;
  }
  double re = dot(a, b) / a2;
  double im = cross(a, b) / a2;

  const double tol = kLatticeTolerance;
  re -= std::round(re);
  if (re < -0.5 + tol) {
    re += 1.0;
  }
  if (re < 0.0 && re * re + im * im < 1.0 + tol) {
    // tau and -1/tau describe the same shape; pick the representative with re >= 0.
    const double m2 = re * re + im * im;
    re = -re / m2;
    im = im / m2;
  }
  if (std::abs(re) < tol * 1e-3) {
    re = 0.0;
  }
  return {re, im};
}

Lattice2D normalize_coarea(const Lattice2D& lattice) {
  const double s = 1.0 / std::sqrt(lattice.coarea());
  return {s * lattice.b1(), s * lattice.b2()};
}

std::vector<LatticeVector> primitive_vectors_up_to(const Lattice2D& lattice, double bound) {
  const Reduction red = gauss_reduce_with_transform(lattice);
  const Vec2 a = red.basis.b1();
  const Vec2 b = red.basis.b2();
  const double la = norm(a);
  const double height = red.basis.coarea() / la;
  const double along = dot(b, a) / la;
  const double limit = bound * (1.0 + 1e-12);

  std::vector<LatticeVector> out;
  const auto nmax = static_cast<std::int64_t>(std::floor(limit / height));
  for (std::int64_t n = 0; n <= nmax; ++n) {
    const double shift = static_cast<double>(n) * along;
    const auto mlo = static_cast<std::int64_t>(std::ceil((-limit - shift) / la));
    const auto mhi = static_cast<std::int64_t>(std::floor((limit - shift) / la));
    for (std::int64_t m = mlo; m <= mhi; ++m) {
      if (n == 0 && m <= 0) {
        continue;
      }
      if (std::gcd(m, n) != 1) {
        continue;
      }
      const Vec2 v = static_cast<double>(m) * a + static_cast<double>(n) * b;
      if (norm(v) > limit) {
        continue;
      }
      std::int64_t p = m * red.transform[0][0] + n * red.transform[1][0];
      std::int64_t q = m * red.transform[0][1] + n * red.transform[1][1];
      if (p < 0 || (p == 0 && q < 0)) {
        p = -p;
        q = -q;
      }
      out.push_back({p, q, lattice.vector(p, q)});
    }
  }
  std::sort(out.begin(), out.end(), [](const LatticeVector& x, const LatticeVector& y) {
    const double lx = norm2(x.cartesian);
    const double ly = norm2(y.cartesian);
    if (std::abs(lx - ly) > 1e-12 * std::max(lx, ly)) {
      return lx < ly;
    }
    return std::tie(x.m, x.n) < std::tie(y.m, y.n);
  });
  return out;
}

}  // namespace systolic
