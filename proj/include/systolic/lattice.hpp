#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace systolic {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Shape of a lattice up to similarity, in the standard fundamental domain
/// |re| <= 1/2, re^2 + im^2 >= 1, im > 0.
struct TauParameter {
  double re = 0.0;
  double im = 1.0;

  /// sigma^2 := Im tau.
  double sigma2() const { return im; }
  double sigma() const { return std::sqrt(im); }
};

/// Rank-2 lattice in the plane spanned by b1, b2. Construction rejects
/// (numerically) linearly dependent bases with InvalidLattice.
class Lattice2D {
 public:
  Lattice2D(Vec2 b1, Vec2 b2);

  /// Unit-coarea lattice similar to Z*tau + Z, basis {1/sigma, tau/sigma}.
  static Lattice2D from_tau(TauParameter tau);
  static Lattice2D square();
  /// Eisenstein integers scaled to unit coarea.
  static Lattice2D eisenstein();

  Vec2 b1() const { return b1_; }
  Vec2 b2() const { return b2_; }
  double det() const { return cross(b1_, b2_); }
  double coarea() const { return std::abs(det()); }

  /// Cartesian point u*b1 + v*b2.
  Vec2 point(double u, double v) const { return u * b1_ + v * b2_; }
  Vec2 vector(std::int64_t m, std::int64_t n) const {
    return static_cast<double>(m) * b1_ + static_cast<double>(n) * b2_;
  }
  /// Coordinates (u, v) of a Cartesian point with respect to {b1, b2}.
  std::array<double, 2> coordinates(Vec2 p) const;

 private:
  Vec2 b1_;
  Vec2 b2_;
};

/// Integer 2x2 change of basis; row k holds the coefficients of the k-th
/// new basis vector in the old basis.
using Unimodular = std::array<std::array<std::int64_t, 2>, 2>;

struct Reduction {
  Lattice2D basis;
  Unimodular transform;
};

/// A lattice vector m*b1 + n*b2 (coefficients in the lattice's own basis).
struct LatticeVector {
  std::int64_t m = 0;
  std::int64_t n = 0;
  Vec2 cartesian;

  double length() const { return norm(cartesian); }
};

/// Lagrange-Gauss reduction: |b1| <= |b2| and |b1.b2| <= |b1|^2 / 2.
Reduction gauss_reduce_with_transform(const Lattice2D& lattice);
Lattice2D gauss_reduce(const Lattice2D& lattice);

/// Length of a shortest nonzero lattice vector.
double lambda1(const Lattice2D& lattice);

TauParameter tau_of(const Lattice2D& lattice);

Lattice2D normalize_coarea(const Lattice2D& lattice);

/// Primitive vectors of length <= bound, one per +/- pair, sorted by length
/// then by (m, n). Coefficients refer to the basis of `lattice`; the sign is
/// chosen so that the first nonzero coefficient is positive.
std::vector<LatticeVector> primitive_vectors_up_to(const Lattice2D& lattice, double bound);

/// Relative tolerance used for lattice invariant checks.
inline constexpr double kLatticeTolerance = 1e-9;

}  // namespace systolic
