#include "systolic/systole.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <utility>

#include "systolic/errors.hpp"

namespace systolic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 16-neighbour stencil: axis, diagonal and knight moves.
constexpr std::array<std::array<int, 2>, 16> kStencil{{{1, 0},
                                                       {-1, 0},
                                                       {0, 1},
                                                       {0, -1},
                                                       {1, 1},
                                                       {1, -1},
                                                       {-1, 1},
                                                       {-1, -1},
                                                       {1, 2},
                                                       {1, -2},
                                                       {-1, 2},
                                                       {-1, -2},
                                                       {2, 1},
                                                       {2, -1},
                                                       {-2, 1},
                                                       {-2, -1}}};

Vec2 node_point(const ScalarField& f, int i, int j) { return f.point(i, j); }

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = norm2(ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

// Nodes of the cover within `halfwidth` of the segment from node (0,0) to
// node (m*nu, n*nv), with 16-neighbour adjacency restricted to the strip.
struct Strip {
  std::vector<GridIndex> offset;
  std::vector<int> base_i;
  std::vector<int> base_j;
  std::vector<double> heuristic;  // |p - target|, scaled by fmin at search time
  std::vector<bool> boundary;
  std::vector<int> adj_start;
  std::vector<int> adj_node;
  std::vector<double> adj_len;
  int source = -1;
  int target = -1;
  double halfwidth = 0.0;
};

Strip build_strip(const ScalarField& f, const LatticeVector& v, double halfwidth) {
  const int nu = f.nu();
  const int nv = f.nv();
  const GridIndex target_idx{static_cast<int>(v.m) * nu, static_cast<int>(v.n) * nv};
  const Vec2 p0{0.0, 0.0};
  const Vec2 p1 = v.cartesian;

  const Vec2 lo{std::min(p0.x, p1.x) - halfwidth, std::min(p0.y, p1.y) - halfwidth};
  const Vec2 hi{std::max(p0.x, p1.x) + halfwidth, std::max(p0.y, p1.y) + halfwidth};
  double imin = kInf;
  double imax = -kInf;
  double jmin = kInf;
  double jmax = -kInf;
  for (const Vec2 c : {lo, hi, Vec2{lo.x, hi.y}, Vec2{hi.x, lo.y}}) {
    const auto uv = f.lattice().coordinates(c);
    imin = std::min(imin, uv[0] * nu);
    imax = std::max(imax, uv[0] * nu);
    jmin = std::min(jmin, uv[1] * nv);
    jmax = std::max(jmax, uv[1] * nv);
  }
  const int i0 = static_cast<int>(std::floor(imin)) - 1;
  const int i1 = static_cast<int>(std::ceil(imax)) + 1;
  const int j0 = static_cast<int>(std::floor(jmin)) - 1;
  const int j1 = static_cast<int>(std::ceil(jmax)) + 1;
  const int wi = i1 - i0 + 1;
  const int wj = j1 - j0 + 1;

  Strip s;
  s.halfwidth = halfwidth;
  std::vector<int> local(static_cast<std::size_t>(wi) * static_cast<std::size_t>(wj), -1);
  auto slot = [&](int i, int j) -> int* {
    if (i < i0 || i > i1 || j < j0 || j > j1) {
      return nullptr;
    }
    return &local[static_cast<std::size_t>(i - i0) * static_cast<std::size_t>(wj) +
                  static_cast<std::size_t>(j - j0)];
  };
  for (int i = i0; i <= i1; ++i) {
    for (int j = j0; j <= j1; ++j) {
      const Vec2 p = node_point(f, i, j);
      const bool endpoint = (i == 0 && j == 0) || (GridIndex{i, j} == target_idx);
      if (!endpoint && distance_to_segment(p, p0, p1) > halfwidth) {
        continue;
      }
      *slot(i, j) = static_cast<int>(s.offset.size());
      s.offset.push_back({i, j});
      s.base_i.push_back(ScalarField::wrap(i, nu));
      s.base_j.push_back(ScalarField::wrap(j, nv));
      s.heuristic.push_back(norm(p - p1));
    }
  }
  s.source = *slot(0, 0);
  s.target = *slot(target_idx.i, target_idx.j);

  std::array<double, kStencil.size()> step_len{};
  for (std::size_t k = 0; k < kStencil.size(); ++k) {
    step_len[k] = norm(node_point(f, kStencil[k][0], kStencil[k][1]));
  }
  s.boundary.assign(s.offset.size(), false);
  s.adj_start.reserve(s.offset.size() + 1);
  s.adj_start.push_back(0);
  for (std::size_t n = 0; n < s.offset.size(); ++n) {
    for (std::size_t k = 0; k < kStencil.size(); ++k) {
      const int* nb = slot(s.offset[n].i + kStencil[k][0], s.offset[n].j + kStencil[k][1]);
      if (nb == nullptr || *nb < 0) {
        s.boundary[n] = true;
        continue;
      }
      s.adj_node.push_back(*nb);
      s.adj_len.push_back(step_len[k]);
    }
    s.adj_start.push_back(static_cast<int>(s.adj_node.size()));
  }
  return s;
}

struct SearchResult {
  double distance = kInf;
  std::vector<int> path;  // strip node ids, source first
};

// A* on the strip with heuristic fmin * |p - target|, which is consistent
// because every edge costs at least fmin times its Euclidean length.
class StripSearch {
 public:
  StripSearch(const ScalarField& f, const Strip& strip, double fmin)
      : f_(f),
        strip_(strip),
        fmin_(fmin),
        fval_(strip.offset.size()),
        g_(strip.offset.size(), kInf),
        pred_(strip.offset.size(), -1),
        closed_(strip.offset.size(), 0) {}

  SearchResult run(GridIndex source, double cutoff, bool want_path) {
    const std::size_t n = strip_.offset.size();
    const int nu = f_.nu();
    const int nv = f_.nv();
    const auto values = f_.values();
    for (std::size_t k = 0; k < n; ++k) {
      int i = strip_.base_i[k] + source.i;
      int j = strip_.base_j[k] + source.j;
      i = i >= nu ? i - nu : i;
      j = j >= nv ? j - nv : j;
      fval_[k] = values[static_cast<std::size_t>(i) * static_cast<std::size_t>(nv) +
                        static_cast<std::size_t>(j)];
    }
    std::fill(g_.begin(), g_.end(), kInf);
    std::fill(closed_.begin(), closed_.end(), 0);
    std::fill(pred_.begin(), pred_.end(), -1);

    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    g_[strip_.source] = 0.0;
    open.emplace(fmin_ * strip_.heuristic[strip_.source], strip_.source);
    SearchResult result;
    while (!open.empty()) {
      const auto [key, u] = open.top();
      open.pop();
      if (closed_[u]) {
        continue;
      }
      if (key >= cutoff) {
        break;
      }
      closed_[u] = 1;
      if (u == strip_.target) {
        result.distance = g_[u];
        break;
      }
      const double gu = g_[u];
      const double fu = fval_[u];
      for (int e = strip_.adj_start[u]; e < strip_.adj_start[u + 1]; ++e) {
        const int w = strip_.adj_node[e];
        if (closed_[w]) {
          continue;
        }
        const double gw = gu + strip_.adj_len[e] * 0.5 * (fu + fval_[w]);
        if (gw < g_[w]) {
          const double kw = gw + fmin_ * strip_.heuristic[w];
          if (kw >= cutoff) {
            continue;
          }
          g_[w] = gw;
          pred_[w] = u;
          open.emplace(kw, w);
        }
      }
    }
    if (want_path && std::isfinite(result.distance)) {
      for (int k = strip_.target; k >= 0; k = pred_[k]) {
        result.path.push_back(k);
      }
      std::reverse(result.path.begin(), result.path.end());
    }
    return result;
  }

 private:
  const ScalarField& f_;
  const Strip& strip_;
  double fmin_;
  std::vector<double> fval_;
  std::vector<double> g_;
  std::vector<int> pred_;
  std::vector<char> closed_;
};

double factor_min(const ScalarField& f) {
  const auto v = f.values();
  return *std::min_element(v.begin(), v.end());
}

struct ClassOutcome {
  double distance = kInf;
  GridIndex source;
  std::vector<GridIndex> nodes;
};

// Minimum over `sources` of the cover distance in class v, pruned by
// `cutoff`. Widens the strip while the best path touches its boundary and
// the strip does not yet contain every path of length <= best.
ClassOutcome search_class(const ScalarField& f, const LatticeVector& v,
                          std::span<const GridIndex> sources, double cutoff, double fmin,
                          const SystoleOptions& options) {
  const double len = v.length();
  const double margin = 3.0 * f.spacing();
  double halfwidth = std::max(options.initial_halfwidth * len, margin);
  for (int attempt = 0;; ++attempt) {
    const Strip strip = build_strip(f, v, halfwidth);
    StripSearch search(f, strip, fmin);
    ClassOutcome best;
    double bound = cutoff;
    std::vector<int> best_path;
    for (const GridIndex s : sources) {
      SearchResult r = search.run(s, bound, true);
      if (r.distance < bound) {
        bound = r.distance;
        best.distance = r.distance;
        best.source = s;
        best_path = std::move(r.path);
      }
    }
    if (!std::isfinite(best.distance)) {
      return best;
    }
    const bool touches = std::any_of(best_path.begin(), best_path.end(),
                                     [&](int k) { return strip.boundary[k]; });
    // Every path of length <= best lies in the ellipse with foci x, x + v and
    // focal sum best / fmin, which sits inside a stadium of this half-width.
    const double focal = best.distance / fmin;
    const double exact_width =
        0.5 * std::sqrt(std::max(0.0, focal * focal - len * len)) + margin;
    if (touches && halfwidth < exact_width) {
      if (attempt == options.max_widenings) {
        throw StripExhausted("shortest path keeps touching the strip boundary");
      }
      halfwidth = std::min(2.0 * halfwidth, exact_width);
      continue;
    }
    best.nodes.reserve(best_path.size());
    for (int k : best_path) {
      best.nodes.push_back(
          {strip.offset[k].i + best.source.i, strip.offset[k].j + best.source.j});
    }
    return best;
  }
}

// Grid nodes on two adjacent transversal lines. Every grid loop in class
// (m, n) with m != 0 visits column 0 or 1 modulo nu, since steps change i by
// at most 2; likewise rows when m == 0.
std::vector<GridIndex> transversal_sources(const ScalarField& f, const LatticeVector& v) {
  std::vector<GridIndex> out;
  if (v.m != 0) {
    for (int c = 0; c < 2; ++c) {
      for (int j = 0; j < f.nv(); ++j) {
        out.push_back({c, j});
      }
    }
  } else {
    for (int c = 0; c < 2; ++c) {
      for (int i = 0; i < f.nu(); ++i) {
        out.push_back({i, c});
      }
    }
  }
  // Cheapest basepoints first so the pruning bound tightens early.
  std::stable_sort(out.begin(), out.end(), [&](GridIndex a, GridIndex b) {
    return f(a.i, a.j) < f(b.i, b.j);
  });
  return out;
}

}  // namespace

double edge_length(const ScalarField& factor, GridIndex a, GridIndex b) {
  const Vec2 d = factor.point(b.i - a.i, b.j - a.j);
  return norm(d) * 0.5 * (factor(a.i, a.j) + factor(b.i, b.j));
}

double path_length(const ScalarField& factor, std::span<const GridIndex> nodes) {
  double total = 0.0;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    total += edge_length(factor, nodes[k - 1], nodes[k]);
  }
  return total;
}

double cover_distance(const ConformalMetric& metric, GridIndex source, const LatticeVector& v,
                      const SystoleOptions& options) {
  if (v.m == 0 && v.n == 0) {
    throw PreconditionError("cover_distance needs a nonzero lattice vector");
  }
  const ScalarField& f = metric.factor();
  const LatticeVector lv{v.m, v.n, metric.lattice().vector(v.m, v.n)};
  const GridIndex src{ScalarField::wrap(source.i, f.nu()), ScalarField::wrap(source.j, f.nv())};
  const std::array<GridIndex, 1> sources{src};
  return search_class(f, lv, sources, kInf, factor_min(f), options).distance;
}

double straight_loop_length(const ConformalMetric& metric, Vec2 base, const LatticeVector& v) {
  const ScalarField& f = metric.factor();
  const double len = v.length();
  const int samples =
      std::max(16, static_cast<int>(std::ceil(4.0 * len / f.spacing())));
  double sum = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = (k + 0.5) / samples;
    sum += f.interpolate(base + t * v.cartesian);
  }
  return sum * len / samples;
}

SystoleResult systole(const ConformalMetric& metric, const SystoleOptions& options) {
  const ScalarField& f = metric.factor();
  const Lattice2D& lattice = metric.lattice();
  const auto values = f.values();
  const auto min_it = std::min_element(values.begin(), values.end());
  const double fmin = *min_it;
  const auto min_pos = static_cast<std::size_t>(min_it - values.begin());
  const Vec2 min_point = f.point(static_cast<int>(min_pos / static_cast<std::size_t>(f.nv())),
                                 static_cast<int>(min_pos % static_cast<std::size_t>(f.nv())));

  // Upper bound from straight loops through the f-minimizing node in the
  // shortest directions.
  const Lattice2D reduced = gauss_reduce(lattice);
  double upper = kInf;
  for (const LatticeVector& v :
       primitive_vectors_up_to(lattice, norm(reduced.b2()) * (1.0 + 1e-9))) {
    upper = std::min(upper, straight_loop_length(metric, min_point, v));
  }

  SystoleResult result;
  double best = kInf;
  double enumerated = 0.0;
  double bound = upper * (1.0 + kMetricationBudget) / fmin;
  while (bound > enumerated) {
    for (const LatticeVector& v : primitive_vectors_up_to(lattice, bound)) {
      if (v.length() <= enumerated * (1.0 + 1e-12)) {
        continue;
      }
      if (v.length() * fmin >= best) {
        continue;
      }
      const auto sources = transversal_sources(f, v);
      ClassOutcome outcome = search_class(f, v, sources, best, fmin, options);
      ++result.classes_examined;
      if (outcome.distance < best) {
        best = outcome.distance;
        result.witness_class = v;
        result.witness_nodes = std::move(outcome.nodes);
      }
    }
    enumerated = bound;
    if (std::isfinite(best)) {
      bound = std::max(bound, best / fmin);
    }
  }
  if (!std::isfinite(best)) {
    throw NumericalError("systole search found no noncontractible loop");
  }
  // Report the length recomputed along the witness so both agree exactly.
  result.sys = path_length(f, result.witness_nodes);
  result.witness_path.reserve(result.witness_nodes.size());
  for (const GridIndex g : result.witness_nodes) {
    result.witness_path.push_back(f.point(g.i, g.j));
  }
  return result;
}

FubiniCheck fubini_bound_check(const ConformalMetric& metric, double sys) {
  FubiniCheck c;
  c.lhs = mean(metric);
  c.rhs = tau_of(metric.lattice()).sigma() * sys;
  c.tol = kMetricationBudget * c.rhs;
  c.ok = c.lhs >= c.rhs - c.tol;
  return c;
}

FubiniCheck fubini_bound_check(const ConformalMetric& metric) {
  return fubini_bound_check(metric, systole(metric).sys);
}

}  // namespace systolic
