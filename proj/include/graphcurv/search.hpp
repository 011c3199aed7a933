#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include "graphcurv/errors.hpp"
#include "graphcurv/model_space.hpp"

namespace graphcurv {

/// Radical-inverse Halton sequence over the first 31 primes.
inline double halton(std::uint64_t index, int dim) {
  static constexpr std::array<int, 31> primes{2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                              59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127};
  const int base = primes.at(std::size_t(dim));
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * double(index % base);
    index /= base;
  }
  return r;
}

/// Closest point of conv(points) to y, by Wolfe's minimum-norm-point
/// algorithm on the translated points.
inline Vec3 closestInHull(const std::vector<Vec3>& points, const Vec3& y) {
  const std::size_t n = points.size();
  if (n == 0) throw Error(ErrorCode::BadParams, "empty hull");
  std::vector<Vec3> p(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = points[i] - y;
    scale = std::max(scale, p[i].squaredNorm());
  }
  std::size_t first = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (p[i].squaredNorm() < p[first].squaredNorm()) first = i;
  std::vector<std::size_t> S{first};
  std::vector<double> lambda{1.0};
  Vec3 x = p[first];
  for (int major = 0; major < 1000; ++major) {
    std::size_t j = 0;
    double low = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      if (const double v = p[i].dot(x); v < low) low = v, j = i;
    if (x.squaredNorm() - low <= 1e-14 * scale || std::find(S.begin(), S.end(), j) != S.end()) break;
    S.push_back(j);
    lambda.push_back(0.0);
    for (int minor = 0; minor < 100; ++minor) {
      // Affine minimizer over S: [G 1; 1^T 0][mu; nu] = [0; 1].
      const std::size_t k = S.size();
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k + 1, k + 1);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(k + 1);
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t c = 0; c < k; ++c) A(a, c) = p[S[a]].dot(p[S[c]]);
        A(a, k) = A(k, a) = 1.0;
      }
      b(k) = 1.0;
      const Eigen::VectorXd sol = A.completeOrthogonalDecomposition().solve(b);
      bool positive = true;
      for (std::size_t a = 0; a < k; ++a) positive = positive && sol(a) > 1e-12;
      if (positive) {
        for (std::size_t a = 0; a < k; ++a) lambda[a] = sol(a);
        break;
      }
      double theta = 1.0;
      for (std::size_t a = 0; a < k; ++a)
        if (sol(a) <= 1e-12 && lambda[a] - sol(a) > 0) theta = std::min(theta, lambda[a] / (lambda[a] - sol(a)));
      for (std::size_t a = 0; a < k; ++a) lambda[a] += theta * (sol(a) - lambda[a]);
      std::vector<std::size_t> keepS;
      std::vector<double> keepL;
      for (std::size_t a = 0; a < k; ++a)
        if (lambda[a] > 1e-14) keepS.push_back(S[a]), keepL.push_back(lambda[a]);
      S = std::move(keepS);
      lambda = std::move(keepL);
      const double sum = std::accumulate(lambda.begin(), lambda.end(), 0.0);
      for (auto& l : lambda) l /= sum;
    }
    x.setZero();
    for (std::size_t a = 0; a < S.size(); ++a) x += lambda[a] * p[S[a]];
  }
  return x + y;
}

struct NelderMeadResult {
  Vec3 x;
  double value;
  int evaluations;
};

/// Nelder-Mead minimization in R^3 with standard coefficients. Stops when
/// the spread of simplex values is below `tol`, after `maxIter` iterations
/// or when `maxEvals` evaluations are spent.
inline NelderMeadResult nelderMead(const std::function<double(const Vec3&)>& f, const Vec3& start, double step,
                                   double tol, int maxIter, int maxEvals) {
  std::array<Vec3, 4> s;
  std::array<double, 4> v;
  int evals = 0;
  auto eval = [&](const Vec3& x) {
    ++evals;
    return f(x);
  };
  s[0] = start;
  v[0] = eval(start);
  for (int i = 0; i < 3 && evals < maxEvals; ++i) {
    s[i + 1] = start + step * Vec3::Unit(i);
    v[i + 1] = eval(s[i + 1]);
  }
  if (evals < 4) return {start, v[0], evals};
  for (int it = 0; it < maxIter && evals < maxEvals; ++it) {
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return v[a] < v[b]; });
    std::array<Vec3, 4> s2;
    std::array<double, 4> v2;
    for (int i = 0; i < 4; ++i) s2[i] = s[order[i]], v2[i] = v[order[i]];
    s = s2, v = v2;
    if (v[3] - v[0] <= tol) break;
    const Vec3 centroid = (s[0] + s[1] + s[2]) / 3.0;
    const Vec3 xr = centroid + (centroid - s[3]);
    const double fr = eval(xr);
    if (fr < v[0]) {
      if (evals >= maxEvals) {
        s[3] = xr, v[3] = fr;
        break;
      }
      const Vec3 xe = centroid + 2.0 * (centroid - s[3]);
      const double fe = eval(xe);
      if (fe < fr) s[3] = xe, v[3] = fe;
      else s[3] = xr, v[3] = fr;
    } else if (fr < v[2]) {
      s[3] = xr, v[3] = fr;
    } else {
      if (evals >= maxEvals) break;
      const bool outside = fr < v[3];
      const Vec3 xc = outside ? Vec3(centroid + 0.5 * (xr - centroid)) : Vec3(centroid + 0.5 * (s[3] - centroid));
      const double fc = eval(xc);
      if (fc < std::min(fr, v[3])) {
        s[3] = xc, v[3] = fc;
      } else {
        for (int i = 1; i < 4 && evals < maxEvals; ++i) {
          s[i] = s[0] + 0.5 * (s[i] - s[0]);
          v[i] = eval(s[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (v[i] < v[best]) best = i;
  return {s[best], v[best], evals};
}

/// Chart of the model in which geodesics are straight lines: the identity
/// (Euclidean), the Klein model (hyperbolic) or the gnomonic projection
/// about a center direction (spherical).
class GeodesicChart {
 public:
  GeodesicChart(const ModelSpace& space, const std::vector<Vec4>& points) : space_(space) {
    if (space.kind() == SpaceKind::Spherical) {
      Vec4 mean = Vec4::Zero();
      for (const auto& p : points) mean += p;
      if (!(mean.norm() > 0)) throw Error(ErrorCode::BadParams, "points have no gnomonic center");
      center_ = mean.normalized();
      basis_ = space.tangentBasis(center_ / space.kappa());
    }
  }

  Vec3 toChart(const Vec4& x) const {
    switch (space_.kind()) {
      case SpaceKind::Euclidean: return x.head<3>();
      case SpaceKind::Hyperbolic: return x.head<3>() / x.w();
      case SpaceKind::Spherical: {
        const double c = x.dot(center_);
        if (!(c > 0)) throw Error(ErrorCode::AntipodalPair, "point outside the gnomonic hemisphere");
        return Vec3(x.dot(basis_[0]), x.dot(basis_[1]), x.dot(basis_[2])) / c;
      }
    }
    return x.head<3>();
  }

  Vec4 fromChart(const Vec3& k) const {
    switch (space_.kind()) {
      case SpaceKind::Euclidean: return lift3(k);
      case SpaceKind::Hyperbolic: {
        const double q = 1.0 - k.squaredNorm();
        if (!(q > 0)) throw Error(ErrorCode::BadParams, "point outside the Klein ball");
        return Vec4(k.x(), k.y(), k.z(), 1.0) / (space_.kappa() * std::sqrt(q));
      }
      case SpaceKind::Spherical: {
        const Vec4 y = center_ + k.x() * basis_[0] + k.y() * basis_[1] + k.z() * basis_[2];
        return y / (space_.kappa() * y.norm());
      }
    }
    return lift3(k);
  }

  /// Upper bound of model distance per unit chart distance over the chart
  /// region within `radius` of the chart origin.
  double stretch(double radius) const {
    switch (space_.kind()) {
      case SpaceKind::Euclidean: return 1.0;
      case SpaceKind::Hyperbolic: {
        const double q = 1.0 - radius * radius;
        if (!(q > 0)) return std::numeric_limits<double>::infinity();
        return 1.0 / (space_.kappa() * q);
      }
      case SpaceKind::Spherical: return 1.0 / space_.kappa();
    }
    return 1.0;
  }

 private:
  ModelSpace space_;
  Vec4 center_ = Vec4::Zero();
  std::array<Vec4, 3> basis_{};
};

/// Geodesic convex hull of finitely many points, represented in a geodesic
/// chart where it is the Euclidean convex hull of the charted points.
class HullDomain {
 public:
  HullDomain(const ModelSpace& space, std::vector<Vec4> points)
      : space_(space), points_(std::move(points)), chart_(space, points_) {
    for (const auto& p : points_) chartPoints_.push_back(chart_.toChart(p));
    lo_ = hi_ = chartPoints_.front();
    for (const auto& c : chartPoints_) lo_ = lo_.cwiseMin(c), hi_ = hi_.cwiseMax(c);
    double r = 0.0;
    for (const auto& c : chartPoints_) r = std::max(r, c.norm());
    stretch_ = chart_.stretch(r);
  }

  const ModelSpace& space() const noexcept { return space_; }
  const GeodesicChart& chart() const noexcept { return chart_; }
  const std::vector<Vec4>& points() const noexcept { return points_; }
  const std::vector<Vec3>& chartPoints() const noexcept { return chartPoints_; }
  Vec3 lower() const { return lo_; }
  Vec3 upper() const { return hi_; }
  double chartDiameter() const { return (hi_ - lo_).norm(); }
  /// Model distance per unit chart distance inside the hull.
  double stretch() const { return stretch_; }

  Vec3 project(const Vec3& k) const { return closestInHull(chartPoints_, k); }

  /// Hull point from Halton index i: 16 leaves chosen from the points
  /// (dimensions 0..15) merged pairwise over four levels by weighted
  /// geodesic interpolation (weights from dimensions 16..30).
  Vec4 haltonPoint(std::uint64_t i) const {
    std::vector<Vec4> level;
    const auto n = double(points_.size());
    for (int d = 0; d < 16; ++d)
      level.push_back(points_[std::min(points_.size() - 1, std::size_t(halton(i, d) * n))]);
    int dim = 16;
    while (level.size() > 1) {
      std::vector<Vec4> next;
      for (std::size_t a = 0; a + 1 < level.size(); a += 2)
        next.push_back(space_.geodesic(level[a], level[a + 1], halton(i, dim++)));
      level = std::move(next);
    }
    return level.front();
  }

 private:
  ModelSpace space_;
  std::vector<Vec4> points_;
  GeodesicChart chart_;
  std::vector<Vec3> chartPoints_;
  Vec3 lo_, hi_;
  double stretch_ = 1.0;
};

struct HullSearchOptions {
  int budget = 1024;  // objective evaluations
  int maxSeeds = 512;
  double nmTol = 1e-8;
  int nmIterations = 200;
  double penalty = 1.0;  // weight of the distance-to-hull penalty
};

struct HullSearchResult {
  Vec4 apex = Vec4::Zero();
  double value = std::numeric_limits<double>::quiet_NaN();
  int evaluations = 0;
  int seeds = 0;
  bool approximate = true;
};

/// Minimizes `objective` over the hull: min(maxSeeds, budget) Halton seeds,
/// then Nelder-Mead from the best seed with the remaining evaluations.
/// Evaluations that throw are treated as +infinity. The evaluation
/// sequence for a smaller budget is a prefix of that for a larger one.
inline HullSearchResult hullMinimize(const HullDomain& hull, const std::function<double(const Vec4&)>& objective,
                                     const HullSearchOptions& opt) {
  if (opt.budget < 1) throw Error(ErrorCode::BadParams, "search budget must be positive");
  HullSearchResult out;
  auto safe = [&](const Vec4& p) {
    try {
      const double v = objective(p);
      return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const int seeds = std::min(opt.maxSeeds, opt.budget);
  double best = std::numeric_limits<double>::infinity();
  Vec4 bestApex = hull.points().front();
  for (int i = 1; i <= seeds; ++i) {
    const Vec4 p = hull.haltonPoint(std::uint64_t(i));
    const double v = safe(p);
    ++out.evaluations;
    if (v < best) best = v, bestApex = p;
  }
  out.seeds = seeds;
  const int remaining = opt.budget - seeds;
  if (remaining >= 4 && std::isfinite(best)) {
    auto penalized = [&](const Vec3& k) {
      const Vec3 inside = hull.project(k);
      const double v = safe(hull.chart().fromChart(inside));
      return v + opt.penalty * (k - inside).norm();
    };
    const auto nm = nelderMead(penalized, hull.chart().toChart(bestApex), 0.05 * hull.chartDiameter(), opt.nmTol,
                               opt.nmIterations, remaining);
    out.evaluations += nm.evaluations;
    const Vec4 p = hull.chart().fromChart(hull.project(nm.x));
    const double v = safe(p);
    if (v < best) best = v, bestApex = p;
  }
  out.apex = bestApex;
  out.value = best;
  return out;
}

struct LipschitzBoundResult {
  double bound;       // certified lower bound of the minimum over the hull
  double bestValue;   // smallest evaluated value
  Vec4 bestApex;
  int evaluations;
  double gap() const { return bestValue - bound; }
};

/// Certified lower bound of min f over the hull for an f that is
/// `lipschitz`-Lipschitz in model distance. Best-first branch-and-bound on
/// octree cells of the chart bounding box; each cell is evaluated at the
/// projection of its center onto the hull, which is within the cell radius
/// of every hull point in the cell. The bound never decreases as the budget
/// grows. `floor` is an a-priori lower bound (e.g. 0 for areas); `margin`
/// absorbs evaluation error.
inline LipschitzBoundResult lipschitzLowerBound(const HullDomain& hull, const std::function<double(const Vec4&)>& f,
                                                double lipschitz, int budget, double floor, double margin) {
  const double L = lipschitz * hull.stretch();
  struct Cell {
    Vec3 center;
    double half;  // half edge length
    double lowerBound;
    bool operator<(const Cell& o) const { return lowerBound > o.lowerBound; }
  };
  LipschitzBoundResult out{floor, std::numeric_limits<double>::infinity(), hull.points().front(), 0};
  std::priority_queue<Cell> open;
  auto visit = [&](const Vec3& center, double half) {
    const double radius = std::sqrt(3.0) * half;
    const Vec3 p = hull.project(center);
    if ((p - center).norm() > radius) return;  // cell misses the hull
    const Vec4 apex = hull.chart().fromChart(p);
    const double v = f(apex);
    ++out.evaluations;
    if (v < out.bestValue) out.bestValue = v, out.bestApex = apex;
    open.push({center, half, std::max(floor, v - margin - L * radius)});
  };
  const Vec3 lo = hull.lower(), hi = hull.upper();
  visit(0.5 * (lo + hi), 0.5 * (hi - lo).maxCoeff() + 1e-12);
  while (!open.empty() && out.evaluations + 8 <= budget) {
    const Cell c = open.top();
    if (c.lowerBound >= out.bestValue - margin) break;  // bound is already tight
    open.pop();
    const double h = c.half / 2;
    for (int k = 0; k < 8; ++k)
      visit(c.center + h * Vec3((k & 1) ? 1 : -1, (k & 2) ? 1 : -1, (k & 4) ? 1 : -1), h);
  }
  out.bound = open.empty() ? std::min(out.bestValue, std::max(floor, out.bestValue - margin))
                           : std::min(open.top().lowerBound, out.bestValue);
  return out;
}

}  // namespace graphcurv
