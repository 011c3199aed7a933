#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "graphcurv/errors.hpp"
#include "graphcurv/graph.hpp"
#include "graphcurv/model_space.hpp"

namespace graphcurv {

/// Unit tangent directions T_1..T_d at one vertex, in an orthonormal frame.
struct TangentConfiguration {
  std::vector<Vec3> directions;

  TangentConfiguration() = default;
  explicit TangentConfiguration(std::vector<Vec3> dirs) : directions(std::move(dirs)) {
    if (directions.size() < 2) throw Error(ErrorCode::BadParams, "a tangent configuration needs d >= 2");
    for (auto& t : directions) {
      const double n = t.norm();
      if (!(n > 0.0) || !t.allFinite()) throw Error(ErrorCode::BadParams, "tangent direction is degenerate");
      t /= n;
    }
  }

  std::size_t valence() const noexcept { return directions.size(); }
};

enum class SteinerMethod { Valence2Exact, Valence3Exact, Valence4Candidates, GeneralDescent, GridOracle };

inline std::string methodName(SteinerMethod m) {
  switch (m) {
    case SteinerMethod::Valence2Exact: return "Valence2Exact";
    case SteinerMethod::Valence3Exact: return "Valence3Exact";
    case SteinerMethod::Valence4Candidates: return "Valence4Candidates";
    case SteinerMethod::GeneralDescent: return "GeneralDescent";
    case SteinerMethod::GridOracle: return "GridOracle";
  }
  return "GeneralDescent";
}

struct SteinerCertificate {
  int candidateCount = 0;  // points at which the objective was compared
  double residual = 0.0;   // Riemannian gradient norm at the winner (descent) or guaranteed gap (grid)
  int restarts = 0;
};

struct SteinerResult {
  Vec3 e0 = Vec3::UnitZ();
  double angleSum = 0.0;
  double tc = 0.0;
  SteinerMethod method = SteinerMethod::GeneralDescent;
  SteinerCertificate certificate;
};

/// Angle between two unit vectors, accurate near 0 and pi.
inline double unitAngle(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

/// Sum of the angles beta_l(e) between e and every T_l.
inline double angleObjective(const TangentConfiguration& config, const Vec3& e) {
  double sum = 0.0;
  for (const auto& t : config.directions) sum += unitAngle(t, e);
  return sum;
}

namespace detail {

inline Vec3 sphereExp(const Vec3& e, const Vec3& v) {
  const double s = v.norm();
  if (s < 1e-300) return e;
  return (std::cos(s) * e + (std::sin(s) / s) * v).normalized();
}

/// Unit tangent at e of the geodesic towards t; zero if t = +-e.
inline Vec3 towards(const Vec3& e, const Vec3& t) {
  const Vec3 v = t - t.dot(e) * e;
  const double n = v.norm();
  return n > 1e-15 ? Vec3(v / n) : Vec3::Zero();
}

/// Riemannian gradient of the angle sum, dropping the terms that are
/// singular at e (e = +-T_l).
inline Vec3 objectiveGradient(const TangentConfiguration& config, const Vec3& e) {
  Vec3 g = Vec3::Zero();
  for (const auto& t : config.directions) g -= towards(e, t);
  return g;
}

inline bool lexLess(const Vec3& a, const Vec3& b) {
  for (int i = 0; i < 3; ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

/// Running minimum with deterministic tie-breaking: values within `tie` of
/// the best are compared by lexicographic order of e.
struct Best {
  double value = std::numeric_limits<double>::infinity();
  Vec3 e = Vec3::UnitZ();
  int count = 0;
  static constexpr double tie = 1e-13;

  void offer(const Vec3& cand, double v) {
    ++count;
    if (v < value - tie || (v <= value + tie && lexLess(cand, e))) {
      e = cand;
      value = std::min(value, v);
    }
  }
};

inline SteinerResult finish(const TangentConfiguration& c, const Best& best, SteinerMethod m) {
  SteinerResult r;
  r.e0 = best.e;
  r.angleSum = angleObjective(c, best.e);
  r.tc = double(c.valence()) * std::numbers::pi / 2.0 - r.angleSum;
  r.method = m;
  r.certificate.candidateCount = best.count;
  return r;
}

/// Orthonormal (a, b) spanning the plane orthogonal to unit n.
inline std::pair<Vec3, Vec3> planeBasis(const Vec3& n) {
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(n[i]) < std::abs(n[axis])) axis = i;
  const Vec3 a = (Vec3::Unit(axis) - n[axis] * n).normalized();
  return {a, n.cross(a)};
}

/// Minimizes the objective along the great circle with unit normal n:
/// 720 samples, then golden-section refinement around the best sample.
inline void circleSearch(const TangentConfiguration& c, const Vec3& n, Best& best) {
  const auto [a, b] = planeBasis(n);
  auto point = [&](double th) { return Vec3(std::cos(th) * a + std::sin(th) * b); };
  auto f = [&](double th) { return angleObjective(c, point(th)); };
  constexpr int samples = 720;
  const double step = 2.0 * std::numbers::pi / samples;
  int arg = 0;
  double low = f(0.0);
  for (int i = 1; i < samples; ++i)
    if (const double v = f(i * step); v < low) low = v, arg = i;
  double lo = (arg - 1) * step, hi = (arg + 1) * step;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - g * (hi - lo), f1 = f(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + g * (hi - lo), f2 = f(x2);
    }
  }
  best.offer(point(arg * step), low);
  const Vec3 e = point(0.5 * (lo + hi));
  best.offer(e, angleObjective(c, e));
}

/// Riemannian Weiszfeld iteration for the geodesic median of the T_l.
/// Returns false when it fails to converge.
inline bool weiszfeld(const TangentConfiguration& c, Vec3 e, Vec3& out) {
  for (int it = 0; it < 200; ++it) {
    Vec3 num = Vec3::Zero();
    double den = 0.0;
    for (const auto& t : c.directions) {
      const double d = unitAngle(e, t);
      if (d < 1e-15) {
        out = e;  // landed on a vertex; it is a candidate anyway
        return true;
      }
      num += towards(e, t);  // log_e(t) / d(e, t)
      den += 1.0 / d;
    }
    const Vec3 step = 0.5 * num / den;
    e = sphereExp(e, step);
    if (step.norm() < 1e-12) {
      out = e;
      return true;
    }
  }
  return false;
}

/// Fibonacci-sphere point i of n.
inline Vec3 fibonacciPoint(int i, int n) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const double z = 1.0 - (2.0 * i + 1.0) / n;
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Vec3(r * std::cos(golden * i), r * std::sin(golden * i), z);
}

/// Projected (sub)gradient descent from one start.
inline Vec3 descend(const TangentConfiguration& c, Vec3 e, double& value, double& residual) {
  value = angleObjective(c, e);
  double eta = 1.0;
  residual = 0.0;
  for (int it = 0; it < 500; ++it) {
    const Vec3 g = objectiveGradient(c, e);
    residual = g.norm();
    if (residual < 1e-10) break;
    bool moved = false;
    while (eta >= 1e-14) {
      Vec3 step = -eta * g;
      if (step.norm() > std::numbers::pi / 2) step *= (std::numbers::pi / 2) / step.norm();
      const Vec3 trial = sphereExp(e, step);
      const double v = angleObjective(c, trial);
      if (v < value) {
        e = trial, value = v, moved = true;
        eta = std::min(1.0, 1.5 * eta);
        break;
      }
      eta *= 0.5;
    }
    if (!moved) break;
  }
  return e;
}

}  // namespace detail

/// Valence two: the minimum is the geodesic distance d(T1,T2), attained
/// along the whole connecting arc; T1 and T2 are compared for the tie-break.
inline SteinerResult steinerValence2(const TangentConfiguration& c) {
  if (c.valence() != 2) throw Error(ErrorCode::BadParams, "steinerValence2 needs d = 2");
  detail::Best best;
  for (const auto& t : c.directions) best.offer(t, angleObjective(c, t));
  auto r = detail::finish(c, best, SteinerMethod::Valence2Exact);
  return r;
}

inline SteinerResult steinerGridOracle(const TangentConfiguration& config, double resolution);

/// Valence three: the minimizer is either one of the T_l or an interior
/// Fermat point where the unit directions towards the T_l balance.
inline SteinerResult steinerValence3(const TangentConfiguration& c) {
  if (c.valence() != 3) throw Error(ErrorCode::BadParams, "steinerValence3 needs d = 3");
  detail::Best best;
  for (const auto& t : c.directions) best.offer(t, angleObjective(c, t));
  Vec3 sum = c.directions[0] + c.directions[1] + c.directions[2];
  std::vector<Vec3> starts;
  if (sum.norm() > 1e-9) starts = {sum.normalized(), -sum.normalized()};
  else starts = {c.directions[0].cross(c.directions[1]).normalized()};
  bool fallback = false;
  for (const auto& s : starts) {
    Vec3 fermat;
    if (detail::weiszfeld(c, s, fermat)) best.offer(fermat, angleObjective(c, fermat));
    else fallback = true;
  }
  if (fallback) {
    const auto grid = steinerGridOracle(c, 0.01);
    double v, res;
    const Vec3 e = detail::descend(c, grid.e0, v, res);
    best.offer(e, v);
  }
  auto r = detail::finish(c, best, SteinerMethod::Valence3Exact);
  r.certificate.restarts = int(starts.size());
  return r;
}

/// Valence four: candidates are the four T_l and the intersections of the
/// great circles through complementary pairs. A pairing whose circle is not
/// unique (antipodal pair) or whose two circles coincide is handled by a 1-D
/// search over the circles involved.
inline SteinerResult steinerValence4(const TangentConfiguration& c) {
  if (c.valence() != 4) throw Error(ErrorCode::BadParams, "steinerValence4 needs d = 4");
  const auto& T = c.directions;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if ((T[i] - T[j]).norm() < 1e-12)
        throw Error(ErrorCode::DuplicateDirection,
                    "directions " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
  detail::Best best;
  for (const auto& t : T) best.offer(t, angleObjective(c, t));
  constexpr std::array<std::array<int, 4>, 3> pairings{{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
  for (const auto& p : pairings) {
    const Vec3 n1 = T[p[0]].cross(T[p[1]]), n2 = T[p[2]].cross(T[p[3]]);
    const bool deg1 = n1.norm() < 1e-9, deg2 = n2.norm() < 1e-9;
    if (deg1 || deg2) {
      if (!deg1) detail::circleSearch(c, n1.normalized(), best);
      if (!deg2) detail::circleSearch(c, n2.normalized(), best);
      continue;
    }
    const Vec3 cross = n1.normalized().cross(n2.normalized());
    if (cross.norm() < 1e-9) {
      detail::circleSearch(c, n1.normalized(), best);
      continue;
    }
    for (const Vec3& e : {Vec3(cross.normalized()), Vec3(-cross.normalized())}) best.offer(e, angleObjective(c, e));
  }
  return detail::finish(c, best, SteinerMethod::Valence4Candidates);
}

/// Multistart descent for any valence. Starts: every T_l, the geodesic
/// midpoints of every non-antipodal pair, and 32 quasi-uniform points under
/// a rotation drawn from `seed`.
inline SteinerResult steinerGeneral(const TangentConfiguration& c, std::uint64_t seed = 0) {
  const auto& T = c.directions;
  std::vector<Vec3> starts(T.begin(), T.end());
  for (std::size_t i = 0; i < T.size(); ++i)
    for (std::size_t j = i + 1; j < T.size(); ++j)
      if (const Vec3 m = T[i] + T[j]; m.norm() > 1e-9) starts.push_back(m.normalized());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  q.normalize();
  const Eigen::Matrix3d rot = q.toRotationMatrix();
  for (int i = 0; i < 32; ++i) starts.push_back(rot * detail::fibonacciPoint(i, 32));

  detail::Best best;
  double bestResidual = 0.0;
  for (const auto& s : starts) {
    double v, res;
    const Vec3 e = detail::descend(c, s, v, res);
    const Vec3 before = best.e;
    const double beforeValue = best.value;
    best.offer(e, v);
    if (best.e != before || best.value != beforeValue) bestResidual = res;
  }
  auto r = detail::finish(c, best, SteinerMethod::GeneralDescent);
  r.certificate.residual = bestResidual;
  r.certificate.restarts = int(starts.size());
  return r;
}

/// Verification oracle. Branch-and-bound over gnomonic cube-sphere cells:
/// the objective is d-Lipschitz, so a cell whose center value minus d times
/// its radius exceeds the incumbent cannot hold the minimum. Cells are split
/// until their radius is at most `resolution`, which bounds the returned
/// angle sum to within d * resolution of the true minimum. A compass-search
/// polish follows.
inline SteinerResult steinerGridOracle(const TangentConfiguration& c, double resolution) {
  if (!(resolution > 0.0 && resolution <= 0.1))
    throw Error(ErrorCode::BadParams, "grid resolution must lie in (0, 0.1]");
  const double lip = double(c.valence());
  struct Cell {
    int face;
    double u0, v0, size;
  };
  auto toSphere = [](int face, double u, double v) {
    Vec3 p;
    const double s = face < 3 ? 1.0 : -1.0;
    switch (face % 3) {
      case 0: p = Vec3(s, u, v); break;
      case 1: p = Vec3(v, s, u); break;
      default: p = Vec3(u, v, s); break;
    }
    return Vec3(p.normalized());
  };
  detail::Best best;
  std::vector<Cell> level;
  for (int f = 0; f < 6; ++f) level.push_back({f, -1.0, -1.0, 2.0});
  double worstGap = 0.0;
  int evaluations = 0;
  while (!level.empty()) {
    struct Scored {
      Cell cell;
      double value, radius;
      Vec3 center;
    };
    std::vector<Scored> scored;
    scored.reserve(level.size());
    for (const auto& cell : level) {
      const double h = cell.size / 2;
      const Vec3 center = toSphere(cell.face, cell.u0 + h, cell.v0 + h);
      double radius = 0.0;
      for (int k = 0; k < 4; ++k) {
        const Vec3 corner = toSphere(cell.face, cell.u0 + (k & 1) * cell.size, cell.v0 + (k >> 1) * cell.size);
        radius = std::max(radius, unitAngle(center, corner));
      }
      const double value = angleObjective(c, center);
      ++evaluations;
      best.offer(center, value);
      scored.push_back({cell, value, radius, center});
    }
    std::vector<Cell> next;
    for (const auto& s : scored) {
      if (s.value - lip * s.radius > best.value) continue;
      if (s.radius <= resolution) {
        worstGap = std::max(worstGap, best.value - (s.value - lip * s.radius));
        continue;
      }
      const double h = s.cell.size / 2;
      for (int k = 0; k < 4; ++k) next.push_back({s.cell.face, s.cell.u0 + (k & 1) * h, s.cell.v0 + (k >> 1) * h, h});
    }
    level = std::move(next);
  }
  // Compass polish in the tangent plane of the incumbent.
  Vec3 e = best.e;
  double value = best.value;
  for (double h = resolution; h > 1e-12;) {
    const auto [a, b] = detail::planeBasis(e);
    bool improved = false;
    for (const Vec3& dir : {a, Vec3(-a), b, Vec3(-b)}) {
      const Vec3 trial = detail::sphereExp(e, h * dir);
      const double v = angleObjective(c, trial);
      ++evaluations;
      if (v < value) {
        e = trial, value = v, improved = true;
        break;
      }
    }
    if (!improved) h *= 0.5;
  }
  best.offer(e, value);
  auto r = detail::finish(c, best, SteinerMethod::GridOracle);
  r.certificate.candidateCount = evaluations;
  r.certificate.residual = worstGap;
  return r;
}

/// Equilateral-triple transition radius: root of
/// 3(pi/2 - b) = 3pi/2 - 4 asin(sqrt(3)/2 sin b) in (0, pi/2), by bisection.
inline double solveR0() {
  auto g = [](double b) { return 4.0 * std::asin(0.5 * std::sqrt(3.0) * std::sin(b)) - 3.0 * b; };
  double lo = 0.1, hi = std::numbers::pi / 2;  // g(lo) > 0 > g(hi)
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Tangents at a graph vertex expressed in the orthonormal tangent frame of
/// the model at that vertex.
inline TangentConfiguration tangentConfiguration(const EmbeddedGraph& g, const std::string& vertexId) {
  const auto& v = g.vertex(vertexId);
  const auto basis = g.space().tangentBasis(v.position);
  std::vector<Vec3> dirs;
  for (const auto& t : vertexTangents(g, vertexId)) dirs.push_back(tangentCoordinates(g.space(), basis, t));
  return TangentConfiguration(std::move(dirs));
}

/// Dispatches on valence. With `crossCheck`, valence >= 5 results are
/// compared against the grid oracle at resolution 0.005.
inline SteinerResult steinerDispatch(const TangentConfiguration& c, std::uint64_t seed = 0, bool crossCheck = false) {
  switch (c.valence()) {
    case 2: return steinerValence2(c);
    case 3: return steinerValence3(c);
    case 4: return steinerValence4(c);
    default: break;
  }
  auto r = steinerGeneral(c, seed);
  if (crossCheck) {
    const auto grid = steinerGridOracle(c, 0.005);
    if (std::abs(grid.angleSum - r.angleSum) > double(c.valence()) * 0.005 + 1e-9)
      throw Error(ErrorCode::QuadratureNonconverged, "descent disagrees with the grid oracle");
  }
  return r;
}

inline SteinerResult vertexTC(const EmbeddedGraph& g, const std::string& vertexId, std::uint64_t seed = 0,
                              bool crossCheck = false) {
  const auto& v = g.vertex(vertexId);
  if (v.valence() < 2) throw Error(ErrorCode::InvalidGraph, "vertex '" + vertexId + "' has valence below 2");
  return steinerDispatch(tangentConfiguration(g, vertexId), seed, crossCheck);
}

}  // namespace graphcurv
