#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "graphcurv/cone_density.hpp"
#include "graphcurv/curvature.hpp"
#include "graphcurv/graph.hpp"
#include "graphcurv/search.hpp"

namespace graphcurv {

/// Length of an arc in the model metric.
inline double arcLength(const ArcGeometry& arc, const ModelSpace& space, const QuadratureConfig& cfg = {}) {
  return integrateOverPieces(arc, space, cfg, [&](const Jet& j) {
    return space.norm(space.projectTangent(j.pos, j.d1));
  }).value;
}

inline double graphLength(const EmbeddedGraph& g, const QuadratureConfig& cfg = {}) {
  double total = 0.0;
  for (const auto& arc : g.arcs()) total += arcLength(arc.geometry, g.space(), cfg);
  return total;
}

/// Area of the geodesic cone over the graph with the given apex, in the
/// metric induced from the model: the fan F(t, s) = geodesic(apex, x(t), s)
/// integrated with area element sqrt(EG - F^2). The metric coefficients come
/// from central differences of the embedded coordinates, Richardson
/// extrapolated.
inline double coneAreaInduced(const EmbeddedGraph& g, const Vec4& apex, const QuadratureConfig& cfg = {}) {
  cfg.check();
  const auto& space = g.space();
  const double h = cfg.differentiationStep;
  double total = 0.0;
  for (const auto& arc : g.arcs()) {
    const double apexTol = detail::apexTolerance(arc.geometry, space);
    if (detail::distanceToArc(arc.geometry, apex, space) <= 1e3 * apexTol)
      throw Error(ErrorCode::ApexOnArc, "the apex lies on the arc");
    for (const auto& piece : smoothPieces(arc.geometry, space)) {
      auto fan = [&](double tau, double s) { return space.geodesic(apex, piece.eval(tau).pos, s); };
      auto diff = [](auto&& f, double x, double step) {
        const Vec4 d1 = (f(x + step) - f(x - step)) / (2 * step);
        const Vec4 d2 = (f(x + step / 2) - f(x - step / 2)) / step;
        return Vec4((4.0 * d2 - d1) / 3.0);
      };
      auto element = [&](double tau, double s) {
        const Vec4 ft = diff([&](double x) { return fan(x, s); }, tau, h);
        const Vec4 fs = diff([&](double x) { return fan(tau, x); }, s, h);
        // Gram-Schmidt instead of EG - F^2, which cancels badly on thin fans.
        const double G = space.inner(fs, fs);
        if (!(G > 0.0)) return 0.0;
        const Vec4 perp = ft - (space.inner(ft, fs) / G) * fs;
        return std::sqrt(std::max(space.inner(perp, perp), 0.0) * G);
      };
      // Differencing loses digits in proportion to the size of the embedded
      // coordinates relative to the fan (large in hyperbolic space far from
      // the origin); tolerances below that noise floor cannot be met.
      double reach = 0.0, near = std::numeric_limits<double>::infinity(), coords = apex.norm();
      for (double tau : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const Vec4 x = piece.eval(tau).pos;
        const double d = space.dist(apex, x);
        reach = std::max(reach, d), near = std::min(near, d), coords = std::max(coords, x.norm());
      }
      const double noise = 100.0 * std::numeric_limits<double>::epsilon() * coords / (std::max(near, 1e-300) * h);
      QuadratureConfig outer = cfg;
      outer.relTol = std::min(1e-3, std::max(cfg.relTol, noise));
      QuadratureConfig inner = outer;
      inner.absTol = std::max(cfg.absTol, 1e-3 * outer.relTol * reach * reach);
      total += integrate(
                   [&](double tau) { return integrate([&](double s) { return element(tau, s); }, 0.0, 1.0, inner).value; },
                   0.0, 1.0, outer)
                   .value;
    }
  }
  return total;
}

struct ComparisonArea {
  double area = 0.0;
  double density = 0.0;
};

namespace detail {

inline double comparisonProfile(const ModelSpace& space, double r) {
  const double k = space.kappa();
  switch (space.kind()) {
    case SpaceKind::Euclidean: return r / 2;
    case SpaceKind::Hyperbolic: return std::tanh(k * r / 2) / k;
    case SpaceKind::Spherical: return std::tan(k * r / 2) / k;
  }
  return r / 2;
}

/// Comparison-cone area without the apex and tangency preconditions. The
/// integrand speed * sin * Phi(r) extends continuously by zero wherever r or
/// the sine vanishes, which is what an apex search needs near the graph.
inline double comparisonAreaRelaxed(const EmbeddedGraph& g, const Vec4& apex, const QuadratureConfig& cfg) {
  const auto& space = g.space();
  double area = 0.0;
  for (const auto& arc : g.arcs())
    area += integrateOverPieces(arc.geometry, space, cfg, [&](const Jet& j) {
      const double r = space.dist(j.pos, apex);
      if (!(r > 0.0)) return 0.0;
      const Vec4 vel = space.projectTangent(j.pos, j.d1);
      const Vec4 toApex = space.projectTangent(j.pos, apex - j.pos);
      const double nv = space.norm(vel), na = space.norm(toApex);
      if (!(na > 0.0)) return 0.0;
      // Perpendicular part taken directly: sqrt(1 - c^2) turns rounding in c
      // into 1e-8 noise along radial segments.
      const Vec4 perp = toApex - (space.inner(toApex, vel) / (nv * nv)) * vel;
      return nv * (space.norm(perp) / na) * comparisonProfile(space, r);
    }).value;
  return area;
}

}  // namespace detail

/// Area of the comparison cone (the cone metric with the model's constant
/// curvature written in polar coordinates about the apex) and its density
/// at the apex, the link length over 2pi. Both are one-dimensional
/// integrals along the graph of sqrt(s'^2 - r'^2) against the radial
/// profiles Phi(r) and 1/S(r).
inline ComparisonArea coneAreaComparison(const EmbeddedGraph& g, const Vec4& apex, const QuadratureConfig& cfg = {}) {
  const auto& space = g.space();
  ComparisonArea out;
  for (const auto& arc : g.arcs()) {
    const double apexTol = detail::apexTolerance(arc.geometry, space);
    if (detail::distanceToArc(arc.geometry, apex, space) <= 1e3 * apexTol)
      throw Error(ErrorCode::ApexOnArc, "the apex lies on the arc");
    auto transverse = [&](const Jet& j, double& r) {
      const auto f = detail::radialFrame(space, j, apex, apexTol);
      const double speed = space.norm(space.projectTangent(j.pos, j.d1));
      const double sine = space.norm(f.toApex - space.inner(f.toApex, f.tangent) * f.tangent);
      if (!(sine > kTangencyTolerance)) throw Error(ErrorCode::RadialTangency, "arc is tangent to the direction of the apex");
      r = f.distance;
      return speed * sine;
    };
    out.area += integrateOverPieces(arc.geometry, space, cfg, [&](const Jet& j) {
      double r;
      const double w = transverse(j, r);
      return w * detail::comparisonProfile(space, r);
    }).value;
    out.density += integrateOverPieces(arc.geometry, space, cfg, [&](const Jet& j) {
      double r;
      const double w = transverse(j, r);
      return w / space.radialS(r);
    }).value;
  }
  out.density /= 2.0 * std::numbers::pi;
  return out;
}

struct ConeAreaReport {
  Vec4 apex = Vec4::Zero();
  double areaInduced = 0.0;
  double areaComparison = 0.0;
  double densityComparison = 0.0;
};

inline ConeAreaReport coneAreas(const EmbeddedGraph& g, const Vec4& apex, const QuadratureConfig& cfg = {}) {
  const auto c = coneAreaComparison(g, apex, cfg);
  return {apex, coneAreaInduced(g, apex, cfg), c.area, c.density};
}

/// Parallel transport of v along the geodesic from p to q.
inline Vec4 parallelTransport(const ModelSpace& space, const Vec4& p, const Vec4& q, const Vec4& v) {
  if (space.isEuclidean()) return v;
  const double d = space.dist(p, q);
  if (d == 0.0) return v;
  const Vec4 e = space.initialDirection(p, q);
  const double th = space.kappa() * d, k = space.kappa();
  const Vec4 arrival = space.kind() == SpaceKind::Spherical ? Vec4(-k * std::sin(th) * p + std::cos(th) * e)
                                                             : Vec4(k * std::sinh(th) * p + std::cosh(th) * e);
  return v + space.inner(v, e) * (arrival - e);
}

/// Carries a Euclidean graph into a model by the exponential map at the
/// model origin. Segments become geodesic segments between the lifted
/// endpoints, circles keep their geodesic radius about the lifted center
/// with the plane normal and start direction parallel transported. Lifted
/// circles generally miss the lifted vertices by O(kappa^2), so the result
/// is meant for limit comparisons rather than validation.
inline EmbeddedGraph liftToModel(const EmbeddedGraph& g, const ModelSpace& space) {
  if (!g.space().isEuclidean()) throw Error(ErrorCode::UnsupportedSpace, "liftToModel takes a Euclidean graph");
  const Vec4 o = space.origin();
  auto liftPoint = [&](const Vec4& x) { return space.isEuclidean() ? x : space.exp(o, lift3(x.head<3>())); };
  auto liftCircle = [&](const CircularArc& c) {
    const ModelSpace flat;
    const auto [u, w] = circleFrame(flat, c.center, c.normal);
    CircularArc m;
    m.center = liftPoint(c.center);
    m.radius = c.radius;
    m.normal = parallelTransport(space, o, m.center, lift3(c.normal.head<3>()));
    const auto [um, wm] = circleFrame(space, m.center, m.normal);
    auto transported = [&](double angle) {
      const Vec4 d = std::cos(angle) * u + std::sin(angle) * w;
      return parallelTransport(space, o, m.center, lift3(d.head<3>()));
    };
    const Vec4 d0 = transported(c.angle0);
    m.angle0 = std::atan2(space.inner(d0, wm), space.inner(d0, um));
    m.angle1 = m.angle0 + (c.angle1 - c.angle0);
    return m;
  };
  auto liftPrimitive = [&](const PrimitiveArc& p) -> PrimitiveArc {
    if (const auto* s = std::get_if<Segment>(&p)) return Segment{liftPoint(s->start), liftPoint(s->end)};
    return liftCircle(std::get<CircularArc>(p));
  };
  std::vector<VertexSpec> vertices;
  for (const auto& v : g.vertices()) vertices.push_back({v.id, liftPoint(v.position)});
  std::vector<GraphArc> arcs;
  for (const auto& a : g.arcs()) {
    GraphArc out{a.id, a.from, a.to, a.geometry};
    if (const auto* s = std::get_if<Segment>(&a.geometry)) out.geometry = std::get<Segment>(liftPrimitive(*s));
    else if (const auto* c = std::get_if<CircularArc>(&a.geometry)) out.geometry = liftCircle(*c);
    else if (const auto* line = std::get_if<Polyline>(&a.geometry)) {
      std::vector<Vec4> pts;
      for (const auto& x : line->points()) pts.push_back(liftPoint(x));
      out.geometry = Polyline(std::move(pts));
    } else {
      Composite comp;
      for (const auto& p : std::get<Composite>(a.geometry).pieces) comp.pieces.push_back(liftPrimitive(p));
      out.geometry = std::move(comp);
    }
    arcs.push_back(std::move(out));
  }
  return EmbeddedGraph(space, vertices, std::move(arcs), g.notes());
}

struct ExtremalAreaResult {
  Vec4 apex = Vec4::Zero();
  double area = 0.0;
  int evaluations = 0;
  bool approximate = true;
};

namespace detail {

inline HullDomain coneHull(const EmbeddedGraph& g) { return HullDomain(g.space(), samplePoints(g, 4)); }

inline HullSearchOptions areaSearchOptions(const HullDomain& hull, int budget) {
  if (budget < 1) throw Error(ErrorCode::BadParams, "search budget must be positive");
  HullSearchOptions opt;
  opt.budget = budget;
  opt.maxSeeds = std::max(1, std::min(512, budget / 2));
  opt.penalty = 1.0;
  (void)hull;
  return opt;
}

}  // namespace detail

/// Smallest cone area over apexes in the geodesic convex hull of the graph
/// (hyperbolic or Euclidean). The objective is the comparison area, which
/// equals the induced area in a constant-curvature model. Best found value.
inline ExtremalAreaResult minConeArea(const EmbeddedGraph& g, const QuadratureConfig& cfg = {}, int budget = 1024) {
  if (g.space().kind() == SpaceKind::Spherical) throw Error(ErrorCode::UnsupportedSpace, "minConeArea is for hyperbolic or Euclidean graphs");
  const auto hull = detail::coneHull(g);
  const auto r = hullMinimize(hull, [&](const Vec4& p) { return detail::comparisonAreaRelaxed(g, p, cfg); },
                              detail::areaSearchOptions(hull, budget));
  return {r.apex, r.value, r.evaluations, true};
}

/// Largest comparison cone area over apexes in the hull (spherical).
inline ExtremalAreaResult maxSphericalConeArea(const EmbeddedGraph& g, const QuadratureConfig& cfg = {}, int budget = 1024) {
  if (g.space().kind() != SpaceKind::Spherical) throw Error(ErrorCode::UnsupportedSpace, "maxSphericalConeArea is for spherical graphs");
  const auto hull = detail::coneHull(g);
  const auto r = hullMinimize(hull, [&](const Vec4& p) { return -detail::comparisonAreaRelaxed(g, p, cfg); },
                              detail::areaSearchOptions(hull, budget));
  return {r.apex, -r.value, r.evaluations, true};
}

/// Certified bound on the extremal cone area by Lipschitz branch-and-bound
/// over the hull: a lower bound of the minimum (hyperbolic, Euclidean) or
/// an upper bound of the maximum (spherical). Moving the apex by delta
/// changes the fan integrand sin(psi) Phi(r) by at most Phi'(r) delta, since
/// Phi/S = Phi' in every model; Phi' <= 1/2 off the sphere and
/// 1/(2 cos^2(kappa r/2)) on it.
inline LipschitzBoundResult extremalAreaBound(const EmbeddedGraph& g, const QuadratureConfig& cfg, int budget) {
  if (budget < 1) throw Error(ErrorCode::BadParams, "search budget must be positive");
  const auto hull = detail::coneHull(g);
  const bool sphere = g.space().kind() == SpaceKind::Spherical;
  double slope = 0.5;
  if (sphere) {
    double reach = 0.0;
    const auto& pts = hull.points();
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t k = i + 1; k < pts.size(); ++k) reach = std::max(reach, g.space().dist(pts[i], pts[k]));
    // Samples can undershoot the true diameter slightly.
    const double c = std::cos(std::min(g.space().kappa() * 1.05 * reach, std::numbers::pi / 2) / 2);
    slope = std::min(1.0, 0.5 / (c * c));
  }
  const double L = slope * graphLength(g, cfg);
  const double sign = sphere ? -1.0 : 1.0;
  auto f = [&](const Vec4& p) { return sign * detail::comparisonAreaRelaxed(g, p, cfg); };
  const double scale = std::abs(f(hull.points().front())) + 1.0;
  const double margin = 1e-7 * scale;
  const double floor = sphere ? -std::numeric_limits<double>::infinity() : 0.0;
  auto r = lipschitzLowerBound(hull, f, L, budget, floor, margin);
  if (sphere) {
    r.bound = -r.bound;
    r.bestValue = -r.bestValue;
  }
  return r;
}

struct CorrectedClassification {
  double tc = 0.0;
  double extremalArea = 0.0;   // best found
  double areaBound = 0.0;      // certified, on the conservative side
  double correctedTC = 0.0;    // from areaBound
  double correctedTCBestFound = 0.0;
  SingularityClass cls;
  Vec4 extremalApex = Vec4::Zero();
  bool approximate = true;
  int evaluations = 0;
};

/// Curvature-corrected classification in a model space: tc - kappa^2 A
/// (hyperbolic, A the minimum cone area) or tc + kappa^2 A (spherical, A the
/// maximum spherical cone area) against the thresholds 3pi and 2pi*C_T. The
/// class uses the certified bound so a truncated search can only weaken it.
inline CorrectedClassification correctedClassify(const EmbeddedGraph& g, const QuadratureConfig& cfg = {}, int budget = 1024) {
  const auto& space = g.space();
  if (space.isEuclidean()) throw Error(ErrorCode::UnsupportedSpace, "correctedClassify needs a curved model; use classify");
  CorrectedClassification out;
  out.tc = totalCurvature(g, cfg).total;
  const bool sphere = space.kind() == SpaceKind::Spherical;
  const auto best = sphere ? maxSphericalConeArea(g, cfg, budget) : minConeArea(g, cfg, budget);
  const auto bound = extremalAreaBound(g, cfg, budget);
  const double k2 = space.kappa() * space.kappa();
  const double sign = sphere ? 1.0 : -1.0;
  out.extremalArea = best.area;
  out.extremalApex = best.apex;
  out.areaBound = bound.bound;
  out.correctedTC = out.tc + sign * k2 * out.areaBound;
  out.correctedTCBestFound = out.tc + sign * k2 * out.extremalArea;
  out.evaluations = best.evaluations + bound.evaluations;
  out.cls = classifyValue(out.correctedTC);
  out.cls.notes.push_back(sphere ? "corrected value tc + kappa^2 * (upper bound of the maximum spherical cone area)"
                                 : "corrected value tc - kappa^2 * (lower bound of the minimum cone area)");
  out.cls.notes.push_back("APPROXIMATE: extremal cone area searched over sampled hull points; the class uses a "
                          "certified Lipschitz bound and can only weaken when the search is truncated.");
  for (const auto& n : g.notes()) out.cls.notes.push_back(n);
  return out;
}

}  // namespace graphcurv
