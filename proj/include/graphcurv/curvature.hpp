#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "graphcurv/arc.hpp"
#include "graphcurv/graph.hpp"
#include "graphcurv/quadrature.hpp"
#include "graphcurv/steiner.hpp"

namespace graphcurv {

/// Sums a per-piece integrand over all smooth pieces of an arc.
template <class Integrand>
QuadratureResult integrateOverPieces(const ArcGeometry& geometry, const ModelSpace& space,
                                     const QuadratureConfig& cfg, Integrand&& f) {
  cfg.check();
  QuadratureResult total;
  for (const auto& piece : smoothPieces(geometry, space))
    total += integrate([&](double tau) { return f(piece.eval(tau)); }, 0.0, 1.0, cfg);
  return total;
}

/// Integral of |k| ds along one arc, with the geodesic curvature of the
/// model (the covariant acceleration of the unit-speed curve).
inline QuadratureResult arcCurvatureQuadrature(const ArcGeometry& arc, const ModelSpace& space,
                                               const QuadratureConfig& cfg = {}) {
  return integrateOverPieces(arc, space, cfg, [&](const Jet& j) {
    const double speed = space.norm(space.projectTangent(j.pos, j.d1));
    return space.norm(curvatureVector(space, j)) * speed;
  });
}

inline double arcCurvatureIntegral(const ArcGeometry& arc, const ModelSpace& space, const QuadratureConfig& cfg = {}) {
  return arcCurvatureQuadrature(arc, space, cfg).value;
}

struct TotalCurvatureReport {
  std::vector<std::pair<std::string, double>> perArc;  // input order
  std::vector<std::pair<std::string, SteinerResult>> perVertex;
  double total = 0.0;
  double quadratureError = 0.0;  // summed error estimate of the arc integrals

  double arcSum() const {
    double s = 0.0;
    for (const auto& [id, v] : perArc) s += v;
    return s;
  }
  double vertexSum() const {
    double s = 0.0;
    for (const auto& [id, r] : perVertex) s += r.tc;
    return s;
  }
};

/// Total curvature: arc integrals of |k| plus the vertex contributions.
inline TotalCurvatureReport totalCurvature(const EmbeddedGraph& g, const QuadratureConfig& cfg = {},
                                           std::uint64_t seed = 0) {
  TotalCurvatureReport report;
  for (const auto& arc : g.arcs()) {
    const auto q = arcCurvatureQuadrature(arc.geometry, g.space(), cfg);
    report.perArc.emplace_back(arc.id, q.value);
    report.quadratureError += q.error;
  }
  for (const auto& v : g.vertices()) report.perVertex.emplace_back(v.id, vertexTC(g, v.id, seed));
  report.total = report.arcSum() + report.vertexSum();
  return report;
}

namespace detail {

/// Frame quantities at a curve point relative to an apex: unit tangent,
/// unit initial direction towards the apex and the distance to it.
struct RadialFrame {
  Vec4 tangent;
  Vec4 toApex;
  double distance;
};

inline RadialFrame radialFrame(const ModelSpace& space, const Jet& j, const Vec4& apex, double apexTol) {
  const Vec4 vel = space.projectTangent(j.pos, j.d1);
  const double dist = space.dist(j.pos, apex);
  if (dist <= apexTol) throw Error(ErrorCode::ApexOnArc, "the apex lies on the arc");
  return {vel / space.norm(vel), space.initialDirection(j.pos, apex), dist};
}

inline double apexTolerance(const ArcGeometry& arc, const ModelSpace& space) {
  double scale = 0.0;
  for (const auto& piece : smoothPieces(arc, space)) {
    const Vec4 a = piece.eval(0.0).pos, b = piece.eval(0.5).pos, c = piece.eval(1.0).pos;
    scale = std::max({scale, space.dist(a, b), space.dist(b, c)});
  }
  return 1e-12 * std::max(scale, 1e-300);
}

/// Distance from a point to an arc: 64 samples per piece, then golden-section
/// refinement in the bracket of the closest sample.
inline double distanceToArc(const ArcGeometry& arc, const Vec4& x, const ModelSpace& space) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& piece : smoothPieces(arc, space)) {
    auto f = [&](double tau) { return space.dist(piece.eval(tau).pos, x); };
    constexpr int n = 64;
    int arg = 0;
    double low = f(0.0);
    for (int i = 1; i <= n; ++i)
      if (const double v = f(double(i) / n); v < low) low = v, arg = i;
    double lo = std::max(0.0, (arg - 1.0) / n), hi = std::min(1.0, (arg + 1.0) / n);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo), f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 < f2) hi = x2, x2 = x1, f2 = f1, x1 = hi - g * (hi - lo), f1 = f(x1);
      else lo = x1, x1 = x2, f1 = f2, x2 = lo + g * (hi - lo), f2 = f(x2);
    }
    best = std::min({best, low, f1, f2});
  }
  return best;
}

}  // namespace detail

inline constexpr double kTangencyTolerance = 1e-6;

/// Signed cone-frame curvature integral -int k . nu_C ds, where nu_C is the
/// unit normal to the arc within the cone surface, pointing away from the
/// apex (the component of minus the direction towards the apex orthogonal
/// to the tangent).
inline QuadratureResult signedConeCurvatureQuadrature(const ArcGeometry& arc, const Vec4& apex,
                                                      const ModelSpace& space, const QuadratureConfig& cfg = {}) {
  const double apexTol = detail::apexTolerance(arc, space);
  if (detail::distanceToArc(arc, apex, space) <= 1e3 * apexTol)
    throw Error(ErrorCode::ApexOnArc, "the apex lies on the arc");
  return integrateOverPieces(arc, space, cfg, [&](const Jet& j) {
    const auto f = detail::radialFrame(space, j, apex, apexTol);
    Vec4 nu = -f.toApex + space.inner(f.toApex, f.tangent) * f.tangent;
    const double sine = space.norm(nu);
    if (!(sine > kTangencyTolerance))
      throw Error(ErrorCode::RadialTangency, "arc is tangent to the direction of the apex");
    nu /= sine;
    const double speed = space.norm(space.projectTangent(j.pos, j.d1));
    return -space.inner(curvatureVector(space, j), nu) * speed;
  });
}

inline double signedConeCurvatureIntegral(const ArcGeometry& arc, const Vec4& apex, const ModelSpace& space,
                                          const QuadratureConfig& cfg = {}) {
  return signedConeCurvatureQuadrature(arc, apex, space, cfg).value;
}

/// Length of the radial projection of one arc into the unit tangent sphere
/// at the apex. Euclidean: the projection to the unit sphere about p. In the
/// models the tangent-space direction of the geodesic from p to a point x
/// is a linear function of x, so the same formula applies there.
inline QuadratureResult arcProjectionQuadrature(const ArcGeometry& arc, const Vec4& apex, const ModelSpace& space,
                                                const QuadratureConfig& cfg = {}) {
  const double apexTol = detail::apexTolerance(arc, space);
  if (detail::distanceToArc(arc, apex, space) <= 1e3 * apexTol)
    throw Error(ErrorCode::ApexOnGraph, "the apex lies on the graph");
  return integrateOverPieces(arc, space, cfg, [&](const Jet& j) {
    if (space.dist(j.pos, apex) <= apexTol) throw Error(ErrorCode::ApexOnGraph, "the apex lies on the graph");
    if (space.kind() == SpaceKind::Spherical && space.kappa() * space.dist(j.pos, apex) > std::numbers::pi - 1e-9)
      throw Error(ErrorCode::AntipodalPair, "graph point antipodal to the apex");
    const Vec4 v = space.projectTangent(apex, j.pos - apex);
    const Vec4 dv = space.projectTangent(apex, j.d1);
    const double nv = space.norm(v);
    const Vec4 u = v / nv;
    return space.norm(dv - space.inner(dv, u) * u) / nv;
  });
}

/// Sum over arcs of the radial projection length.
inline double projectionLength(const EmbeddedGraph& g, const Vec4& apex, const QuadratureConfig& cfg = {}) {
  double total = 0.0;
  for (const auto& arc : g.arcs()) total += arcProjectionQuadrature(arc.geometry, apex, g.space(), cfg).value;
  return total;
}

}  // namespace graphcurv
