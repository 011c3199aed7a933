#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "graphcurv/curvature.hpp"
#include "graphcurv/graph.hpp"
#include "graphcurv/search.hpp"

namespace graphcurv {

/// Threshold 2pi*C_T = 6 arccos(-1/3): the total-curvature value of the
/// tetrahedral cone.
inline double tConeThreshold() { return 6.0 * std::acos(-1.0 / 3.0); }
/// Density of the tetrahedral cone.
inline double tConeDensity() { return tConeThreshold() / (2.0 * std::numbers::pi); }
inline constexpr double kYConeDensity = 1.5;
inline double yThreshold() { return 3.0 * std::numbers::pi; }
inline constexpr double kBoundaryBand = 1e-6;

/// Angle in [0, pi] between the into-arc tangent at an arc end and the
/// direction from that end towards the apex.
inline double endpointAngle(const ArcGeometry& arc, End end, const Vec4& apex, const ModelSpace& space) {
  const auto pieces = smoothPieces(arc, space);
  const Vec4 x = end == End::Start ? pieces.front().eval(0.0).pos : pieces.back().eval(1.0).pos;
  const double scale = std::max(detail::apexTolerance(arc, space), 1e-300);
  if (space.dist(x, apex) <= 1e3 * scale) throw Error(ErrorCode::EndpointIsApex, "arc endpoint coincides with the apex");
  const Vec4 t = endpointTangent(space, arc, end == End::Start);
  const Vec4 u = space.initialDirection(x, apex);
  const double c = space.inner(t, u);
  return std::atan2(space.norm(u - c * t), c);
}

struct EndpointTerm {
  std::string arc;
  End end;
  double term;  // pi/2 - beta
};

struct ConeDensityReport {
  Vec4 apex = Vec4::Zero();
  double densityGB = 0.0;
  double densityProjection = 0.0;
  std::vector<std::pair<std::string, double>> perArcSigned;
  std::vector<EndpointTerm> endpointAngleTerms;
  double discrepancy = 0.0;

  /// Sum of all signed integrals and endpoint terms (2pi times densityGB).
  double gaussBonnetSum() const {
    double s = 0.0;
    for (const auto& [id, v] : perArcSigned) s += v;
    for (const auto& e : endpointAngleTerms) s += e.term;
    return s;
  }
};

/// Gauss-Bonnet terms of the cone over the graph: per-arc signed integrals
/// and the endpoint terms pi/2 - beta at both ends of every arc. Valid in
/// every model; in curved models the apex angle also receives the
/// curvature-times-area term, which is not included here.
inline ConeDensityReport gaussBonnetTerms(const EmbeddedGraph& g, const Vec4& apex, const QuadratureConfig& cfg = {}) {
  ConeDensityReport r;
  r.apex = apex;
  for (const auto& arc : g.arcs()) {
    for (End end : {End::Start, End::Finish})
      r.endpointAngleTerms.push_back({arc.id, end, std::numbers::pi / 2 - endpointAngle(arc.geometry, end, apex, g.space())});
    r.perArcSigned.emplace_back(arc.id, signedConeCurvatureIntegral(arc.geometry, apex, g.space(), cfg));
  }
  return r;
}

/// Area density of the Euclidean cone over the graph at its apex, from the
/// Gauss-Bonnet formula, with the radial projection length as an
/// independent check.
inline ConeDensityReport coneDensityGB(const EmbeddedGraph& g, const Vec4& apex, const QuadratureConfig& cfg = {}) {
  if (!g.space().isEuclidean())
    throw Error(ErrorCode::UnsupportedSpace, "coneDensityGB needs a Euclidean graph; use coneAreas in curved models");
  auto r = gaussBonnetTerms(g, apex, cfg);
  r.densityGB = r.gaussBonnetSum() / (2.0 * std::numbers::pi);
  r.densityProjection = projectionLength(g, apex, cfg) / (2.0 * std::numbers::pi);
  r.discrepancy = std::abs(r.densityGB - r.densityProjection);
  return r;
}

/// Upper bound tc / 2pi for the area density of a stationary surface
/// bounded by the graph.
inline double densityUpperBound(const EmbeddedGraph& g, const QuadratureConfig& cfg = {}) {
  return totalCurvature(g, cfg).total / (2.0 * std::numbers::pi);
}

enum class SingularityKind { EmbeddedOnly, AtWorstY, AtWorstYUnlessTCone, Unconstrained };

inline std::string kindName(SingularityKind k) {
  switch (k) {
    case SingularityKind::EmbeddedOnly: return "EmbeddedOnly";
    case SingularityKind::AtWorstY: return "AtWorstY";
    case SingularityKind::AtWorstYUnlessTCone: return "AtWorstYUnlessTCone";
    case SingularityKind::Unconstrained: return "Unconstrained";
  }
  return "Unconstrained";
}

struct SingularityClass {
  SingularityKind kind = SingularityKind::Unconstrained;
  double tc = 0.0;
  double thresholdY = yThreshold();
  double thresholdT = tConeThreshold();
  bool boundary = false;  // tc within the band of a threshold
  std::vector<std::string> notes;

  double marginY() const { return thresholdY - tc; }
  double marginT() const { return thresholdT - tc; }
};

/// Threshold logic on a total-curvature value with the boundary band.
inline SingularityClass classifyValue(double tc, double band = kBoundaryBand) {
  SingularityClass c;
  c.tc = tc;
  const double y = c.thresholdY, t = c.thresholdT;
  if (tc < y - band) {
    c.kind = SingularityKind::EmbeddedOnly;
    c.notes.push_back("tc < 3pi: a stationary surface bounded by the graph is an embedded surface near every point.");
  } else if (tc <= y + band) {
    c.kind = SingularityKind::AtWorstY;
    c.boundary = true;
    c.notes.push_back(
        "tc = 3pi within the band: boundary case. The surface is embedded except possibly at points where it is "
        "a subset of the Y singular cone (possible only at equality).");
  } else if (tc <= t + band) {
    c.kind = SingularityKind::AtWorstYUnlessTCone;
    c.boundary = std::abs(tc - t) <= band;
    c.notes.push_back(
        "3pi < tc <= 2pi*C_T: for (M, eps, delta)-minimal sets only Y singularities can occur, except that at "
        "tc = 2pi*C_T the surface may be a cone over the tetrahedron skeleton with planar faces (T cone).");
    if (c.boundary) c.notes.push_back("tc = 2pi*C_T within the band: boundary case, the T cone is not excluded.");
  } else {
    c.kind = SingularityKind::Unconstrained;
    c.notes.push_back("tc > 2pi*C_T: the density bounds exclude no singularity type.");
  }
  c.notes.push_back(
      "Classification states what the density bounds permit for a surface bounded by the graph; no surface is "
      "constructed.");
  return c;
}

/// Singularity classification of a Euclidean graph from its total curvature.
inline SingularityClass classify(const EmbeddedGraph& g, const QuadratureConfig& cfg = {}) {
  if (!g.space().isEuclidean())
    throw Error(ErrorCode::UnsupportedSpace, "classify needs a Euclidean graph; use correctedClassify in curved models");
  auto c = classifyValue(totalCurvature(g, cfg).total);
  for (const auto& n : g.notes()) c.notes.push_back(n);
  return c;
}

struct HullMaximum {
  Vec4 apex = Vec4::Zero();
  double value = 0.0;
  int evaluations = 0;
};

/// Largest cone density over apexes in the convex hull of the graph:
/// `samples` Halton points, then a Nelder-Mead polish (tolerance 1e-8,
/// 200 iterations).
inline HullMaximum maxConeDensityOverHull(const EmbeddedGraph& g, const QuadratureConfig& cfg = {}, int samples = 512) {
  if (samples < 1) throw Error(ErrorCode::BadParams, "samples must be positive");
  if (!g.space().isEuclidean()) throw Error(ErrorCode::UnsupportedSpace, "maxConeDensityOverHull is Euclidean");
  const HullDomain hull(g.space(), samplePoints(g, 4));
  HullSearchOptions opt;
  opt.maxSeeds = samples;
  opt.budget = samples + 4 * opt.nmIterations;
  opt.penalty = 1.0 / hull.chartDiameter();
  const auto r = hullMinimize(
      hull, [&](const Vec4& p) { return -projectionLength(g, p, cfg) / (2.0 * std::numbers::pi); }, opt);
  return {r.apex, -r.value, r.evaluations};
}

}  // namespace graphcurv
