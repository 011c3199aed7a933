#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "graphcurv/graph.hpp"

namespace graphcurv {

namespace detail {

inline void requireParams(const std::string& name, const std::vector<double>& params, std::size_t maxCount) {
  if (params.size() > maxCount)
    throw Error(ErrorCode::BadParams, name + " takes at most " + std::to_string(maxCount) + " parameters");
  for (double p : params)
    if (!std::isfinite(p)) throw Error(ErrorCode::BadParams, name + ": parameters must be finite");
}

inline void requireAngle(const std::string& name, double a) {
  if (!(a > 0.0 && a < std::numbers::pi / 2))
    throw Error(ErrorCode::BadParams, name + ": angles must lie in (0, pi/2)");
}

inline Vec3 unitAzimuth(double phi) { return Vec3(std::cos(phi), std::sin(phi), 0.0); }

/// Planar convex arc from q- = (0,0,-1) to q+ = (0,0,1) in the half-plane
/// spanned by +z and the unit direction d, leaving q- at angle aMinus from
/// +z and arriving at q+ at angle aPlus from -z. A single circle when the
/// angles agree, otherwise a biarc with tangent +z at the junction.
inline ArcGeometry footballArc(const Vec3& d, double aPlus, double aMinus) {
  const Vec3 z = Vec3::UnitZ(), qm = -z;
  const Vec3 tangent = std::sin(aMinus) * d + std::cos(aMinus) * z;
  if (aPlus == aMinus) {
    const double r = 1.0 / std::sin(aMinus);
    return circularArcFrom(-r * std::cos(aMinus) * d, qm, tangent, 2.0 * aMinus);
  }
  const double rho = (1.0 - std::cos(aMinus)) / (1.0 - std::cos(aPlus));
  const double r1 = 2.0 / (std::sin(aMinus) + rho * std::sin(aPlus));
  const double r2 = rho * r1;
  const Vec3 c1 = qm + r1 * (-std::cos(aMinus) * d + std::sin(aMinus) * z);
  const Vec3 junction = c1 + r1 * d;
  Composite arc;
  arc.pieces.push_back(circularArcFrom(c1, qm, tangent, aMinus));
  arc.pieces.push_back(circularArcFrom(junction - r2 * d, junction, z, aPlus));
  return arc;
}

/// One stadium: segments o + s*a (s in [0,1]) at offsets 0 and b, joined by
/// semicircles of radius 1/2 outside the unit square. `cuts` are the
/// crossing parameters on each straight side; every crossing becomes a
/// vertex shared with the perpendicular stadium.
inline void addStadium(std::vector<GraphArc>& arcs, const std::string& prefix, const Vec3& o, const Vec3& a,
                       const Vec3& b, const std::vector<double>& cuts,
                       const std::vector<std::string>& side0Ids, const std::vector<std::string>& side1Ids) {
  auto p0 = [&](double s) { return Vec3(o + s * a); };
  auto p1 = [&](double s) { return Vec3(o + b + s * a); };
  auto seg = [](const Vec3& x, const Vec3& y) { return Segment{lift3(x), lift3(y)}; };
  const std::size_t m = cuts.size();
  int count = 0;
  auto push = [&](const std::string& from, const std::string& to, ArcGeometry g) {
    arcs.push_back({prefix + "_" + std::to_string(count++), from, to, std::move(g)});
  };
  // Up side 0.
  for (std::size_t i = 0; i + 1 < m; ++i) push(side0Ids[i], side0Ids[i + 1], seg(p0(cuts[i]), p0(cuts[i + 1])));
  {
    Composite c;
    c.pieces.push_back(seg(p0(cuts[m - 1]), p0(1.0)));
    c.pieces.push_back(circularArcFrom(o + 0.5 * b + a, p0(1.0), a, std::numbers::pi));
    c.pieces.push_back(seg(p1(1.0), p1(cuts[m - 1])));
    push(side0Ids[m - 1], side1Ids[m - 1], c);
  }
  // Down side 1.
  for (std::size_t i = m - 1; i > 0; --i) push(side1Ids[i], side1Ids[i - 1], seg(p1(cuts[i]), p1(cuts[i - 1])));
  {
    Composite c;
    c.pieces.push_back(seg(p1(cuts[0]), p1(0.0)));
    c.pieces.push_back(circularArcFrom(o + 0.5 * b, p1(0.0), Vec3(-a), std::numbers::pi));
    c.pieces.push_back(seg(p0(0.0), p0(cuts[0])));
    push(side1Ids[0], side0Ids[0], c);
  }
}

}  // namespace detail

inline const std::vector<std::string>& builtinExampleNames() {
  static const std::vector<std::string> names{"greatCircle", "yGraph", "tetrahedron", "cube",
                                              "football",    "elevenOvals", "theta", "handcuff"};
  return names;
}

/// Unit circle in the plane z = 0, split into n >= 2 arcs (default 2).
inline EmbeddedGraph greatCircleExample(int n = 2) {
  if (n < 2) throw Error(ErrorCode::BadParams, "greatCircle needs at least 2 arcs");
  std::vector<VertexSpec> vs;
  std::vector<GraphArc> arcs;
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / n;
    vs.push_back({"c" + std::to_string(k), lift3(detail::unitAzimuth(phi))});
  }
  for (int k = 0; k < n; ++k) {
    CircularArc c;
    c.center = Vec4::Zero();
    c.normal = Vec4(0, 0, 1, 0);
    c.radius = 1.0;
    c.angle0 = 2.0 * std::numbers::pi * k / n;
    c.angle1 = 2.0 * std::numbers::pi * (k + 1) / n;
    arcs.push_back({"a" + std::to_string(k), vs[k].id, vs[(k + 1) % n].id, c});
  }
  return EmbeddedGraph(ModelSpace::euclidean(), vs, std::move(arcs));
}

/// Three great semicircles of the unit sphere from the north to the south
/// pole, in half-planes at mutual angle 2pi/3.
inline EmbeddedGraph yGraphExample() {
  std::vector<VertexSpec> vs{{"N", Vec4(0, 0, 1, 0)}, {"S", Vec4(0, 0, -1, 0)}};
  std::vector<GraphArc> arcs;
  for (int l = 0; l < 3; ++l) {
    const Vec3 d = detail::unitAzimuth(2.0 * std::numbers::pi * l / 3);
    arcs.push_back({"m" + std::to_string(l), "N", "S",
                    circularArcFrom(Vec3::Zero(), Vec3::UnitZ(), d, std::numbers::pi)});
  }
  return EmbeddedGraph(ModelSpace::euclidean(), vs, std::move(arcs));
}

/// 1-skeleton of the regular tetrahedron inscribed in the unit sphere.
inline EmbeddedGraph tetrahedronExample() {
  const double s = 1.0 / std::sqrt(3.0);
  std::vector<VertexSpec> vs{{"t0", Vec4(s, s, s, 0)},
                             {"t1", Vec4(s, -s, -s, 0)},
                             {"t2", Vec4(-s, s, -s, 0)},
                             {"t3", Vec4(-s, -s, s, 0)}};
  std::vector<GraphArc> arcs;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      arcs.push_back({"e" + std::to_string(i) + std::to_string(j), vs[i].id, vs[j].id,
                      Segment{vs[i].position, vs[j].position}});
  return EmbeddedGraph(ModelSpace::euclidean(), vs, std::move(arcs));
}

/// 1-skeleton of the cube inscribed in the unit sphere.
inline EmbeddedGraph cubeExample() {
  const double s = 1.0 / std::sqrt(3.0);
  std::vector<VertexSpec> vs;
  for (int k = 0; k < 8; ++k)
    vs.push_back({"k" + std::to_string(k),
                  Vec4((k & 1) ? s : -s, (k & 2) ? s : -s, (k & 4) ? s : -s, 0)});
  std::vector<GraphArc> arcs;
  for (int i = 0; i < 8; ++i)
    for (int bit : {1, 2, 4})
      if (!(i & bit)) {
        const int j = i | bit;
        arcs.push_back({"e" + std::to_string(i) + std::to_string(j), vs[i].id, vs[j].id,
                        Segment{vs[i].position, vs[j].position}});
      }
  return EmbeddedGraph(ModelSpace::euclidean(), vs, std::move(arcs));
}

/// Theta graph of three congruent convex arcs from q- = (0,0,-1) to
/// q+ = (0,0,1) in half-planes at mutual dihedral angle 2pi/3, meeting the
/// axis at angles aPlus and aMinus.
inline EmbeddedGraph footballExample(double aPlus, double aMinus) {
  detail::requireAngle("football", aPlus);
  detail::requireAngle("football", aMinus);
  std::vector<VertexSpec> vs{{"qminus", Vec4(0, 0, -1, 0)}, {"qplus", Vec4(0, 0, 1, 0)}};
  std::vector<GraphArc> arcs;
  for (int l = 0; l < 3; ++l)
    arcs.push_back({"f" + std::to_string(l), "qminus", "qplus",
                    detail::footballArc(detail::unitAzimuth(2.0 * std::numbers::pi * l / 3), aPlus, aMinus)});
  return EmbeddedGraph(ModelSpace::euclidean(), vs, std::move(arcs));
}

/// Theta graph: the axis segment from (0,0,-1) to (0,0,1) plus two circular
/// arcs meeting the axis at angle alpha, in perpendicular half-planes.
inline EmbeddedGraph thetaExample(double alpha = 0.6) {
  detail::requireAngle("theta", alpha);
  std::vector<VertexSpec> vs{{"qminus", Vec4(0, 0, -1, 0)}, {"qplus", Vec4(0, 0, 1, 0)}};
  std::vector<GraphArc> arcs{{"axis", "qminus", "qplus", Segment{vs[0].position, vs[1].position}}};
  for (int l = 0; l < 2; ++l)
    arcs.push_back({"b" + std::to_string(l), "qminus", "qplus",
                    detail::footballArc(detail::unitAzimuth(std::numbers::pi / 2 * l), alpha, alpha)});
  return EmbeddedGraph(ModelSpace::euclidean(), vs, std::move(arcs));
}

/// Two unit circles joined by a segment: a loop at (-1,0,0) in the plane
/// z = 0 and a loop at (1,0,0) in the plane y = 0.
inline EmbeddedGraph handcuffExample() {
  std::vector<VertexSpec> vs{{"A", Vec4(-1, 0, 0, 0)}, {"B", Vec4(1, 0, 0, 0)}};
  std::vector<GraphArc> arcs{
      {"bar", "A", "B", Segment{vs[0].position, vs[1].position}},
      {"loopA", "A", "A", circularArcFrom(Vec3(-2, 0, 0), Vec3(-1, 0, 0), Vec3::UnitY(), 2.0 * std::numbers::pi)},
      {"loopB", "B", "B", circularArcFrom(Vec3(2, 0, 0), Vec3(1, 0, 0), Vec3::UnitZ(), 2.0 * std::numbers::pi)}};
  return EmbeddedGraph(ModelSpace::euclidean(), vs, std::move(arcs));
}

/// Net of eleven congruent stadium curves: six in the planes z = k/7 and
/// five in the planes y = j/6, crossing in 60 points on their straight
/// sides. Arc ids carry the stadium as prefix ("h<k>_" or "v<j>_").
inline EmbeddedGraph elevenOvalsExample() {
  std::vector<double> zc, yc;
  for (int k = 1; k <= 6; ++k) zc.push_back(k / 7.0);
  for (int j = 1; j <= 5; ++j) yc.push_back(j / 6.0);
  auto id = [](int side, int j, int k) {
    return "x" + std::to_string(side) + "_j" + std::to_string(j + 1) + "_k" + std::to_string(k + 1);
  };
  std::vector<VertexSpec> vs;
  for (int side = 0; side < 2; ++side)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 6; ++k) vs.push_back({id(side, j, k), Vec4(side, yc[j], zc[k], 0)});
  std::vector<GraphArc> arcs;
  for (int k = 0; k < 6; ++k) {
    std::vector<std::string> s0, s1;
    for (int j = 0; j < 5; ++j) s0.push_back(id(0, j, k)), s1.push_back(id(1, j, k));
    detail::addStadium(arcs, "h" + std::to_string(k + 1), Vec3(0, 0, zc[k]), Vec3::UnitY(), Vec3::UnitX(), yc, s0,
                       s1);
  }
  for (int j = 0; j < 5; ++j) {
    std::vector<std::string> s0, s1;
    for (int k = 0; k < 6; ++k) s0.push_back(id(0, j, k)), s1.push_back(id(1, j, k));
    detail::addStadium(arcs, "v" + std::to_string(j + 1), Vec3(0, yc[j], 0), Vec3::UnitZ(), Vec3::UnitX(), zc, s0,
                       s1);
  }
  std::vector<std::string> notes{
      "Eleven closed ovals each contribute 2pi of arc curvature and every crossing has two antipodal tangent "
      "pairs (vertex term 0), so the total curvature is 22pi. The value 44pi stated for this construction in "
      "the literature does not follow from the definition; the computed value is reported unchanged. Neither "
      "value lies below 2pi*C_T."};
  return EmbeddedGraph(ModelSpace::euclidean(), vs, std::move(arcs), std::move(notes));
}

/// Built-in example by name. Parameters: greatCircle [n], football
/// [alpha+, alpha-] (one value sets both), theta [alpha].
inline EmbeddedGraph builtinExample(const std::string& name, const std::vector<double>& params = {}) {
  if (name == "greatCircle") {
    detail::requireParams(name, params, 1);
    const double n = params.empty() ? 2.0 : params[0];
    if (n != std::floor(n) || n < 2 || n > 1e6) throw Error(ErrorCode::BadParams, "greatCircle needs an integer n >= 2");
    return greatCircleExample(int(n));
  }
  if (name == "football") {
    detail::requireParams(name, params, 2);
    const double ap = params.empty() ? 0.8 : params[0];
    const double am = params.size() < 2 ? ap : params[1];
    return footballExample(ap, am);
  }
  if (name == "theta") {
    detail::requireParams(name, params, 1);
    return thetaExample(params.empty() ? 0.6 : params[0]);
  }
  auto plain = [&](auto make) {
    detail::requireParams(name, params, 0);
    return make();
  };
  if (name == "yGraph") return plain(yGraphExample);
  if (name == "tetrahedron") return plain(tetrahedronExample);
  if (name == "cube") return plain(cubeExample);
  if (name == "elevenOvals") return plain(elevenOvalsExample);
  if (name == "handcuff") return plain(handcuffExample);
  throw Error(ErrorCode::UnknownExample, "unknown example '" + name + "'");
}

}  // namespace graphcurv
