#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "graphcurv/cone_density.hpp"
#include "graphcurv/curvature.hpp"
#include "graphcurv/examples.hpp"
#include "random_graphs.hpp"

using namespace graphcurv;
using std::numbers::pi;
namespace tg = testgraphs;

namespace {

const ModelSpace flat = ModelSpace::euclidean();

CircularArc ccw(const Vec3& center, double radius, double a0, double a1) {
  return CircularArc{lift3(center), Vec4(0, 0, 1, 0), radius, a0, a1};
}

// Four-centre oval: small circles about (+-1,0) of radius 1 joined
// tangentially to large circles about (0,-+1) of radius 1 + sqrt2.
EmbeddedGraph fourCentreOval() {
  const double s = std::sqrt(0.5);
  const Vec3 cr(1, 0, 0), cl(-1, 0, 0), cb(0, -1, 0), ct(0, 1, 0);
  const Vec3 ur = cr + Vec3(s, s, 0), ul = cl + Vec3(-s, s, 0), ll = cl + Vec3(-s, -s, 0), lr = cr + Vec3(s, -s, 0);
  std::vector<VertexSpec> vs{{"ur", lift3(ur)}, {"ul", lift3(ul)}, {"ll", lift3(ll)}, {"lr", lift3(lr)}};
  auto arcFrom = [](const Vec3& c, const Vec3& start) {
    const Vec3 radial = start - c;
    return circularArcFrom(c, start, Vec3::UnitZ().cross(radial).normalized(), pi / 2);
  };
  std::vector<GraphArc> arcs{{"top", "ur", "ul", arcFrom(cb, ur)},
                             {"left", "ul", "ll", arcFrom(cl, ul)},
                             {"bottom", "ll", "lr", arcFrom(ct, ll)},
                             {"right", "lr", "ur", arcFrom(cr, lr)}};
  return EmbeddedGraph(flat, vs, std::move(arcs));
}

// Independent projection-length oracle: chord length of the projected
// curve on the unit sphere, Richardson extrapolated over two resolutions.
double chordProjection(const ArcGeometry& arc, const Vec4& apex) {
  const ArcEvaluator ev(arc, flat);
  auto chordSum = [&](int n) {
    double s = 0;
    Vec3 prev = (ev.position(0) - apex).head<3>().normalized();
    for (int i = 1; i <= n; ++i) {
      const Vec3 u = (ev.position(double(i) / n) - apex).head<3>().normalized();
      s += 2 * std::asin(std::min(1.0, 0.5 * (u - prev).norm()));  // great-circle distance
      prev = u;
    }
    return s;
  };
  const double a = chordSum(20000), b = chordSum(40000);
  return b + (b - a) / 3;
}

}  // namespace

TEST(ArcCurvature, FullUnitCircleIsTwoPi) {
  EXPECT_NEAR(arcCurvatureIntegral(ccw(Vec3::Zero(), 1, 0, 2 * pi), flat), 2 * pi, 1e-9);
  EXPECT_NEAR(arcCurvatureIntegral(ccw(Vec3(3, 1, 0), 0.01, 0, 2 * pi), flat), 2 * pi, 1e-9);
}

TEST(ArcCurvature, SegmentIsZero) {
  EXPECT_EQ(arcCurvatureIntegral(Segment{euclideanPoint(0, 0, 0), euclideanPoint(1, 2, 3)}, flat), 0.0);
}

TEST(ArcCurvature, FootballArcEqualsSumOfEndAngles) {
  for (double a : {0.3, 0.8, 1.2}) {
    const auto g = footballExample(a, a);
    for (const auto& arc : g.arcs()) EXPECT_NEAR(arcCurvatureIntegral(arc.geometry, flat), 2 * a, 1e-8);
  }
  const auto g = footballExample(0.4, 1.1);
  for (const auto& arc : g.arcs()) EXPECT_NEAR(arcCurvatureIntegral(arc.geometry, flat), 1.5, 1e-8);
}

TEST(ArcCurvature, PolylineThroughCircleSamplesApproximatesTheTurn) {
  // Natural end conditions flatten the ends, so the turn converges from below.
  auto halfCircle = [](int n) {
    std::vector<Vec4> pts;
    for (int i = 0; i <= n; ++i) pts.push_back(euclideanPoint(std::cos(i * pi / n), std::sin(i * pi / n), 0));
    return arcCurvatureIntegral(Polyline(pts), flat);
  };
  const double coarse = halfCircle(40), fine = halfCircle(160);
  EXPECT_LT(coarse, pi);
  EXPECT_LT(pi - fine, 0.5 * (pi - coarse));
  EXPECT_NEAR(fine, pi, 0.05);
  std::vector<Vec4> line;
  for (int i = 0; i < 6; ++i) line.push_back(euclideanPoint(i, 2.0 * i, -i));
  EXPECT_NEAR(arcCurvatureIntegral(Polyline(line), flat), 0.0, 1e-12);
}

TEST(ArcCurvature, BadConfigurationIsRejected) {
  QuadratureConfig cfg;
  cfg.relTol = 0.5;
  try {
    arcCurvatureIntegral(ccw(Vec3::Zero(), 1, 0, pi), flat, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadParams);
  }
}

TEST(ArcCurvature, SubdivisionBudgetExhaustionIsReported) {
  QuadratureConfig cfg;
  cfg.maxSubdivisions = 1;
  cfg.relTol = 1e-12;
  // Highly eccentric spline: not resolvable on a single panel.
  std::vector<Vec4> pts{euclideanPoint(0, 0, 0), euclideanPoint(1, 5, 0), euclideanPoint(1.1, -5, 0),
                        euclideanPoint(2, 4, 1), euclideanPoint(3, 0, 0)};
  try {
    arcCurvatureIntegral(Polyline(pts), flat, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::QuadratureNonconverged);
  }
}

TEST(TotalCurvature, FootballIsThreePi) {
  for (double a : {0.3, 0.8, solveR0()}) EXPECT_NEAR(totalCurvature(footballExample(a, a)).total, 3 * pi, 1e-7) << a;
}

TEST(TotalCurvature, TetrahedronSkeleton) {
  EXPECT_NEAR(totalCurvature(tetrahedronExample()).total, 6 * pi - 12 * std::acos(std::sqrt(2.0 / 3.0)), 1e-9);
}

TEST(TotalCurvature, SmoothOvalIsTwoPi) {
  const auto g = fourCentreOval();
  ASSERT_TRUE(validate(g).ok());
  const auto r = totalCurvature(g);
  EXPECT_NEAR(r.total, 2 * pi, 1e-8);
  for (const auto& [id, s] : r.perVertex) EXPECT_NEAR(s.tc, 0.0, 1e-9) << id;
}

TEST(TotalCurvature, ReportSumsAreConsistent) {
  for (const auto& name : builtinExampleNames()) {
    const auto r = totalCurvature(builtinExample(name));
    EXPECT_NEAR(r.total, r.arcSum() + r.vertexSum(), 1e-12) << name;
    for (const auto& [id, s] : r.perVertex) EXPECT_GE(s.tc, -1e-9) << name << " " << id;
    for (const auto& [id, v] : r.perArc) EXPECT_GE(v, 0.0);
  }
}

TEST(TotalCurvature, ElevenOvalsEachContributeTwoPi) {
  const auto g = elevenOvalsExample();
  const auto r = totalCurvature(g);
  std::map<std::string, double> perOval;
  for (const auto& [id, v] : r.perArc) perOval[id.substr(0, id.find('_'))] += v;
  ASSERT_EQ(perOval.size(), 11u);
  for (const auto& [oval, v] : perOval) EXPECT_NEAR(v, 2 * pi, 1e-8) << oval;
  for (const auto& [id, s] : r.perVertex) EXPECT_NEAR(s.tc, 0.0, 1e-9) << id;
  EXPECT_NEAR(r.total, 22 * pi, 1e-7);
  ASSERT_FALSE(g.notes().empty());
  EXPECT_NE(g.notes()[0].find("44pi"), std::string::npos);
}

TEST(TotalCurvature, HandcuffIsFivePi) { EXPECT_NEAR(totalCurvature(handcuffExample()).total, 5 * pi, 1e-8); }

TEST(TotalCurvature, InvariantUnderSimilarities) {
  tg::Rng rng(23);
  std::vector<EmbeddedGraph> graphs{tetrahedronExample(), footballExample(0.5, 0.9), handcuffExample(), thetaExample()};
  for (int i = 0; i < 4; ++i) graphs.push_back(tg::randomFrame(rng));
  for (const auto& g : graphs) {
    const double base = totalCurvature(g).total;
    for (int k = 0; k < 3; ++k) {
      const auto h = tg::transformed(g, tg::randomRotation(rng), tg::uniform(rng, 0.1, 10), tg::randomPoint(rng, 5));
      EXPECT_NEAR(totalCurvature(h).total, base, 1e-9);
    }
  }
}

TEST(TotalCurvature, FenchelBoundOnRandomClosedCurves) {
  tg::Rng rng(29);
  for (int i = 0; i < 60; ++i) {
    const auto g = i % 2 ? tg::randomClosedCurve(rng, 3 + int(rng() % 5)) : tg::randomSmoothishCurve(rng, 2 + int(rng() % 4));
    EXPECT_GE(totalCurvature(g).total, 2 * pi - 1e-8);
  }
}

TEST(TotalCurvature, ThetaGraphsHaveAtLeastThreePi) {
  tg::Rng rng(31);
  for (int i = 0; i < 30; ++i) EXPECT_GE(totalCurvature(tg::randomTheta(rng)).total, 3 * pi - 1e-6);
}

TEST(TotalCurvature, HalvingToleranceStaysWithinErrorEstimate) {
  tg::Rng rng(37);
  for (int i = 0; i < 10; ++i) {
    const auto g = tg::randomTheta(rng);
    QuadratureConfig loose;
    loose.relTol = 1e-6;
    QuadratureConfig tight = loose;
    tight.relTol = 5e-7;
    const auto a = totalCurvature(g, loose), b = totalCurvature(g, tight);
    EXPECT_LE(std::abs(a.total - b.total), a.quadratureError + 1e-12);
  }
}

TEST(SignedCone, StraightEdgeIsZero) {
  EXPECT_NEAR(signedConeCurvatureIntegral(Segment{euclideanPoint(1, 0, 0), euclideanPoint(0, 1, 0)},
                                          euclideanPoint(0, 0, 1), flat),
              0.0, 1e-15);
}

TEST(SignedCone, CircleAboutApexIsTwoPi) {
  EXPECT_NEAR(signedConeCurvatureIntegral(ccw(Vec3::Zero(), 1, 0, 2 * pi), Vec4::Zero(), flat), 2 * pi, 1e-9);
  // Off-plane apex on the axis: the cone is a circular cone.
  const double h = 0.7;
  EXPECT_NEAR(signedConeCurvatureIntegral(ccw(Vec3::Zero(), 1, 0, 2 * pi), euclideanPoint(0, 0, h), flat),
              2 * pi / std::sqrt(1 + h * h), 1e-9);
}

TEST(SignedCone, RandomArcsAgreeWithProjectionMinusEndpointTerms) {
  tg::Rng rng(41);
  for (int i = 0; i < 20; ++i) {
    const auto arc = tg::circleThrough(tg::randomPoint(rng), tg::randomPoint(rng), tg::randomUnit(rng),
                                       tg::uniform(rng, 0.1, 0.9));
    Vec4 apex = lift3(tg::randomPoint(rng, 2));
    while (detail::distanceToArc(arc, apex, flat) < 0.2) apex = lift3(tg::randomPoint(rng, 2));
    const double signedPart = signedConeCurvatureIntegral(arc, apex, flat);
    const double b0 = endpointAngle(arc, End::Start, apex, flat), b1 = endpointAngle(arc, End::Finish, apex, flat);
    EXPECT_NEAR(signedPart + (pi / 2 - b0) + (pi / 2 - b1), chordProjection(arc, apex), 1e-7);
  }
}

TEST(SignedCone, ApexOnArcAndRadialTangencyAreErrors) {
  const auto circle = ccw(Vec3::Zero(), 1, 0, pi);
  try {
    signedConeCurvatureIntegral(circle, euclideanPoint(0, 1, 0), flat);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ApexOnArc);
  }
  // Apex on the tangent line at the midpoint, which is a quadrature node.
  try {
    signedConeCurvatureIntegral(circle, euclideanPoint(2, 1, 0), flat);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RadialTangency);
  }
}

TEST(Projection, KnownSkeletonValues) {
  EXPECT_NEAR(projectionLength(greatCircleExample(3), Vec4::Zero()), 2 * pi, 1e-9);
  EXPECT_NEAR(projectionLength(tetrahedronExample(), Vec4::Zero()), 6 * std::acos(-1.0 / 3.0), 1e-9);
  EXPECT_NEAR(projectionLength(cubeExample(), Vec4::Zero()), 12 * std::acos(1.0 / 3.0), 1e-9);
  EXPECT_NEAR(projectionLength(cubeExample(), Vec4::Zero()), 14.7715130080892962, 1e-9);
}

TEST(Projection, AgreesWithChordOracleOffCenter) {
  const Vec4 apex = euclideanPoint(0.1, -0.2, 0.15);
  const auto g = cubeExample();
  double oracle = 0;
  for (const auto& a : g.arcs()) oracle += chordProjection(a.geometry, apex);
  EXPECT_NEAR(projectionLength(g, apex), oracle, 1e-8);
}

TEST(Projection, ApexOnGraphIsAnError) {
  try {
    projectionLength(tetrahedronExample(), tetrahedronExample().vertices()[0].position);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ApexOnGraph);
  }
}
