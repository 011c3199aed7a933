#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "graphcurv/cone_density.hpp"
#include "graphcurv/examples.hpp"
#include "random_graphs.hpp"

using namespace graphcurv;
using std::numbers::pi;
namespace tg = testgraphs;

namespace {

const ModelSpace flat = ModelSpace::euclidean();

// Apex angle by brute force: sum of great-circle chord lengths of the
// projected graph, Richardson extrapolated.
double bruteDensity(const EmbeddedGraph& g, const Vec4& apex) {
  auto chordSum = [&](int n) {
    double s = 0;
    for (const auto& arc : g.arcs()) {
      const ArcEvaluator ev(arc.geometry, flat);
      Vec3 prev = (ev.position(0) - apex).head<3>().normalized();
      for (int i = 1; i <= n; ++i) {
        const Vec3 u = (ev.position(double(i) / n) - apex).head<3>().normalized();
        s += 2 * std::asin(std::min(1.0, 0.5 * (u - prev).norm()));
        prev = u;
      }
    }
    return s;
  };
  const double a = chordSum(4000), b = chordSum(8000);
  return (b + (b - a) / 3) / (2 * pi);
}

}  // namespace

TEST(EndpointAngle, MeasuresAngleBetweenTangentAndApexDirection) {
  const Segment s{euclideanPoint(0, 0, 0), euclideanPoint(1, 0, 0)};
  EXPECT_NEAR(endpointAngle(s, End::Start, euclideanPoint(0, 1, 0), flat), pi / 2, 1e-15);
  EXPECT_NEAR(endpointAngle(s, End::Start, euclideanPoint(1, 1, 0), flat), pi / 4, 1e-15);
  EXPECT_NEAR(endpointAngle(s, End::Start, euclideanPoint(-1, 1, 0), flat), 3 * pi / 4, 1e-15);
  // At the far end the tangent is taken pointing into the arc.
  EXPECT_NEAR(endpointAngle(s, End::Finish, euclideanPoint(0, 1, 0), flat), pi / 4, 1e-15);
}

TEST(EndpointAngle, ApexAtEndpointIsAnError) {
  const Segment s{euclideanPoint(0, 0, 0), euclideanPoint(1, 0, 0)};
  try {
    endpointAngle(s, End::Finish, euclideanPoint(1, 0, 0), flat);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EndpointIsApex);
  }
}

TEST(ConeDensity, GreatCircleAboutCentreIsOne) {
  const auto r = coneDensityGB(greatCircleExample(5), Vec4::Zero());
  EXPECT_NEAR(r.densityGB, 1.0, 1e-10);
  EXPECT_NEAR(r.densityProjection, 1.0, 1e-10);
  EXPECT_NEAR(r.gaussBonnetSum(), 2 * pi * r.densityGB, 1e-12);
}

TEST(ConeDensity, YConeIsThreeHalves) {
  const auto r = coneDensityGB(yGraphExample(), Vec4::Zero());
  EXPECT_NEAR(r.densityGB, kYConeDensity, 1e-10);
  EXPECT_LT(r.discrepancy, 1e-9);
}

TEST(ConeDensity, PlatonicSkeletonsAboutTheCentre) {
  const auto t = coneDensityGB(tetrahedronExample(), Vec4::Zero());
  EXPECT_NEAR(t.densityGB, 3 * std::acos(-1.0 / 3.0) / pi, 1e-10);
  EXPECT_NEAR(t.densityGB, tConeDensity(), 1e-10);
  EXPECT_NEAR(t.densityGB, 1.824520343908179, 1e-10);
  const auto c = coneDensityGB(cubeExample(), Vec4::Zero());
  EXPECT_NEAR(c.densityGB, 6 * std::acos(1.0 / 3.0) / pi, 1e-10);
  EXPECT_NEAR(c.densityProjection, c.densityGB, 1e-9);
}

TEST(ConeDensity, TermBookkeeping) {
  const auto g = footballExample(0.7, 0.4);
  const auto r = coneDensityGB(g, euclideanPoint(0.2, 0.1, 0.3));
  EXPECT_EQ(r.perArcSigned.size(), g.arcs().size());
  EXPECT_EQ(r.endpointAngleTerms.size(), 2 * g.arcs().size());
  for (const auto& e : r.endpointAngleTerms) {
    EXPECT_GE(e.term, -pi / 2);
    EXPECT_LE(e.term, pi / 2);
  }
}

TEST(ConeDensity, GaussBonnetMatchesProjectionAndBruteForceOnRandomInstances) {
  tg::Rng rng(101);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const auto g = i % 3 == 0 ? tg::randomFrame(rng) : i % 3 == 1 ? tg::randomTheta(rng) : tg::randomClosedCurve(rng, 4);
    const Vec4 apex = tg::randomApex(rng, g, 0.05);
    ConeDensityReport r;
    try {
      r = coneDensityGB(g, apex);
    } catch (const Error& e) {
      // A random apex can line up with a tangent; nothing else may fail.
      ASSERT_EQ(e.code(), ErrorCode::RadialTangency) << e.what();
      continue;
    }
    ++checked;
    EXPECT_NEAR(r.densityGB, r.densityProjection, 1e-7) << i;
    if (i % 10 == 0) EXPECT_NEAR(r.densityProjection, bruteDensity(g, apex), 1e-6) << i;
  }
  EXPECT_GE(checked, 190);
}

TEST(ConeDensity, NeverExceedsTotalCurvatureOverTwoPi) {
  tg::Rng rng(103);
  for (int i = 0; i < 30; ++i) {
    const auto g = i % 2 ? tg::randomFrame(rng) : tg::randomTheta(rng);
    const double bound = densityUpperBound(g);
    for (int k = 0; k < 5; ++k)
      EXPECT_LE(projectionLength(g, tg::randomApex(rng, g)) / (2 * pi), bound + 1e-9);
  }
}

TEST(ConeDensity, InvariantUnderScalingAboutTheApex) {
  tg::Rng rng(107);
  for (int i = 0; i < 10; ++i) {
    const auto g = tg::randomFrame(rng);
    const Vec4 apex = tg::randomApex(rng, g);
    const double lambda = tg::uniform(rng, 0.2, 5.0);
    const Vec3 shift = (1 - lambda) * apex.head<3>();
    const auto h = tg::transformed(g, Eigen::Matrix3d::Identity(), lambda, shift);
    EXPECT_NEAR(projectionLength(h, apex), projectionLength(g, apex), 1e-8);
  }
}

TEST(ConeDensity, CurvedModelsAreRejected) {
  const auto g = greatCircleExample();
  const EmbeddedGraph curved(ModelSpace::spherical(0.5), {{"a", Vec4(0, 0, 0, 2)}, {"b", Vec4(0, 2, 0, 0)}},
                             {{"x", "a", "b", Segment{Vec4(0, 0, 0, 2), Vec4(0, 2, 0, 0)}},
                              {"y", "b", "a", Segment{Vec4(0, 2, 0, 0), Vec4(0, 0, 0, 2)}}});
  for (auto f : {+[](const EmbeddedGraph& x) { coneDensityGB(x, x.space().origin()); },
                 +[](const EmbeddedGraph& x) { classify(x); }}) {
    try {
      f(curved);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::UnsupportedSpace);
    }
  }
  EXPECT_NO_THROW(classify(g));
}

TEST(Classify, ThresholdBands) {
  EXPECT_EQ(classifyValue(2 * pi).kind, SingularityKind::EmbeddedOnly);
  EXPECT_EQ(classifyValue(3 * pi - 1e-5).kind, SingularityKind::EmbeddedOnly);
  const auto y = classifyValue(3 * pi + 5e-7);
  EXPECT_EQ(y.kind, SingularityKind::AtWorstY);
  EXPECT_TRUE(y.boundary);
  const auto mid = classifyValue(3.5 * pi);
  EXPECT_EQ(mid.kind, SingularityKind::AtWorstYUnlessTCone);
  EXPECT_FALSE(mid.boundary);
  const auto t = classifyValue(tConeThreshold() + 5e-7);
  EXPECT_EQ(t.kind, SingularityKind::AtWorstYUnlessTCone);
  EXPECT_TRUE(t.boundary);
  EXPECT_EQ(classifyValue(tConeThreshold() + 1e-5).kind, SingularityKind::Unconstrained);
  EXPECT_NEAR(tConeThreshold(), 11.4637994174941113, 1e-13);
  EXPECT_NEAR(classifyValue(10.0).marginT(), tConeThreshold() - 10.0, 1e-15);
}

TEST(Classify, BuiltinGraphs) {
  EXPECT_EQ(classify(greatCircleExample()).kind, SingularityKind::EmbeddedOnly);
  EXPECT_EQ(classify(yGraphExample()).kind, SingularityKind::AtWorstYUnlessTCone);
  const auto f = classify(footballExample(solveR0(), solveR0()));
  EXPECT_EQ(f.kind, SingularityKind::AtWorstY);
  EXPECT_TRUE(f.boundary);
  const auto t = classify(tetrahedronExample());
  EXPECT_EQ(t.kind, SingularityKind::AtWorstYUnlessTCone);
  EXPECT_TRUE(t.boundary);
  EXPECT_EQ(classify(cubeExample()).kind, SingularityKind::Unconstrained);
  EXPECT_EQ(classify(thetaExample()).kind, SingularityKind::AtWorstYUnlessTCone);
  const auto eleven = classify(elevenOvalsExample());
  EXPECT_EQ(eleven.kind, SingularityKind::Unconstrained);
  bool carriesNote = false;
  for (const auto& n : eleven.notes) carriesNote = carriesNote || n.find("22pi") != std::string::npos;
  EXPECT_TRUE(carriesNote);
}

TEST(HullMaximum, YGraphPeaksOnTheAxis) {
  const auto g = yGraphExample();
  const auto m = maxConeDensityOverHull(g);
  EXPECT_NEAR(m.value, kYConeDensity, 1e-6);
  // Every apex on the axis between the poles sees density 3/2.
  EXPECT_LT(m.apex.head<2>().norm(), 1e-3);
  EXPECT_LE(std::abs(m.apex.z()), 1.0 + 1e-9);
  EXPECT_LE(m.value, densityUpperBound(g) + 1e-9);
}

TEST(HullMaximum, TetrahedronPeakRespectsTheBound) {
  const auto g = tetrahedronExample();
  const auto m = maxConeDensityOverHull(g, {}, 256);
  EXPECT_GE(m.value, tConeDensity() - 1e-6);
  EXPECT_LE(m.value, densityUpperBound(g) + 1e-9);
  EXPECT_THROW(maxConeDensityOverHull(g, {}, 0), Error);
}
