#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "graphcurv/model_cones.hpp"
#include "graphcurv/model_space.hpp"

using namespace graphcurv;
using std::numbers::pi;

namespace {

Vec4 randomModelPoint(const ModelSpace& s, std::mt19937_64& rng, double spread) {
  std::normal_distribution<double> n;
  const Vec4 v(n(rng), n(rng), n(rng), 0.0);
  return s.exp(s.origin(), spread * v / v.norm() * std::uniform_real_distribution<double>(0.05, 1.0)(rng));
}

}  // namespace

TEST(ModelSpace, EuclideanGeodesicIsLinear) {
  const auto s = ModelSpace::euclidean();
  const Vec4 p = euclideanPoint(1, 2, 3), q = euclideanPoint(-1, 0, 5);
  EXPECT_TRUE(s.geodesic(p, q, 0.25).isApprox(p + 0.25 * (q - p)));
  EXPECT_NEAR(s.dist(p, q), (q - p).norm(), 1e-15);
}

TEST(ModelSpace, SphereOrthogonalPointsAreAQuarterApart) {
  const auto s = ModelSpace::spherical(1.0);
  EXPECT_NEAR(s.dist(Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0)), pi / 2, 1e-15);
  const auto s2 = ModelSpace::spherical(2.0);
  EXPECT_NEAR(s2.dist(Vec4(0.5, 0, 0, 0), Vec4(0, 0.5, 0, 0)), pi / 4, 1e-15);
}

TEST(ModelSpace, GeodesicHasUnitSpeedInBothModels) {
  std::mt19937_64 rng(3);
  for (const auto& s : {ModelSpace::hyperbolic(1.0), ModelSpace::hyperbolic(0.3), ModelSpace::spherical(1.0)}) {
    for (int i = 0; i < 200; ++i) {
      const Vec4 p = randomModelPoint(s, rng, 1.2), q = randomModelPoint(s, rng, 1.2);
      const double t = std::uniform_real_distribution<double>(0, 1)(rng);
      const Vec4 x = s.geodesic(p, q, t);
      EXPECT_TRUE(s.contains(x));
      EXPECT_NEAR(s.dist(p, x), t * s.dist(p, q), 1e-10);
      EXPECT_NEAR(s.dist(p, q), s.dist(q, p), 1e-13);
      EXPECT_TRUE(s.geodesic(p, q, 0.0).isApprox(p, 1e-12));
      EXPECT_TRUE(s.geodesic(p, q, 1.0).isApprox(q, 1e-12));
    }
  }
}

TEST(ModelSpace, ExpInvertsLog) {
  std::mt19937_64 rng(5);
  for (const auto& s : {ModelSpace::hyperbolic(0.7), ModelSpace::spherical(1.3)}) {
    for (int i = 0; i < 100; ++i) {
      const Vec4 p = randomModelPoint(s, rng, 1.0), q = randomModelPoint(s, rng, 1.0);
      EXPECT_LT((s.exp(p, s.log(p, q)) - q).norm(), 1e-11);
    }
  }
}

TEST(ModelSpace, InitialDirectionIsUnitAndTangent) {
  std::mt19937_64 rng(9);
  for (const auto& s : {ModelSpace::hyperbolic(1.0), ModelSpace::spherical(1.0)}) {
    for (int i = 0; i < 100; ++i) {
      const Vec4 p = randomModelPoint(s, rng, 1.0), q = randomModelPoint(s, rng, 1.0);
      const Vec4 u = s.initialDirection(p, q);
      EXPECT_NEAR(s.norm(u), 1.0, 1e-12);
      EXPECT_NEAR(s.inner(u, p), 0.0, 1e-12);
    }
  }
}

TEST(ModelSpace, AntipodalPairsAreRejected) {
  const auto s = ModelSpace::spherical(1.0);
  const Vec4 p(0, 0, 0, 1), q(0, 0, 0, -1);
  try {
    s.geodesic(p, q, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AntipodalPair);
  }
}

TEST(ModelSpace, ConstraintResidualDetectsOffModelPoints) {
  const auto h = ModelSpace::hyperbolic(1.0);
  EXPECT_TRUE(h.contains(h.origin()));
  EXPECT_FALSE(h.contains(Vec4(0, 0, 0, 2)));
  EXPECT_FALSE(h.contains(Vec4(0, 0, 0, -1)));  // lower sheet
  const auto s = ModelSpace::spherical(2.0);
  EXPECT_TRUE(s.contains(Vec4(0, 0.5, 0, 0)));
  EXPECT_FALSE(s.contains(Vec4(0, 1, 0, 0)));
}

TEST(ModelSpace, BadKappaIsRejected) {
  EXPECT_THROW(ModelSpace::hyperbolic(0.0), Error);
  EXPECT_THROW(ModelSpace::spherical(-1.0), Error);
}

TEST(ModelSpace, TangentBasisIsOrthonormal) {
  std::mt19937_64 rng(11);
  for (const auto& s : {ModelSpace::euclidean(), ModelSpace::hyperbolic(1.0), ModelSpace::spherical(1.0)}) {
    const Vec4 p = s.isEuclidean() ? euclideanPoint(1, 2, 3) : randomModelPoint(s, rng, 1.0);
    const auto b = s.tangentBasis(p);
    for (int i = 0; i < 3; ++i) {
      if (!s.isEuclidean()) EXPECT_NEAR(s.inner(b[i], p), 0.0, 1e-12);
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(s.inner(b[i], b[k]), i == k ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(ModelSpace, ParallelTransportIsAnIsometryIntoTheTargetTangentSpace) {
  std::mt19937_64 rng(13);
  for (const auto& s : {ModelSpace::hyperbolic(1.0), ModelSpace::spherical(1.0)}) {
    for (int i = 0; i < 50; ++i) {
      const Vec4 p = randomModelPoint(s, rng, 1.0), q = randomModelPoint(s, rng, 1.0);
      const auto b = s.tangentBasis(p);
      std::array<Vec4, 3> t;
      for (int k = 0; k < 3; ++k) t[k] = parallelTransport(s, p, q, b[k]);
      for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(s.inner(t[k], q), 0.0, 1e-11);
        for (int l = 0; l < 3; ++l) EXPECT_NEAR(s.inner(t[k], t[l]), k == l ? 1.0 : 0.0, 1e-11);
      }
      // The geodesic's own direction is carried to its arrival direction.
      const Vec4 e = s.initialDirection(p, q);
      EXPECT_LT((parallelTransport(s, p, q, e) + s.initialDirection(q, p)).norm(), 1e-10);
    }
  }
}
