#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "graphcurv/errors.hpp"

namespace graphcurv {

/// Embedded coordinates of an ambient point or tangent vector. Euclidean
/// points use the first three components and keep the fourth at zero; the
/// hyperboloid and round-sphere models use all four, with the hyperboloid
/// time coordinate last.
using Vec4 = Eigen::Vector4d;
using Vec3 = Eigen::Vector3d;

enum class SpaceKind { Euclidean, Hyperbolic, Spherical };

inline Vec4 euclideanPoint(double x, double y, double z) { return Vec4(x, y, z, 0.0); }
inline Vec4 lift3(const Vec3& v) { return Vec4(v.x(), v.y(), v.z(), 0.0); }

/// Constant-curvature ambient geometry: R^3, the hyperboloid
/// <x,x> = -1/kappa^2 (x3 > 0) in Minkowski space, or the sphere
/// |x| = 1/kappa in R^4.
class ModelSpace {
 public:
  ModelSpace() = default;

  static ModelSpace euclidean() { return ModelSpace(); }
  static ModelSpace hyperbolic(double kappa) { return ModelSpace(SpaceKind::Hyperbolic, kappa); }
  static ModelSpace spherical(double kappa) { return ModelSpace(SpaceKind::Spherical, kappa); }

  SpaceKind kind() const noexcept { return kind_; }
  double kappa() const noexcept { return kappa_; }
  bool isEuclidean() const noexcept { return kind_ == SpaceKind::Euclidean; }
  /// Model radius 1/kappa; zero for Euclidean space.
  double radius() const noexcept { return isEuclidean() ? 0.0 : 1.0 / kappa_; }

  std::string name() const {
    switch (kind_) {
      case SpaceKind::Euclidean: return "euclidean";
      case SpaceKind::Hyperbolic: return "hyperbolic";
      case SpaceKind::Spherical: return "spherical";
    }
    return "euclidean";
  }

  /// Ambient bilinear form: Minkowski for the hyperboloid, Euclidean otherwise.
  double inner(const Vec4& a, const Vec4& b) const {
    const double spatial = a.x() * b.x() + a.y() * b.y() + a.z() * b.z();
    switch (kind_) {
      case SpaceKind::Euclidean: return spatial;
      case SpaceKind::Hyperbolic: return spatial - a.w() * b.w();
      case SpaceKind::Spherical: return spatial + a.w() * b.w();
    }
    return spatial;
  }

  /// Norm of a tangent (space-like) vector.
  double norm(const Vec4& v) const { return std::sqrt(std::max(inner(v, v), 0.0)); }

  /// Base point of the model: the origin, the hyperboloid vertex or the
  /// sphere's north pole (0,0,0,1/kappa).
  Vec4 origin() const { return isEuclidean() ? Vec4::Zero() : Vec4(0, 0, 0, radius()); }

  /// Relative residual of the model constraint at x.
  double constraintResidual(const Vec4& x) const {
    switch (kind_) {
      case SpaceKind::Euclidean: return std::abs(x.w());
      case SpaceKind::Hyperbolic:
        return std::abs(inner(x, x) * kappa_ * kappa_ + 1.0) + (x.w() > 0 ? 0.0 : 1.0);
      case SpaceKind::Spherical: return std::abs(inner(x, x) * kappa_ * kappa_ - 1.0);
    }
    return 0.0;
  }

  bool contains(const Vec4& x, double relTol = 1e-10) const {
    return x.allFinite() && constraintResidual(x) <= relTol;
  }

  /// Rescales an embedded point onto the model (no-op in Euclidean space).
  Vec4 normalizePoint(const Vec4& x) const {
    switch (kind_) {
      case SpaceKind::Euclidean: return Vec4(x.x(), x.y(), x.z(), 0.0);
      case SpaceKind::Hyperbolic: return x / (kappa_ * std::sqrt(std::max(-inner(x, x), 1e-300)));
      case SpaceKind::Spherical: return x / (kappa_ * x.norm());
    }
    return x;
  }

  /// Orthogonal projection of an ambient vector onto the tangent space at x.
  Vec4 projectTangent(const Vec4& x, const Vec4& w) const {
    switch (kind_) {
      case SpaceKind::Euclidean: return Vec4(w.x(), w.y(), w.z(), 0.0);
      case SpaceKind::Hyperbolic: return w + kappa_ * kappa_ * inner(x, w) * x;
      case SpaceKind::Spherical: return w - kappa_ * kappa_ * inner(x, w) * x;
    }
    return w;
  }

  /// Geodesic distance. Uses the chord length so small distances keep full
  /// relative precision.
  double dist(const Vec4& p, const Vec4& q) const {
    const Vec4 c = q - p;
    switch (kind_) {
      case SpaceKind::Euclidean: return c.head<3>().norm();
      case SpaceKind::Hyperbolic:
        return 2.0 / kappa_ * std::asinh(0.5 * kappa_ * std::sqrt(std::max(inner(c, c), 0.0)));
      case SpaceKind::Spherical:
        return 2.0 / kappa_ * std::asin(std::min(1.0, 0.5 * kappa_ * c.norm()));
    }
    return 0.0;
  }

  /// Point at fraction t along the minimizing geodesic from p to q.
  Vec4 geodesic(const Vec4& p, const Vec4& q, double t) const {
    if (isEuclidean()) return p + t * (q - p);
    const double theta = kappa_ * dist(p, q);
    if (kind_ == SpaceKind::Spherical && theta > std::numbers::pi - 1e-9)
      throw Error(ErrorCode::AntipodalPair, "geodesic between antipodal points is not unique");
    if (theta < 1e-12) return normalizePoint(p + t * (q - p));
    if (kind_ == SpaceKind::Spherical)
      return (std::sin((1 - t) * theta) * p + std::sin(t * theta) * q) / std::sin(theta);
    return (std::sinh((1 - t) * theta) * p + std::sinh(t * theta) * q) / std::sinh(theta);
  }

  /// Unit tangent vector at p of the minimizing geodesic towards q.
  Vec4 initialDirection(const Vec4& p, const Vec4& q) const {
    if (kind_ == SpaceKind::Spherical && kappa_ * dist(p, q) > std::numbers::pi - 1e-9)
      throw Error(ErrorCode::AntipodalPair, "initial direction between antipodal points is not unique");
    const Vec4 v = projectTangent(p, q - p);
    const double n = norm(v);
    if (!(n > 0.0)) throw Error(ErrorCode::BadParams, "initial direction between coincident points");
    return v / n;
  }

  /// Riemannian exponential map at p applied to the tangent vector v.
  Vec4 exp(const Vec4& p, const Vec4& v) const {
    if (isEuclidean()) return p + v;
    const double s = norm(v);
    if (s < 1e-300) return p;
    const double a = kappa_ * s;
    if (kind_ == SpaceKind::Spherical) return std::cos(a) * p + (std::sin(a) / a) * v;
    return std::cosh(a) * p + (std::sinh(a) / a) * v;
  }

  Vec4 log(const Vec4& p, const Vec4& q) const {
    const double d = dist(p, q);
    if (d == 0.0) return Vec4::Zero();
    return d * initialDirection(p, q);
  }

  /// Deterministic orthonormal basis of the tangent space at x (Gram-Schmidt
  /// over the coordinate axes in index order).
  std::array<Vec4, 3> tangentBasis(const Vec4& x) const {
    std::array<Vec4, 3> basis;
    int found = 0;
    for (int axis = 0; axis < 4 && found < 3; ++axis) {
      Vec4 v = projectTangent(x, Vec4::Unit(axis));
      for (int k = 0; k < found; ++k) v -= inner(v, basis[k]) * basis[k];
      const double n = norm(v);
      if (n > 0.25) basis[found++] = v / n;
    }
    return basis;
  }

  /// Cosine-like and sine-like radial functions of the model:
  /// C(r) = cos/cosh(kappa r), S(r) = sin/sinh(kappa r)/kappa.
  double radialC(double r) const {
    switch (kind_) {
      case SpaceKind::Euclidean: return 1.0;
      case SpaceKind::Hyperbolic: return std::cosh(kappa_ * r);
      case SpaceKind::Spherical: return std::cos(kappa_ * r);
    }
    return 1.0;
  }
  double radialS(double r) const {
    switch (kind_) {
      case SpaceKind::Euclidean: return r;
      case SpaceKind::Hyperbolic: return std::sinh(kappa_ * r) / kappa_;
      case SpaceKind::Spherical: return std::sin(kappa_ * r) / kappa_;
    }
    return r;
  }

 private:
  ModelSpace(SpaceKind kind, double kappa) : kind_(kind), kappa_(kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
      throw Error(ErrorCode::BadParams, "curvature scale kappa must be positive and finite");
  }

  SpaceKind kind_ = SpaceKind::Euclidean;
  double kappa_ = 0.0;
};

/// Coordinates of a tangent vector in an orthonormal tangent basis.
inline Vec3 tangentCoordinates(const ModelSpace& space, const std::array<Vec4, 3>& basis,
                               const Vec4& v) {
  return Vec3(space.inner(v, basis[0]), space.inner(v, basis[1]), space.inner(v, basis[2]));
}

}  // namespace graphcurv
