#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "graphcurv/errors.hpp"
#include "graphcurv/model_space.hpp"

namespace graphcurv {

/// Position and first two parameter derivatives of a curve.
struct Jet {
  Vec4 pos;
  Vec4 d1;
  Vec4 d2;
};

/// Geodesic segment between two points (a straight segment in R^3).
struct Segment {
  Vec4 start;
  Vec4 end;
};

/// Circle of geodesic radius `radius` about `center`, in the tangent 2-plane
/// orthogonal to `normal`, traversed from angle0 to angle1. Angles are
/// measured in the frame returned by circleFrame().
struct CircularArc {
  Vec4 center;
  Vec4 normal;
  double radius = 1.0;
  double angle0 = 0.0;
  double angle1 = 2.0 * std::numbers::pi;
};

/// C^2 natural cubic spline through ordered samples, chord-length
/// parametrized. In curved models the spline is radially projected onto the
/// model surface.
class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Vec4> points) : points_(std::move(points)) { build(); }

  const std::vector<Vec4>& points() const noexcept { return points_; }
  /// Knot parameters in [0,1].
  const std::vector<double>& knots() const noexcept { return knots_; }
  /// Second derivatives of the spline at the knots.
  const std::vector<Vec4>& moments() const noexcept { return moments_; }

 private:
  void build() {
    const std::size_t n = points_.size();
    knots_.assign(n, 0.0);
    moments_.assign(n, Vec4::Zero());
    if (n < 2) return;
    double total = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      total += (points_[i] - points_[i - 1]).norm();
      knots_[i] = total;
    }
    if (!(total > 0.0)) return;
    for (auto& k : knots_) k /= total;
    knots_.back() = 1.0;
    if (n < 3) return;
    // Natural end conditions; Thomas algorithm on the interior moments.
    const std::size_t m = n - 2;
    std::vector<double> diag(m), upper(m), lower(m);
    std::vector<Vec4> rhs(m);
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t i = j + 1;
      const double h0 = knots_[i] - knots_[i - 1];
      const double h1 = knots_[i + 1] - knots_[i];
      lower[j] = h0;
      diag[j] = 2.0 * (h0 + h1);
      upper[j] = h1;
      rhs[j] = 6.0 * ((points_[i + 1] - points_[i]) / h1 - (points_[i] - points_[i - 1]) / h0);
    }
    for (std::size_t j = 1; j < m; ++j) {
      const double w = lower[j] / diag[j - 1];
      diag[j] -= w * upper[j - 1];
      rhs[j] -= w * rhs[j - 1];
    }
    std::vector<Vec4> sol(m);
    sol[m - 1] = rhs[m - 1] / diag[m - 1];
    for (std::size_t j = m - 1; j-- > 0;) sol[j] = (rhs[j] - upper[j] * sol[j + 1]) / diag[j];
    for (std::size_t j = 0; j < m; ++j) moments_[j + 1] = sol[j];
  }

  std::vector<Vec4> points_;
  std::vector<double> knots_;
  std::vector<Vec4> moments_;
};

using PrimitiveArc = std::variant<Segment, CircularArc>;

/// Chain of segments and circular arcs joined C^1, each piece taking an
/// equal share of the parameter interval.
struct Composite {
  std::vector<PrimitiveArc> pieces;
};

using ArcGeometry = std::variant<Segment, CircularArc, Polyline, Composite>;

inline std::string kindName(const ArcGeometry& g) {
  switch (g.index()) {
    case 0: return "segment";
    case 1: return "circular";
    case 2: return "polyline";
    default: return "composite";
  }
}

/// Orthonormal frame (u, w) of the circle plane at `center`. u is the
/// coordinate axis with the largest component orthogonal to the normal;
/// (normal, u, w) is positively oriented.
inline std::pair<Vec4, Vec4> circleFrame(const ModelSpace& space, const Vec4& center,
                                         const Vec4& normal) {
  Vec4 n = space.projectTangent(center, normal);
  const double nn = space.norm(n);
  if (!(nn > 0.0)) throw Error(ErrorCode::BadParams, "circular arc normal is degenerate");
  n /= nn;
  auto residual = [&](const Vec4& v, const Vec4* extra) {
    Vec4 r = space.projectTangent(center, v);
    r -= space.inner(r, n) * n;
    if (extra) r -= space.inner(r, *extra) * (*extra);
    return r;
  };
  Vec4 u = Vec4::Zero();
  double best = -1.0;
  for (int axis = 0; axis < 4; ++axis) {
    const Vec4 r = residual(Vec4::Unit(axis), nullptr);
    const double len = space.norm(r);
    if (len > best + 1e-12) {
      best = len;
      u = r / len;
    }
  }
  Vec4 w;
  if (space.isEuclidean()) {
    w = lift3(n.head<3>().cross(u.head<3>()));
  } else {
    best = -1.0;
    for (int axis = 0; axis < 4; ++axis) {
      const Vec4 r = residual(Vec4::Unit(axis), &u);
      const double len = space.norm(r);
      if (len > best + 1e-12) {
        best = len;
        w = r / len;
      }
    }
    Eigen::Matrix4d m;
    m << n, u, w, center;
    if (m.determinant() < 0) w = -w;
  }
  return {u, w};
}

/// One smooth (C^2) piece of an arc with its own parameter tau in [0,1].
/// Evaluation outside [0,1] continues the piece analytically, which finite
/// differences near piece ends rely on.
class SmoothPiece {
 public:
  static SmoothPiece segment(const ModelSpace& space, const Segment& s) {
    SmoothPiece p(space, Kind::Geodesic);
    p.a_ = s.start;
    p.b_ = s.end;
    p.theta_ = space.isEuclidean() ? 0.0 : space.kappa() * space.dist(s.start, s.end);
    if (space.kind() == SpaceKind::Spherical && p.theta_ > std::numbers::pi - 1e-9)
      throw Error(ErrorCode::AntipodalPair, "segment joins antipodal points");
    return p;
  }

  static SmoothPiece circle(const ModelSpace& space, const CircularArc& c) {
    SmoothPiece p(space, Kind::Circle);
    auto [u, w] = circleFrame(space, c.center, c.normal);
    p.a_ = space.radialC(c.radius) * c.center;
    p.u_ = space.radialS(c.radius) * u;
    p.w_ = space.radialS(c.radius) * w;
    p.phi0_ = c.angle0;
    p.dphi_ = c.angle1 - c.angle0;
    if (space.isEuclidean()) p.a_ = c.center;
    return p;
  }

  static SmoothPiece spline(const ModelSpace& space, const Polyline& line, std::size_t interval) {
    SmoothPiece p(space, Kind::Spline);
    const auto& x = line.points();
    const auto& k = line.knots();
    const auto& m = line.moments();
    p.h_ = k[interval + 1] - k[interval];
    p.a_ = x[interval];
    p.b_ = x[interval + 1];
    p.u_ = m[interval];
    p.w_ = m[interval + 1];
    return p;
  }

  Jet eval(double tau) const {
    switch (kind_) {
      case Kind::Geodesic: return evalGeodesic(tau);
      case Kind::Circle: return evalCircle(tau);
      case Kind::Spline: return evalSpline(tau);
    }
    return {};
  }

  bool isGeodesic() const noexcept { return kind_ == Kind::Geodesic; }

 private:
  enum class Kind { Geodesic, Circle, Spline };

  SmoothPiece(const ModelSpace& space, Kind kind) : space_(space), kind_(kind) {}

  Jet evalGeodesic(double t) const {
    if (space_.isEuclidean() || theta_ < 1e-12) {
      const Vec4 v = b_ - a_;
      if (space_.isEuclidean()) return {a_ + t * v, v, Vec4::Zero()};
      // Short segments in a curved model: projected chord is accurate to O(theta^2).
      return projected(a_ + t * v, v, Vec4::Zero());
    }
    const double th = theta_;
    if (space_.kind() == SpaceKind::Spherical) {
      const double s = std::sin(th);
      const Vec4 pos = (std::sin((1 - t) * th) * a_ + std::sin(t * th) * b_) / s;
      const Vec4 d1 = th * (-std::cos((1 - t) * th) * a_ + std::cos(t * th) * b_) / s;
      return {pos, d1, -th * th * pos};
    }
    const double s = std::sinh(th);
    const Vec4 pos = (std::sinh((1 - t) * th) * a_ + std::sinh(t * th) * b_) / s;
    const Vec4 d1 = th * (-std::cosh((1 - t) * th) * a_ + std::cosh(t * th) * b_) / s;
    return {pos, d1, th * th * pos};
  }

  Jet evalCircle(double t) const {
    const double phi = phi0_ + t * dphi_;
    const double c = std::cos(phi), s = std::sin(phi);
    const Vec4 radial = c * u_ + s * w_;
    return {a_ + radial, dphi_ * (-s * u_ + c * w_), -dphi_ * dphi_ * radial};
  }

  Jet evalSpline(double tau) const {
    // Standard moment form of the cubic on [k_i, k_{i+1}], in local tau.
    const double h = h_;
    const double A = 1.0 - tau, B = tau;
    const Vec4 pos = A * a_ + B * b_ + ((A * A * A - A) * u_ + (B * B * B - B) * w_) * (h * h / 6.0);
    const Vec4 d1 = (b_ - a_) + ((-3.0 * A * A + 1.0) * u_ + (3.0 * B * B - 1.0) * w_) * (h * h / 6.0);
    const Vec4 d2 = (A * u_ + B * w_) * (h * h);
    if (space_.isEuclidean()) return {pos, d1, d2};
    return projected(pos, d1, d2);
  }

  /// Jet of y = s / nu(s), the radial projection of an ambient curve s onto
  /// the model, where nu = kappa * sqrt(sigma <s,s>).
  Jet projected(const Vec4& s, const Vec4& s1, const Vec4& s2) const {
    const double sigma = space_.kind() == SpaceKind::Spherical ? 1.0 : -1.0;
    const double k = space_.kappa();
    const double f = sigma * space_.inner(s, s);
    const double f1 = 2.0 * sigma * space_.inner(s, s1);
    const double f2 = 2.0 * sigma * (space_.inner(s1, s1) + space_.inner(s, s2));
    const double rf = std::sqrt(f);
    const double nu = k * rf;
    const double nu1 = k * f1 / (2.0 * rf);
    const double nu2 = k * (f2 / (2.0 * rf) - f1 * f1 / (4.0 * f * rf));
    const Vec4 y = s / nu;
    const Vec4 y1 = s1 / nu - s * nu1 / (nu * nu);
    const Vec4 y2 = s2 / nu - 2.0 * s1 * nu1 / (nu * nu) - s * nu2 / (nu * nu) +
                    2.0 * s * nu1 * nu1 / (nu * nu * nu);
    return {y, y1, y2};
  }

  ModelSpace space_;
  Kind kind_;
  Vec4 a_ = Vec4::Zero(), b_ = Vec4::Zero(), u_ = Vec4::Zero(), w_ = Vec4::Zero();
  double theta_ = 0.0, phi0_ = 0.0, dphi_ = 0.0, h_ = 1.0;
};

/// Decomposes an arc into smooth pieces in parameter order. The arc
/// parameter t in [0,1] is split evenly across the pieces.
inline std::vector<SmoothPiece> smoothPieces(const ArcGeometry& geometry, const ModelSpace& space) {
  std::vector<SmoothPiece> out;
  auto primitive = [&](const PrimitiveArc& p) {
    if (const auto* s = std::get_if<Segment>(&p)) out.push_back(SmoothPiece::segment(space, *s));
    else out.push_back(SmoothPiece::circle(space, std::get<CircularArc>(p)));
  };
  if (const auto* s = std::get_if<Segment>(&geometry)) {
    primitive(*s);
  } else if (const auto* c = std::get_if<CircularArc>(&geometry)) {
    primitive(*c);
  } else if (const auto* line = std::get_if<Polyline>(&geometry)) {
    if (line->points().size() < 2) throw Error(ErrorCode::InvalidGraph, "polyline needs samples");
    for (std::size_t i = 0; i + 1 < line->points().size(); ++i)
      out.push_back(SmoothPiece::spline(space, *line, i));
  } else {
    const auto& comp = std::get<Composite>(geometry);
    if (comp.pieces.empty()) throw Error(ErrorCode::InvalidGraph, "composite arc has no pieces");
    for (const auto& p : comp.pieces) primitive(p);
  }
  return out;
}

/// Parameter share of each piece, so that piece i covers
/// [offsets[i], offsets[i+1]] of the arc parameter.
inline std::vector<double> pieceOffsets(const ArcGeometry& geometry, std::size_t count) {
  std::vector<double> offsets(count + 1, 0.0);
  if (const auto* line = std::get_if<Polyline>(&geometry)) {
    offsets = line->knots();
  } else {
    for (std::size_t i = 0; i <= count; ++i) offsets[i] = double(i) / double(count);
  }
  offsets.back() = 1.0;
  return offsets;
}

/// Evaluates an arc at global parameter t in [0,1] with derivatives taken
/// with respect to t.
class ArcEvaluator {
 public:
  ArcEvaluator(const ArcGeometry& geometry, const ModelSpace& space)
      : pieces_(smoothPieces(geometry, space)), offsets_(pieceOffsets(geometry, pieces_.size())) {}

  Jet eval(double t) const {
    std::size_t i = 0;
    while (i + 1 < pieces_.size() && t > offsets_[i + 1]) ++i;
    const double span = offsets_[i + 1] - offsets_[i];
    Jet j = pieces_[i].eval((t - offsets_[i]) / span);
    j.d1 /= span;
    j.d2 /= span * span;
    return j;
  }

  Vec4 position(double t) const { return eval(t).pos; }

  const std::vector<SmoothPiece>& pieces() const noexcept { return pieces_; }

 private:
  std::vector<SmoothPiece> pieces_;
  std::vector<double> offsets_;
};

/// Unit tangent at an endpoint pointing into the arc.
inline Vec4 endpointTangent(const ModelSpace& space, const ArcGeometry& geometry, bool atStart) {
  const auto pieces = smoothPieces(geometry, space);
  const Jet j = atStart ? pieces.front().eval(0.0) : pieces.back().eval(1.0);
  Vec4 t = atStart ? j.d1 : Vec4(-j.d1);
  t = space.projectTangent(j.pos, t);
  const double n = space.norm(t);
  if (!(n > 0.0)) throw Error(ErrorCode::InvalidGraph, "arc has zero speed at an endpoint");
  return t / n;
}

/// Geodesic curvature vector of a curve in the model, from its embedded jet:
/// tangential part of the acceleration, minus its component along the
/// velocity, divided by the squared speed.
inline Vec4 curvatureVector(const ModelSpace& space, const Jet& j) {
  const Vec4 acc = space.projectTangent(j.pos, j.d2);
  const Vec4 vel = space.projectTangent(j.pos, j.d1);
  const double speed2 = space.inner(vel, vel);
  const Vec4 normalPart = acc - (space.inner(acc, vel) / speed2) * vel;
  return normalPart / speed2;
}

/// Builds a circular arc starting at `start` with initial unit direction
/// `tangent`, curving about `center` through `sweep` radians (Euclidean).
inline CircularArc circularArcFrom(const Vec3& center, const Vec3& start, const Vec3& tangent,
                                   double sweep) {
  const Vec3 radial = start - center;
  const Vec3 normal = radial.cross(tangent).normalized();
  CircularArc arc;
  arc.center = lift3(center);
  arc.normal = lift3(normal);
  arc.radius = radial.norm();
  auto [u, w] = circleFrame(ModelSpace::euclidean(), arc.center, arc.normal);
  arc.angle0 = std::atan2(radial.dot(w.head<3>()), radial.dot(u.head<3>()));
  arc.angle1 = arc.angle0 + sweep;
  return arc;
}

}  // namespace graphcurv
