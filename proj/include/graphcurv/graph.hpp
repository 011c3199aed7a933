#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphcurv/arc.hpp"
#include "graphcurv/errors.hpp"
#include "graphcurv/model_space.hpp"

namespace graphcurv {

enum class End { Start, Finish };

inline std::string_view endName(End e) { return e == End::Start ? "start" : "finish"; }

struct Incidence {
  std::size_t arc;  // index into EmbeddedGraph::arcs()
  End end;
};

struct GraphVertex {
  std::string id;
  Vec4 position;
  std::vector<Incidence> incidences;

  std::size_t valence() const noexcept { return incidences.size(); }
};

struct GraphArc {
  std::string id;
  std::string from;
  std::string to;
  ArcGeometry geometry;
};

struct VertexSpec {
  std::string id;
  Vec4 position;
};

/// Vertices plus parametric arcs in a model space. Incidences are derived
/// from the arc list in order (start end before finish end), so iteration
/// order is fully determined by the input order.
class EmbeddedGraph {
 public:
  EmbeddedGraph() = default;

  EmbeddedGraph(ModelSpace space, const std::vector<VertexSpec>& vertices, std::vector<GraphArc> arcs,
                std::vector<std::string> notes = {})
      : space_(space), arcs_(std::move(arcs)), notes_(std::move(notes)) {
    vertices_.reserve(vertices.size());
    for (const auto& v : vertices) {
      if (vertexIndex_.count(v.id))
        throw Error(ErrorCode::InvalidGraph, "duplicate vertex id '" + v.id + "'");
      vertexIndex_.emplace(v.id, vertices_.size());
      vertices_.push_back(GraphVertex{v.id, v.position, {}});
    }
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
      const auto& arc = arcs_[a];
      if (arcIndex_.count(arc.id)) throw Error(ErrorCode::InvalidGraph, "duplicate arc id '" + arc.id + "'");
      arcIndex_.emplace(arc.id, a);
      for (const auto& [vid, end] : {std::pair{arc.from, End::Start}, std::pair{arc.to, End::Finish}}) {
        auto it = vertexIndex_.find(vid);
        if (it == vertexIndex_.end())
          throw Error(ErrorCode::UnknownVertex, "arc '" + arc.id + "' references unknown vertex '" + vid + "'");
        vertices_[it->second].incidences.push_back({a, end});
      }
    }
  }

  const ModelSpace& space() const noexcept { return space_; }
  const std::vector<GraphVertex>& vertices() const noexcept { return vertices_; }
  const std::vector<GraphArc>& arcs() const noexcept { return arcs_; }
  /// Free-form annotations carried with the graph (e.g. by built-in examples).
  const std::vector<std::string>& notes() const noexcept { return notes_; }

  std::size_t vertexIndex(const std::string& id) const {
    auto it = vertexIndex_.find(id);
    if (it == vertexIndex_.end()) throw Error(ErrorCode::UnknownVertex, "no vertex '" + id + "'");
    return it->second;
  }
  std::size_t arcIndex(const std::string& id) const {
    auto it = arcIndex_.find(id);
    if (it == arcIndex_.end()) throw Error(ErrorCode::UnknownArc, "no arc '" + id + "'");
    return it->second;
  }
  const GraphVertex& vertex(const std::string& id) const { return vertices_[vertexIndex(id)]; }
  const GraphArc& arc(const std::string& id) const { return arcs_[arcIndex(id)]; }

  std::size_t vertexIndexOf(std::size_t arc, End end) const {
    return vertexIndex(end == End::Start ? arcs_[arc].from : arcs_[arc].to);
  }

 private:
  ModelSpace space_;
  std::vector<GraphVertex> vertices_;
  std::vector<GraphArc> arcs_;
  std::vector<std::string> notes_;
  std::unordered_map<std::string, std::size_t> vertexIndex_;
  std::unordered_map<std::string, std::size_t> arcIndex_;
};

/// Connected components of the incidence structure, as a component label
/// per vertex.
inline std::vector<std::size_t> componentLabels(const EmbeddedGraph& g) {
  const std::size_t n = g.vertices().size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < g.arcs().size(); ++a) {
    const auto i = find(g.vertexIndexOf(a, End::Start));
    const auto j = find(g.vertexIndexOf(a, End::Finish));
    if (i != j) parent[std::max(i, j)] = std::min(i, j);
  }
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = find(i);
  return labels;
}

inline bool isConnected(const EmbeddedGraph& g) {
  const auto labels = componentLabels(g);
  return std::all_of(labels.begin(), labels.end(), [](std::size_t l) { return l == 0; });
}

/// Samples `perPiece` + 1 points on every smooth piece of every arc.
inline std::vector<Vec4> samplePoints(const EmbeddedGraph& g, int perPiece) {
  std::vector<Vec4> out;
  for (const auto& arc : g.arcs()) {
    for (const auto& piece : smoothPieces(arc.geometry, g.space()))
      for (int i = 0; i <= perPiece; ++i) out.push_back(piece.eval(double(i) / perPiece).pos);
  }
  return out;
}

/// Diagonal of the embedded bounding box of vertices and arc samples.
inline double diameter(const EmbeddedGraph& g) {
  Vec4 lo = Vec4::Constant(1e300), hi = Vec4::Constant(-1e300);
  auto grow = [&](const Vec4& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  };
  for (const auto& v : g.vertices()) grow(v.position);
  for (const auto& p : samplePoints(g, 8)) grow(p);
  if (g.vertices().empty()) return 0.0;
  return (hi - lo).norm();
}

struct Violation {
  std::string code;
  std::string location;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(std::string_view code) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; });
  }
};

struct ValidationOptions {
  int injectivitySamples = 64;  // n_check
  double positionTolerance = 1e-9;  // relative to the graph diameter
};

namespace detail {

/// Distance between the chords [a0,a1] and [b0,b1] of embedded coordinates.
inline double chordDistance(const Vec4& a0, const Vec4& a1, const Vec4& b0, const Vec4& b1) {
  const Vec4 u = a1 - a0, v = b1 - b0, w = a0 - b0;
  const double a = u.squaredNorm(), b = u.dot(v), c = v.squaredNorm(), d = u.dot(w), e = v.dot(w);
  const double den = a * c - b * b;
  double s = den > 1e-14 * a * c ? std::clamp((b * e - c * d) / den, 0.0, 1.0) : 0.0;
  double t = c > 0.0 ? std::clamp((b * s + e) / c, 0.0, 1.0) : 0.0;
  s = a > 0.0 ? std::clamp((b * t - d) / a, 0.0, 1.0) : 0.0;
  return (w + s * u - t * v).norm();
}

}  // namespace detail

/// Checks the regularity hypotheses: valence >= 2, arcs meeting their
/// vertices, nonvanishing speed, injective arcs, points on the model and
/// (spherical) the convexity-ball condition.
inline ValidationReport validate(const EmbeddedGraph& g, const ValidationOptions& opt = {}) {
  ValidationReport report;
  auto add = [&](std::string code, std::string location, std::string message) {
    report.violations.push_back({std::move(code), std::move(location), std::move(message)});
  };
  const auto& space = g.space();

  for (const auto& v : g.vertices()) {
    if (!v.position.allFinite()) add("NONFINITE", "vertex " + v.id, "non-finite coordinates");
    else if (!space.contains(v.position)) add("OFF_MODEL", "vertex " + v.id, "position is not on the model space");
    if (v.valence() < 2) add("VALENCE_LT_2", "vertex " + v.id, "valence " + std::to_string(v.valence()));
  }
  if (!report.ok()) return report;

  const double diam = std::max(diameter(g), 1e-300);
  const double tolPos = opt.positionTolerance * diam;

  for (std::size_t a = 0; a < g.arcs().size(); ++a) {
    const auto& arc = g.arcs()[a];
    const std::string where = "arc " + arc.id;
    if (const auto* line = std::get_if<Polyline>(&arc.geometry); line && line->points().size() < 4) {
      add("POLYLINE_TOO_SHORT", where, "polyline needs at least 4 samples");
      continue;
    }
    std::vector<SmoothPiece> pieces;
    try {
      pieces = smoothPieces(arc.geometry, space);
    } catch (const Error& e) {
      add("BAD_GEOMETRY", where, e.what());
      continue;
    }
    const Vec4 start = pieces.front().eval(0.0).pos;
    const Vec4 finish = pieces.back().eval(1.0).pos;
    if (!start.allFinite() || !finish.allFinite()) {
      add("NONFINITE", where, "non-finite geometry");
      continue;
    }
    if ((start - g.vertex(arc.from).position).norm() > tolPos)
      add("ENDPOINT_MISMATCH", where + " start", "start point is not at vertex " + arc.from);
    if ((finish - g.vertex(arc.to).position).norm() > tolPos)
      add("ENDPOINT_MISMATCH", where + " finish", "finish point is not at vertex " + arc.to);

    // Pieces must meet C^1.
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
      const Jet l = pieces[i].eval(1.0), r = pieces[i + 1].eval(0.0);
      const double scale = std::max(space.norm(l.d1), space.norm(r.d1));
      const Vec4 tl = l.d1 / std::max(space.norm(l.d1), 1e-300);
      const Vec4 tr = r.d1 / std::max(space.norm(r.d1), 1e-300);
      if ((l.pos - r.pos).norm() > tolPos || (tl - tr).norm() > 1e-7 || !(scale > 0))
        add("NOT_C1", where, "pieces " + std::to_string(i) + " and " + std::to_string(i + 1) + " do not join C^1");
    }

    const ArcEvaluator ev(arc.geometry, space);
    const int n = std::max(opt.injectivitySamples, 4);
    std::vector<Vec4> samples(n + 1);
    bool speedOk = true;
    for (int i = 0; i <= n; ++i) {
      const double t = double(i) / n;
      const Jet j = ev.eval(t);
      samples[i] = j.pos;
      if (!(space.norm(space.projectTangent(j.pos, j.d1)) > 0.0)) speedOk = false;
      if (!space.contains(j.pos, 1e-8)) {
        add("OFF_MODEL", where, "arc leaves the model space");
        break;
      }
    }
    for (const auto& piece : pieces)
      for (double tau : {0.0, 1.0})
        if (!(space.norm(space.projectTangent(piece.eval(tau).pos, piece.eval(tau).d1)) > 0.0)) speedOk = false;
    if (!speedOk) add("ZERO_SPEED", where, "vanishing speed");

    // Non-neighbouring sample chords closer than a quarter of their length
    // mean the arc comes back onto itself.
    const bool loop = arc.from == arc.to;
    bool injective = true;
    for (int i = 0; i < n && injective; ++i)
      for (int k = i + 2; k < n; ++k) {
        if (loop && i == 0 && k == n - 1) continue;
        const double h = std::min((samples[i + 1] - samples[i]).norm(), (samples[k + 1] - samples[k]).norm());
        if (detail::chordDistance(samples[i], samples[i + 1], samples[k], samples[k + 1]) < 0.25 * h) {
          injective = false;
          break;
        }
      }
    if (!injective) add("NOT_INJECTIVE", where, "arc revisits a point");
  }

  if (space.kind() == SpaceKind::Spherical) {
    const auto pts = samplePoints(g, 4);
    const double limit = std::numbers::pi / (2.0 * space.kappa());
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t k = i + 1; k < pts.size(); ++k) worst = std::max(worst, space.dist(pts[i], pts[k]));
    if (worst >= limit) add("CONVEXITY_BALL", "graph", "pairwise distance reaches pi/(2 kappa)");
  }
  return report;
}

/// Unit tangent vectors at a vertex, one per incidence, pointing into the
/// arcs; expressed in embedded coordinates of the model's tangent space.
inline std::vector<Vec4> vertexTangents(const EmbeddedGraph& g, const std::string& vertexId) {
  const auto& v = g.vertex(vertexId);
  std::vector<Vec4> out;
  out.reserve(v.valence());
  for (const auto& inc : v.incidences)
    out.push_back(endpointTangent(g.space(), g.arcs()[inc.arc].geometry, inc.end == End::Start));
  return out;
}

}  // namespace graphcurv
