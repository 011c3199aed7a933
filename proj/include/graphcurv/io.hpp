#pragma once

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "graphcurv/errors.hpp"
#include "graphcurv/graph.hpp"

namespace graphcurv {

using Json = nlohmann::json;

namespace detail {

[[noreturn]] inline void schemaError(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Schema, where + ": " + what);
}

inline const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schemaError(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schemaError(where, std::string("missing key \"") + key + "\"");
  return *it;
}

inline double readReal(const Json& v, const std::string& where) {
  if (!v.is_number()) schemaError(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schemaError(where, "non-finite number");
  return x;
}

inline std::string readString(const Json& v, const std::string& where) {
  if (!v.is_string()) schemaError(where, "expected a string");
  return v.get<std::string>();
}

inline Vec4 readPoint(const Json& v, const ModelSpace& space, const std::string& where) {
  const std::size_t dim = space.isEuclidean() ? 3 : 4;
  if (!v.is_array() || v.size() != dim)
    schemaError(where, "expected an array of " + std::to_string(dim) + " numbers");
  Vec4 p = Vec4::Zero();
  for (std::size_t i = 0; i < dim; ++i) p[Eigen::Index(i)] = readReal(v[i], where);
  return p;
}

inline Json writePoint(const Vec4& p, const ModelSpace& space) {
  Json a = Json::array();
  for (int i = 0; i < (space.isEuclidean() ? 3 : 4); ++i) a.push_back(p[i]);
  return a;
}

inline CircularArc readCircle(const Json& g, const ModelSpace& space, const std::string& where) {
  CircularArc c;
  c.center = readPoint(field(g, "center", where), space, where + ".center");
  c.normal = readPoint(field(g, "normal", where), space, where + ".normal");
  c.radius = readReal(field(g, "radius", where), where + ".radius");
  c.angle0 = readReal(field(g, "angle0", where), where + ".angle0");
  c.angle1 = readReal(field(g, "angle1", where), where + ".angle1");
  if (!(c.radius > 0)) schemaError(where, "radius must be positive");
  return c;
}

inline Json writeCircle(const CircularArc& c, const ModelSpace& space) {
  return Json{{"kind", "circular"},
              {"center", writePoint(c.center, space)},
              {"normal", writePoint(c.normal, space)},
              {"radius", c.radius},
              {"angle0", c.angle0},
              {"angle1", c.angle1}};
}

/// Segments may carry explicit "start"/"end"; otherwise they join the
/// positions of their arc's vertices.
inline Segment readSegment(const Json& g, const ModelSpace& space, const Vec4& from, const Vec4& to,
                           const std::string& where) {
  Segment s{from, to};
  if (g.contains("start")) s.start = readPoint(g["start"], space, where + ".start");
  if (g.contains("end")) s.end = readPoint(g["end"], space, where + ".end");
  return s;
}

inline Json writeSegment(const Segment& s, const ModelSpace& space) {
  return Json{{"kind", "segment"}, {"start", writePoint(s.start, space)}, {"end", writePoint(s.end, space)}};
}

inline ArcGeometry readGeometry(const Json& g, const ModelSpace& space, const Vec4& from, const Vec4& to,
                                const std::string& where) {
  const auto kind = readString(field(g, "kind", where), where + ".kind");
  if (kind == "segment") return readSegment(g, space, from, to, where);
  if (kind == "circular") return readCircle(g, space, where);
  if (kind == "polyline") {
    const auto& pts = field(g, "points", where);
    if (!pts.is_array()) schemaError(where + ".points", "expected an array");
    std::vector<Vec4> points;
    for (std::size_t i = 0; i < pts.size(); ++i)
      points.push_back(readPoint(pts[i], space, where + ".points[" + std::to_string(i) + "]"));
    return Polyline(std::move(points));
  }
  if (kind == "composite") {
    const auto& pieces = field(g, "pieces", where);
    if (!pieces.is_array() || pieces.empty()) schemaError(where + ".pieces", "expected a non-empty array");
    Composite c;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const std::string w = where + ".pieces[" + std::to_string(i) + "]";
      const auto k = readString(field(pieces[i], "kind", w), w + ".kind");
      if (k == "segment") {
        if (!pieces[i].contains("start") || !pieces[i].contains("end"))
          schemaError(w, "composite segments need \"start\" and \"end\"");
        c.pieces.push_back(readSegment(pieces[i], space, from, to, w));
      } else if (k == "circular") {
        c.pieces.push_back(readCircle(pieces[i], space, w));
      } else {
        schemaError(w, "composite pieces are segment or circular, not \"" + k + "\"");
      }
    }
    return c;
  }
  schemaError(where + ".kind", "unknown geometry kind \"" + kind + "\"");
}

inline Json writeGeometry(const ArcGeometry& g, const ModelSpace& space) {
  if (const auto* s = std::get_if<Segment>(&g)) return writeSegment(*s, space);
  if (const auto* c = std::get_if<CircularArc>(&g)) return writeCircle(*c, space);
  if (const auto* line = std::get_if<Polyline>(&g)) {
    Json pts = Json::array();
    for (const auto& p : line->points()) pts.push_back(writePoint(p, space));
    return Json{{"kind", "polyline"}, {"points", pts}};
  }
  Json pieces = Json::array();
  for (const auto& p : std::get<Composite>(g).pieces) {
    if (const auto* s = std::get_if<Segment>(&p)) pieces.push_back(writeSegment(*s, space));
    else pieces.push_back(writeCircle(std::get<CircularArc>(p), space));
  }
  return Json{{"kind", "composite"}, {"pieces", pieces}};
}

}  // namespace detail

inline ModelSpace readAmbient(const Json& a) {
  const auto kind = detail::readString(detail::field(a, "kind", "ambient"), "ambient.kind");
  if (kind == "euclidean") return ModelSpace::euclidean();
  if (kind != "hyperbolic" && kind != "spherical") detail::schemaError("ambient.kind", "unknown kind \"" + kind + "\"");
  const double kappa = detail::readReal(detail::field(a, "kappa", "ambient"), "ambient.kappa");
  if (!(kappa > 0)) detail::schemaError("ambient.kappa", "must be positive");
  return kind == "hyperbolic" ? ModelSpace::hyperbolic(kappa) : ModelSpace::spherical(kappa);
}

inline Json writeAmbient(const ModelSpace& space) {
  if (space.isEuclidean()) return Json{{"kind", "euclidean"}};
  return Json{{"kind", space.name()}, {"kappa", space.kappa()}};
}

/// Graph from its JSON document. Reference errors (unknown vertex ids,
/// duplicates) surface as the corresponding library codes.
inline EmbeddedGraph graphFromJson(const Json& doc) {
  if (!doc.is_object()) detail::schemaError("document", "expected an object");
  const ModelSpace space = readAmbient(detail::field(doc, "ambient", "document"));
  const auto& vs = detail::field(doc, "vertices", "document");
  const auto& as = detail::field(doc, "arcs", "document");
  if (!vs.is_array()) detail::schemaError("vertices", "expected an array");
  if (!as.is_array()) detail::schemaError("arcs", "expected an array");
  std::vector<VertexSpec> vertices;
  std::unordered_map<std::string, Vec4> where;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string w = "vertices[" + std::to_string(i) + "]";
    VertexSpec v{detail::readString(detail::field(vs[i], "id", w), w + ".id"),
                 detail::readPoint(detail::field(vs[i], "pos", w), space, w + ".pos")};
    where.emplace(v.id, v.position);
    vertices.push_back(std::move(v));
  }
  std::vector<GraphArc> arcs;
  for (std::size_t i = 0; i < as.size(); ++i) {
    const std::string w = "arcs[" + std::to_string(i) + "]";
    GraphArc a;
    a.id = detail::readString(detail::field(as[i], "id", w), w + ".id");
    a.from = detail::readString(detail::field(as[i], "from", w), w + ".from");
    a.to = detail::readString(detail::field(as[i], "to", w), w + ".to");
    auto f = where.find(a.from), t = where.find(a.to);
    if (f == where.end()) throw Error(ErrorCode::UnknownVertex, w + " references unknown vertex '" + a.from + "'");
    if (t == where.end()) throw Error(ErrorCode::UnknownVertex, w + " references unknown vertex '" + a.to + "'");
    a.geometry = detail::readGeometry(detail::field(as[i], "geometry", w), space, f->second, t->second, w + ".geometry");
    arcs.push_back(std::move(a));
  }
  std::vector<std::string> notes;
  if (doc.contains("notes")) {
    if (!doc["notes"].is_array()) detail::schemaError("notes", "expected an array of strings");
    for (const auto& n : doc["notes"]) notes.push_back(detail::readString(n, "notes"));
  }
  return EmbeddedGraph(space, vertices, std::move(arcs), std::move(notes));
}

inline Json graphToJson(const EmbeddedGraph& g) {
  Json vs = Json::array(), as = Json::array();
  for (const auto& v : g.vertices()) vs.push_back(Json{{"id", v.id}, {"pos", detail::writePoint(v.position, g.space())}});
  for (const auto& a : g.arcs())
    as.push_back(Json{{"id", a.id}, {"from", a.from}, {"to", a.to}, {"geometry", detail::writeGeometry(a.geometry, g.space())}});
  Json doc{{"ambient", writeAmbient(g.space())}, {"vertices", vs}, {"arcs", as}};
  if (!g.notes().empty()) doc["notes"] = g.notes();
  return doc;
}

inline EmbeddedGraph parseGraph(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Schema, std::string("malformed JSON: ") + e.what());
  }
  return graphFromJson(doc);
}

inline EmbeddedGraph loadGraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parseGraph(buf.str());
}

/// Writes the graph with full round-trip precision.
inline void saveGraph(const EmbeddedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << graphToJson(g).dump(2) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace graphcurv
