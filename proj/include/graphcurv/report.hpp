#pragma once

#include <cstdio>
#include <string>

#include "graphcurv/cone_density.hpp"
#include "graphcurv/curvature.hpp"
#include "graphcurv/graph.hpp"
#include "graphcurv/io.hpp"
#include "graphcurv/model_cones.hpp"
#include "graphcurv/steiner.hpp"

namespace graphcurv {

/// Rounds to 12 significant digits, the precision of every printed report.
inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::stod(buf);
}

inline Json vecJson(const Vec3& v) { return Json::array({round12(v.x()), round12(v.y()), round12(v.z())}); }

inline Json pointJson(const Vec4& p, const ModelSpace& space) {
  Json a = Json::array();
  for (int i = 0; i < (space.isEuclidean() ? 3 : 4); ++i) a.push_back(round12(p[i]));
  return a;
}

inline Json toJson(const ValidationReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations) v.push_back(Json{{"code", x.code}, {"location", x.location}, {"message", x.message}});
  return Json{{"ok", r.ok()}, {"violations", v}};
}

inline Json toJson(const SteinerResult& r) {
  return Json{{"e0", vecJson(r.e0)},
              {"angleSum", round12(r.angleSum)},
              {"tc", round12(r.tc)},
              {"method", methodName(r.method)},
              {"candidates", r.certificate.candidateCount},
              {"residual", round12(r.certificate.residual)}};
}

inline Json toJson(const TotalCurvatureReport& r) {
  Json arcs = Json::object(), verts = Json::object();
  for (const auto& [id, v] : r.perArc) arcs[id] = round12(v);
  for (const auto& [id, s] : r.perVertex) verts[id] = toJson(s);
  return Json{{"total", round12(r.total)},
              {"arcSum", round12(r.arcSum())},
              {"vertexSum", round12(r.vertexSum())},
              {"quadratureError", round12(r.quadratureError)},
              {"perArc", arcs},
              {"perVertex", verts}};
}

inline Json toJson(const ConeDensityReport& r, const ModelSpace& space) {
  Json arcs = Json::object(), ends = Json::object();
  for (const auto& [id, v] : r.perArcSigned) arcs[id] = round12(v);
  for (const auto& e : r.endpointAngleTerms) ends[e.arc + ":" + std::string(endName(e.end))] = round12(e.term);
  return Json{{"apex", pointJson(r.apex, space)},
              {"densityGB", round12(r.densityGB)},
              {"densityProjection", round12(r.densityProjection)},
              {"discrepancy", round12(r.discrepancy)},
              {"perArcSigned", arcs},
              {"endpointAngleTerms", ends}};
}

inline Json toJson(const SingularityClass& c) {
  return Json{{"class", kindName(c.kind)},
              {"tc", round12(c.tc)},
              {"thresholdY", round12(c.thresholdY)},
              {"thresholdT", round12(c.thresholdT)},
              {"marginY", round12(c.marginY())},
              {"marginT", round12(c.marginT())},
              {"boundary", c.boundary},
              {"notes", c.notes}};
}

inline Json toJson(const ConeAreaReport& r, const ModelSpace& space) {
  return Json{{"apex", pointJson(r.apex, space)},
              {"areaInduced", round12(r.areaInduced)},
              {"areaComparison", round12(r.areaComparison)},
              {"densityComparison", round12(r.densityComparison)}};
}

inline Json toJson(const CorrectedClassification& c, const ModelSpace& space) {
  return Json{{"tc", round12(c.tc)},
              {"extremalArea", round12(c.extremalArea)},
              {"areaBound", round12(c.areaBound)},
              {"correctedTC", round12(c.correctedTC)},
              {"correctedTCBestFound", round12(c.correctedTCBestFound)},
              {"extremalApex", pointJson(c.extremalApex, space)},
              {"approximate", c.approximate},
              {"evaluations", c.evaluations},
              {"classification", toJson(c.cls)}};
}

namespace detail {

inline std::string csvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

inline void flatten(const Json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    std::string value;
    if (j.is_number_float()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", j.get<double>());
      value = buf;
    } else if (j.is_string()) {
      value = j.get<std::string>();
    } else {
      value = j.dump();
    }
    out += csvField(prefix) + "," + csvField(value) + "\n";
  }
}

}  // namespace detail

/// Two-column key,value CSV of a report; nested keys are joined with dots.
inline std::string toCsv(const Json& j) {
  std::string out = "key,value\n";
  detail::flatten(j, "", out);
  return out;
}

}  // namespace graphcurv
