#pragma once

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "graphcurv/graphcurv.hpp"
#include "graphcurv/io.hpp"
#include "graphcurv/report.hpp"

namespace graphcurv::cli {

inline const std::vector<std::string>& commandNames() {
  static const std::vector<std::string> names{"validate", "tc",      "steiner", "cone-density", "classify",
                                              "cone-area", "corrected-classify", "example", "plot"};
  return names;
}

struct RunRequest {
  std::string command;
  std::string input;    // graph file path
  std::string example;  // NAME or NAME:p1,p2,...
  std::optional<std::vector<double>> apex;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string out;
  std::string svg;
  std::string vertex;
  int budget = 4096;
  bool emit = false;
};

enum Exit { Ok = 0, Failure = 1, ValidationFailed = 2, Nonconverged = 3, IoOrSchema = 4 };

/// Parses command-line arguments. Returns nullopt after printing help or a
/// usage error, with the exit code in `status`.
inline std::optional<RunRequest> parseArgs(int argc, const char* const* argv, std::ostream& err, int& status) {
  CLI::App app{"Total curvature, cone densities and soap-film singularity bounds for embedded graphs"};
  RunRequest r;
  std::string apex;
  app.add_option("command", r.command, "validate | tc | steiner | cone-density | classify | cone-area | "
                                       "corrected-classify | example | plot")
      ->required()
      ->check(CLI::IsMember(commandNames()));
  auto* in = app.add_option("--input", r.input, "graph file (JSON)");
  auto* ex = app.add_option("--example", r.example, "built-in example NAME[:p1,p2,...]");
  in->excludes(ex);
  app.add_option("--apex", apex, "cone apex X,Y,Z (or 4 embedded coordinates in a model)");
  app.add_option("--format", r.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", r.seed, "seed for randomized multistart");
  app.add_option("--tol", r.tol, "relative quadrature tolerance");
  app.add_option("--out", r.out, "write the report (or emitted graph) to this file");
  app.add_option("--svg", r.svg, "SVG output path for plot");
  app.add_option("--vertex", r.vertex, "vertex id for steiner");
  app.add_option("--budget", r.budget, "objective evaluations for extremal cone-area searches")->check(CLI::PositiveNumber);
  app.add_flag("--emit", r.emit, "print the example graph file");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    status = app.exit(e, o, e2);
    err << o.str() << e2.str();
    if (status != 0) status = Failure;
    return std::nullopt;
  }
  if (!apex.empty()) {
    std::vector<double> v;
    std::stringstream ss(apex);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        err << "--apex: not a number: '" << tok << "'\n";
        status = Failure;
        return std::nullopt;
      }
    }
    r.apex = v;
  }
  return r;
}

inline Json errorJson(std::string_view code, const std::string& message) {
  return Json{{"error", {{"code", std::string(code)}, {"message", message}}}};
}

/// Parses NAME[:p1,p2,...].
inline std::pair<std::string, std::vector<double>> parseExampleSpec(const std::string& spec) {
  const auto colon = spec.find(':');
  std::vector<double> params;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        params.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(ErrorCode::BadParams, "example parameter is not a number: '" + tok + "'");
      }
    }
  }
  return {spec.substr(0, colon), params};
}

inline Vec4 apexPoint(const std::vector<double>& a, const ModelSpace& space) {
  if (space.isEuclidean()) {
    if (a.size() != 3) throw Error(ErrorCode::BadParams, "--apex needs 3 coordinates");
    return euclideanPoint(a[0], a[1], a[2]);
  }
  if (a.size() == 4) {
    const Vec4 p(a[0], a[1], a[2], a[3]);
    if (!space.contains(p)) throw Error(ErrorCode::BadParams, "--apex is not on the model");
    return p;
  }
  // Three values: normal coordinates about the model origin.
  if (a.size() == 3) return space.exp(space.origin(), Vec4(a[0], a[1], a[2], 0.0));
  throw Error(ErrorCode::BadParams, "--apex needs 3 or 4 coordinates");
}

/// SVG of the radial projection of the graph to the unit sphere about the
/// apex, seen orthographically along the apex-to-centroid axis. Arcs are
/// subdivided until consecutive projected points are at most 0.01 rad apart.
inline std::string plotSvg(const EmbeddedGraph& g, const Vec4& apex) {
  const auto& space = g.space();
  const auto basis = space.tangentBasis(apex);
  auto direction = [&](const Vec4& x) {
    const Vec3 v = tangentCoordinates(space, basis, space.projectTangent(apex, x - apex));
    const double n = v.norm();
    if (!(n > 0)) throw Error(ErrorCode::ApexOnGraph, "the apex lies on the graph");
    return Vec3(v / n);
  };
  Vec3 axis = Vec3::Zero();
  const auto samples = samplePoints(g, 8);
  for (const auto& p : samples) axis += tangentCoordinates(space, basis, space.projectTangent(apex, p - apex));
  if (!(axis.norm() > 1e-12)) axis = Vec3::UnitZ();
  axis.normalize();
  Vec3 e1 = axis.unitOrthogonal(), e2 = axis.cross(e1);
  const double size = 400, c = size / 2, rad = 180;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
      << size << ' ' << size << "\">\n";
  svg << "<circle cx=\"" << c << "\" cy=\"" << c << "\" r=\"" << rad << "\" fill=\"none\" stroke=\"#999\"/>\n";
  char buf[64];
  for (const auto& arc : g.arcs()) {
    const ArcEvaluator ev(arc.geometry, space);
    std::vector<std::pair<double, Vec3>> pts;
    constexpr int base = 64;
    for (int i = 0; i <= base; ++i) pts.emplace_back(double(i) / base, direction(ev.position(double(i) / base)));
    for (std::size_t i = 0; i + 1 < pts.size();) {
      const double gap = std::atan2(pts[i].second.cross(pts[i + 1].second).norm(), pts[i].second.dot(pts[i + 1].second));
      if (gap > 0.01 && pts[i + 1].first - pts[i].first > 1e-9) {
        const double t = 0.5 * (pts[i].first + pts[i + 1].first);
        pts.insert(pts.begin() + std::ptrdiff_t(i + 1), {t, direction(ev.position(t))});
      } else {
        ++i;
      }
    }
    // Front hemisphere (facing the viewer) solid, back dashed.
    std::string path;
    bool open = false, front = true;
    auto flush = [&] {
      if (!path.empty())
        svg << "<path d=\"" << path << "\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\""
            << (front ? "" : " stroke-dasharray=\"4 3\" opacity=\"0.6\"") << "><title>" << arc.id << "</title></path>\n";
      path.clear();
      open = false;
    };
    for (const auto& [t, u] : pts) {
      const bool f = u.dot(axis) >= 0;
      if (open && f != front) flush();
      front = f;
      std::snprintf(buf, sizeof buf, "%s%.3f %.3f ", open ? "L" : "M", c + rad * u.dot(e1), c - rad * u.dot(e2));
      path += buf;
      open = true;
    }
    flush();
  }
  svg << "</svg>\n";
  return svg.str();
}

/// Executes one request. Reports go to `out`, error JSON to `err`.
inline int run(const RunRequest& req, std::ostream& out, std::ostream& err) {
  auto fail = [&](std::string_view code, const std::string& message, int status) {
    err << errorJson(code, message).dump() << '\n';
    return status;
  };
  auto emitReport = [&](Json report) -> int {
    report["command"] = req.command;
    const std::string text = req.format == "csv" ? toCsv(report) : report.dump(2) + "\n";
    if (req.out.empty()) {
      out << text;
      return Ok;
    }
    std::ofstream f(req.out);
    if (!f || !(f << text)) return fail(codeName(ErrorCode::Io), "cannot write '" + req.out + "'", IoOrSchema);
    return Ok;
  };

  EmbeddedGraph g;
  try {
    if (req.input.empty() == req.example.empty())
      return fail(codeName(ErrorCode::BadParams), "give exactly one of --input and --example", Failure);
    if (!req.input.empty()) {
      g = loadGraph(req.input);
    } else {
      const auto [name, params] = parseExampleSpec(req.example);
      g = builtinExample(name, params);
    }
  } catch (const Error& e) {
    return fail(codeName(e.code()), e.what(), e.code() == ErrorCode::BadParams ? Failure : IoOrSchema);
  }

  try {
    if (req.command == "example") {
      const std::string text = graphToJson(g).dump(2) + "\n";
      if (!req.out.empty()) saveGraph(g, req.out);
      if (req.emit || req.out.empty()) out << text;
      return Ok;
    }

    const auto report = validate(g);
    if (req.command == "validate") {
      const int status = emitReport(toJson(report));
      if (status != Ok) return status;
      if (!report.ok()) {
        Json e = errorJson("VALIDATION_FAILED", "graph violates regularity assumptions");
        e["error"]["violations"] = toJson(report)["violations"];
        err << e.dump() << '\n';
        return ValidationFailed;
      }
      return Ok;
    }
    if (!report.ok()) {
      Json e = errorJson("VALIDATION_FAILED", "graph violates regularity assumptions");
      e["error"]["violations"] = toJson(report)["violations"];
      err << e.dump() << '\n';
      return ValidationFailed;
    }

    QuadratureConfig cfg;
    if (req.tol) cfg.relTol = *req.tol;
    cfg.check();
    const auto& space = g.space();
    auto requireApex = [&] {
      if (!req.apex) throw Error(ErrorCode::BadParams, "--apex is required for " + req.command);
      return apexPoint(*req.apex, space);
    };

    if (req.command == "tc") return emitReport(toJson(totalCurvature(g, cfg, req.seed)));
    if (req.command == "steiner") {
      Json verts = Json::object();
      if (!req.vertex.empty()) {
        verts[req.vertex] = toJson(vertexTC(g, req.vertex, req.seed));
      } else {
        for (const auto& v : g.vertices()) verts[v.id] = toJson(vertexTC(g, v.id, req.seed));
      }
      return emitReport(Json{{"vertices", verts}});
    }
    if (req.command == "cone-density") return emitReport(toJson(coneDensityGB(g, requireApex(), cfg), space));
    if (req.command == "classify") return emitReport(toJson(classify(g, cfg)));
    if (req.command == "cone-area") return emitReport(toJson(coneAreas(g, requireApex(), cfg), space));
    if (req.command == "corrected-classify") return emitReport(toJson(correctedClassify(g, cfg, req.budget), space));
    if (req.command == "plot") {
      const std::string svg = plotSvg(g, requireApex());
      if (req.svg.empty()) {
        out << svg;
        return Ok;
      }
      std::ofstream f(req.svg);
      if (!f || !(f << svg)) return fail(codeName(ErrorCode::Io), "cannot write '" + req.svg + "'", IoOrSchema);
      return emitReport(Json{{"svg", req.svg}});
    }
    return fail(codeName(ErrorCode::BadParams), "unknown command '" + req.command + "'", Failure);
  } catch (const Error& e) {
    int status = Failure;
    if (e.code() == ErrorCode::QuadratureNonconverged) status = Nonconverged;
    if (e.code() == ErrorCode::Io || e.code() == ErrorCode::Schema) status = IoOrSchema;
    return fail(codeName(e.code()), e.what(), status);
  }
}

}  // namespace graphcurv::cli
