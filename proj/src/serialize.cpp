#include "fovexp/serialize.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace fovexp::io {

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  require(j.is_array() && j.size() == 2, ErrorKind::Io, "expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

void check_schema(const Json& j, const char* schema) {
  require(j.is_object() && j.value("schema", std::string()) == schema, ErrorKind::Io,
          std::string("expected schema ") + schema);
}

std::string next_content_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    return line;
  }
  throw Error(ErrorKind::Io, "mesh: unexpected end of file");
}

std::size_t read_count(std::istream& in, const std::string& keyword) {
  std::istringstream ls(next_content_line(in));
  std::string key;
  long long count = -1;
  ls >> key >> count;
  require(ls && key == keyword && count >= 0, ErrorKind::Io, "mesh: expected '" + keyword + " <count>'");
  return static_cast<std::size_t>(count);
}

}  // namespace

Json rectangle_json(const Rectangle& r) {
  return Json{{"re_min", r.re_min}, {"re_max", r.re_max}, {"im_min", r.im_min}, {"im_max", r.im_max}};
}

Rectangle rectangle_from_json(const Json& j) {
  try {
    return {j.at("re_min").get<double>(), j.at("re_max").get<double>(), j.at("im_min").get<double>(),
            j.at("im_max").get<double>()};
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Io, std::string("rectangle: ") + e.what());
  }
}

Json bound_json(const BoundingRectangle& rect, const CondEstimate& cond) {
  return Json{{"schema", kBoundSchema},
              {"raw", rectangle_json(rect.raw)},
              {"region", rectangle_json(rect.region)},
              {"rel_margin", rect.rel_margin},
              {"lhp_certified", is_lhp_certified(rect)},
              {"kappa_tilde", cond.kappa_tilde},
              {"delta", cond.delta},
              {"kappa_safe", cond.kappa_safe}};
}

Json approximant_json(const CertifiedApproximant& a) {
  const auto& pf = a.rational().form;
  Json poles = Json::array(), weights = Json::array();
  for (const auto& p : pf.poles) poles.push_back(complex_json(p));
  for (const auto& w : pf.weights) weights.push_back(complex_json(w));
  return Json{{"schema", kApproximantSchema},
              {"method", std::string(to_string(a.method()))},
              {"degree", a.degree()},
              {"scaling", a.rational().scaling},
              {"rectangle", rectangle_json(a.rect())},
              {"sup_error_estimate", a.sup_error_estimate()},
              {"target", a.target()},
              {"gamma", complex_json(pf.gamma)},
              {"poles", poles},
              {"weights", weights}};
}

CertifiedApproximant approximant_from_json(const Json& j) {
  check_schema(j, kApproximantSchema);
  try {
    ScaledRational r;
    r.scaling = j.at("scaling").get<int>();
    r.form.gamma = complex_from_json(j.at("gamma"));
    for (const auto& p : j.at("poles")) r.form.poles.push_back(complex_from_json(p));
    for (const auto& w : j.at("weights")) r.form.weights.push_back(complex_from_json(w));
    require(r.form.poles.size() == r.form.weights.size(), ErrorKind::Io, "approximant: poles/weights mismatch");
    return CertifiedApproximant(std::move(r), rectangle_from_json(j.at("rectangle")),
                                j.at("sup_error_estimate").get<double>(), j.at("target").get<double>(),
                                parse_method(j.at("method").get<std::string>()));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Io, std::string("approximant: ") + e.what());
  }
}

Json certificate_json(const ExpmvCertificate& c) {
  Json j{{"schema", kCertificateSchema},
         {"ok", c.ok()},
         {"method", std::string(to_string(c.method))},
         {"mode", std::string(to_string(c.region))},
         {"eps", c.eps},
         {"rectangle", bound_json(c.rectangle, c.cond)},
         {"norm_factor", c.norm_factor},
         {"scalar_target", c.scalar_target},
         {"achieved", c.achieved},
         {"certified_bound", c.certified_bound()},
         {"degree", c.degree},
         {"scaling", c.scaling}};
  j["failure"] = c.failure ? Json(std::string(to_string(*c.failure))) : Json(nullptr);
  if (c.failure) j["failure_message"] = c.failure_message;
  j["approximant"] = c.approximant ? approximant_json(*c.approximant) : Json(nullptr);
  return j;
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  require(static_cast<bool>(out), ErrorKind::Io, "write failed: " + path.string());
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Io, path.string() + ": " + e.what());
  }
}

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "fovexp-mesh 1\n";
  out << "# vertex lines: x y boundary; triangle lines: 0-based counterclockwise indices\n";
  out << "domain " << to_string(mesh.domain) << '\n';
  out << "h_bar " << mesh.h_bar << '\n';
  out << "vertices " << mesh.vertices.size() << '\n';
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    out << mesh.vertices[v][0] << ' ' << mesh.vertices[v][1] << ' ' << (mesh.boundary[v] ? 1 : 0) << '\n';
  out << "triangles " << mesh.triangles.size() << '\n';
  for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "outline " << mesh.outline.size() << '\n';
  for (const auto& p : mesh.outline) out << p[0] << ' ' << p[1] << '\n';
}

void write_mesh(const std::filesystem::path& path, const TriMesh& mesh) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path.string() + " for writing");
  write_mesh(out, mesh);
  require(static_cast<bool>(out), ErrorKind::Io, "write failed: " + path.string());
}

TriMesh read_mesh(std::istream& in) {
  TriMesh mesh;
  {
    std::istringstream ls(next_content_line(in));
    std::string magic;
    int version = 0;
    ls >> magic >> version;
    require(magic == "fovexp-mesh" && version == 1, ErrorKind::Io, "mesh: bad header");
  }
  {
    std::istringstream ls(next_content_line(in));
    std::string key, dom;
    ls >> key >> dom;
    require(key == "domain", ErrorKind::Io, "mesh: expected 'domain'");
    mesh.domain = parse_domain(dom);
  }
  {
    std::istringstream ls(next_content_line(in));
    std::string key;
    ls >> key >> mesh.h_bar;
    require(ls && key == "h_bar", ErrorKind::Io, "mesh: expected 'h_bar <value>'");
  }
  const std::size_t nv = read_count(in, "vertices");
  for (std::size_t v = 0; v < nv; ++v) {
    std::istringstream ls(next_content_line(in));
    double x, y;
    int b;
    ls >> x >> y >> b;
    require(static_cast<bool>(ls), ErrorKind::Io, "mesh: bad vertex line");
    mesh.vertices.push_back({x, y});
    mesh.boundary.push_back(b != 0);
  }
  const std::size_t nt = read_count(in, "triangles");
  for (std::size_t t = 0; t < nt; ++t) {
    std::istringstream ls(next_content_line(in));
    std::array<int, 3> tri{};
    ls >> tri[0] >> tri[1] >> tri[2];
    require(static_cast<bool>(ls), ErrorKind::Io, "mesh: bad triangle line");
    for (int k : tri)
      require(k >= 0 && static_cast<std::size_t>(k) < nv, ErrorKind::Io, "mesh: triangle index out of range");
    mesh.triangles.push_back(tri);
  }
  const std::size_t no = read_count(in, "outline");
  for (std::size_t k = 0; k < no; ++k) {
    std::istringstream ls(next_content_line(in));
    double x, y;
    ls >> x >> y;
    require(static_cast<bool>(ls), ErrorKind::Io, "mesh: bad outline line");
    mesh.outline.push_back({x, y});
  }
  return mesh;
}

TriMesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path.string());
  return read_mesh(in);
}

}  // namespace fovexp::io
