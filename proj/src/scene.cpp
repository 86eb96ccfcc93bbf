#include "latcell/scene.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace latcell::scene {

using nlohmann::json;

ScheduleKind schedule_kind_from_string(const std::string& tag) {
  if (tag == "reciprocal") return ScheduleKind::Reciprocal;
  if (tag == "offset") return ScheduleKind::Offset;
  throw ValidationError("unknown schedule kind: " + tag);
}

const char* to_string(ScheduleKind kind) {
  return kind == ScheduleKind::Reciprocal ? "reciprocal" : "offset";
}

namespace {

struct Ctx {
  const std::string* text = nullptr;
};

[[noreturn]] void fail(const Ctx& ctx, const std::string& key, const std::string& msg) {
  std::string where;
  if (ctx.text) {
    long line = 1;
    auto pos = ctx.text->find("\"" + key + "\"");
    if (pos != std::string::npos)
      line += std::count(ctx.text->begin(),
                         ctx.text->begin() + static_cast<long>(pos), '\n');
    where = "line " + std::to_string(line) + ": ";
  }
  throw ValidationError(where + msg);
}

void check_object(const Ctx& ctx, const json& j, const std::string& what,
                  const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(ctx, what, what + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key()))
      fail(ctx, item.key(), "unknown field '" + item.key() + "' in " + what);
  }
}

double get_number(const Ctx& ctx, const json& j, const std::string& key) {
  if (!j.is_number()) fail(ctx, key, "field '" + key + "' must be a number");
  return j.get<double>();
}

int get_int(const Ctx& ctx, const json& j, const std::string& key) {
  if (!j.is_number_integer()) fail(ctx, key, "field '" + key + "' must be an integer");
  return j.get<int>();
}

std::string get_string(const Ctx& ctx, const json& j, const std::string& key) {
  if (!j.is_string()) fail(ctx, key, "field '" + key + "' must be a string");
  return j.get<std::string>();
}

Vec3 get_vec3(const Ctx& ctx, const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3)
    fail(ctx, key, "field '" + key + "' must be a 3-vector");
  Vec3 v;
  for (int i = 0; i < 3; ++i) v[i] = get_number(ctx, j[i], key);
  return v;
}

IVec3 get_ivec3(const Ctx& ctx, const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3)
    fail(ctx, key, "field '" + key + "' must be a 3-vector of integers");
  IVec3 v;
  for (int i = 0; i < 3; ++i) v[i] = get_int(ctx, j[i], key);
  return v;
}

Mat3 get_mat3_rows(const Ctx& ctx, const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3)
    fail(ctx, key, "field '" + key + "' must be a 3x3 matrix (list of rows)");
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    Vec3 row = get_vec3(ctx, j[r], key);
    m.row(r) = row.transpose();
  }
  return m;
}

geometry::ConvexPolytope parse_named_domain(const Ctx& ctx, const json& j) {
  std::string name = get_string(ctx, j.at("name"), "name");
  auto forbid = [&](const char* key, const std::string& reason) {
    if (j.contains(key))
      fail(ctx, key, std::string("field '") + key + "' does not apply to " + reason);
  };
  if (name == "ball") {
    forbid("scale", name);
    Vec3 center = j.contains("center") ? get_vec3(ctx, j["center"], "center") : Vec3::Zero();
    double radius = j.contains("radius") ? get_number(ctx, j["radius"], "radius") : 1.0;
    int refinement = j.contains("refinement") ? get_int(ctx, j["refinement"], "refinement") : 3;
    if (radius <= 0.0) fail(ctx, "radius", "ball radius must be positive");
    if (refinement < 0 || refinement > 6)
      fail(ctx, "refinement", "refinement must be in 0..6");
    return geometry::make_ball_polytope(center, radius, refinement);
  }
  forbid("center", name);
  forbid("radius", name);
  forbid("refinement", name);
  double scale = j.contains("scale") ? get_number(ctx, j["scale"], "scale") : 1.0;
  if (scale <= 0.0) fail(ctx, "scale", "scale must be positive");
  if (name == "unit_cube")
    return geometry::ConvexPolytope::from_box(Vec3::Zero(), Vec3(scale, scale, scale));
  if (name == "centered_cube")
    return geometry::ConvexPolytope::from_box(Vec3(-scale, -scale, -scale),
                                              Vec3(scale, scale, scale));
  if (name == "lattice_tetrahedron") {
    double c = 2.0 * scale;
    return geometry::ConvexPolytope::from_vertices(
        {Vec3::Zero(), Vec3(c, 0, 0), Vec3(0, c, 0), Vec3(0, 0, c)});
  }
  fail(ctx, "name", "unknown domain name: " + name);
}

geometry::ConvexPolytope parse_domain(const Ctx& ctx, const json& j) {
  if (!j.is_object() || !j.contains("type"))
    fail(ctx, "domain", "domain needs a 'type' field");
  std::string type = get_string(ctx, j.at("type"), "type");
  if (type == "box") {
    check_object(ctx, j, "domain", {"type", "min", "max"});
    if (!j.contains("min") || !j.contains("max"))
      fail(ctx, "domain", "box domain needs 'min' and 'max'");
    return geometry::ConvexPolytope::from_box(get_vec3(ctx, j["min"], "min"),
                                              get_vec3(ctx, j["max"], "max"));
  }
  if (type == "hull") {
    check_object(ctx, j, "domain", {"type", "points"});
    if (!j.contains("points")) fail(ctx, "domain", "hull domain needs 'points'");
    const json& pts = j["points"];
    if (!pts.is_array() || pts.size() < 4)
      fail(ctx, "points", "hull needs at least 4 points");
    std::vector<Vec3> v;
    for (const auto& p : pts) v.push_back(get_vec3(ctx, p, "points"));
    return geometry::ConvexPolytope::from_vertices(v);
  }
  if (type == "halfspaces") {
    check_object(ctx, j, "domain", {"type", "planes"});
    if (!j.contains("planes")) fail(ctx, "domain", "halfspaces domain needs 'planes'");
    const json& planes = j["planes"];
    if (!planes.is_array() || planes.size() < 4)
      fail(ctx, "planes", "halfspaces domain needs at least 4 planes");
    std::vector<geometry::HalfSpace> hs;
    for (const auto& p : planes) {
      check_object(ctx, p, "plane", {"normal", "offset"});
      if (!p.contains("normal") || !p.contains("offset"))
        fail(ctx, "planes", "each plane needs 'normal' and 'offset'");
      hs.push_back({get_vec3(ctx, p["normal"], "normal"),
                    get_number(ctx, p["offset"], "offset")});
    }
    return geometry::ConvexPolytope::from_halfspaces(hs);
  }
  if (type == "named") {
    check_object(ctx, j, "domain",
                 {"type", "name", "scale", "center", "radius", "refinement"});
    if (!j.contains("name")) fail(ctx, "domain", "named domain needs 'name'");
    return parse_named_domain(ctx, j);
  }
  fail(ctx, "type", "unknown domain type: " + type);
}

Scene parse_scene_impl(const json& j, const std::string* text) {
  Ctx ctx{text};
  check_object(ctx, j, "scene",
               {"version", "lattice", "domain", "potential", "deformation", "interface",
                "schedule", "boundary_rule", "quadrature", "threads", "format",
                "densities"});
  if (!j.contains("version")) fail(ctx, "version", "scene needs a 'version' field");
  Scene s;
  s.version = get_int(ctx, j.at("version"), "version");
  if (s.version != 1) fail(ctx, "version", "unsupported scene version");
  if (!j.contains("domain")) fail(ctx, "domain", "scene needs a 'domain' field");

  if (j.contains("lattice")) {
    check_object(ctx, j["lattice"], "lattice", {"basis"});
    if (!j["lattice"].contains("basis"))
      fail(ctx, "lattice", "lattice needs a 'basis' field");
    const json& rows = j["lattice"]["basis"];
    if (!rows.is_array() || rows.size() != 3)
      fail(ctx, "basis", "basis must list three lattice vectors");
    Mat3 b;
    for (int i = 0; i < 3; ++i) b.col(i) = get_vec3(ctx, rows[i], "basis");
    s.lattice = lattice::BravaisLattice::from_basis(b);
  }

  s.domain = parse_domain(ctx, j["domain"]);

  if (j.contains("potential")) {
    check_object(ctx, j["potential"], "potential", {"name", "params"});
    if (!j["potential"].contains("name"))
      fail(ctx, "potential", "potential needs a 'name' field");
    std::string name = get_string(ctx, j["potential"]["name"], "name");
    std::map<std::string, double> params;
    if (j["potential"].contains("params")) {
      const json& p = j["potential"]["params"];
      if (!p.is_object()) fail(ctx, "params", "params must be an object");
      for (const auto& item : p.items())
        params[item.key()] = get_number(ctx, item.value(), item.key());
    }
    s.potential = material::builtin_potential(name, params);
  }

  if (j.contains("interface")) {
    const json& itf = j["interface"];
    check_object(ctx, itf, "interface", {"miller", "normal", "anchor"});
    if (itf.contains("miller") == itf.contains("normal"))
      fail(ctx, "interface", "interface needs exactly one of 'miller' or 'normal'");
    Vec3 anchor = itf.contains("anchor") ? get_vec3(ctx, itf["anchor"], "anchor")
                                         : Vec3::Zero();
    if (itf.contains("miller")) {
      lattice::MillerVector m =
          lattice::miller_reduce(get_ivec3(ctx, itf["miller"], "miller"));
      s.interface = geometry::InterfacePlane::from_miller(m, anchor);
    } else {
      Vec3 n = get_vec3(ctx, itf["normal"], "normal");
      if (n.norm() < 1e-12) fail(ctx, "normal", "interface normal must be nonzero");
      s.interface = geometry::InterfacePlane{n.normalized(), std::nullopt, anchor};
    }
  }

  if (j.contains("deformation")) {
    const json& d = j["deformation"];
    check_object(ctx, d, "deformation", {"type", "F", "F_minus", "a"});
    if (!d.contains("type")) fail(ctx, "deformation", "deformation needs a 'type'");
    std::string type = get_string(ctx, d["type"], "type");
    if (type == "none") {
      if (d.size() != 1) fail(ctx, "deformation", "'none' deformation takes no fields");
    } else if (type == "affine") {
      if (!d.contains("F")) fail(ctx, "deformation", "affine deformation needs 'F'");
      if (d.contains("F_minus") || d.contains("a"))
        fail(ctx, "deformation", "affine deformation takes only 'F'");
      s.deformation = material::AffineDeformation{get_mat3_rows(ctx, d["F"], "F")};
    } else if (type == "piecewise") {
      if (!d.contains("F_minus") || !d.contains("a"))
        fail(ctx, "deformation", "piecewise deformation needs 'F_minus' and 'a'");
      if (d.contains("F")) fail(ctx, "deformation", "piecewise deformation has no 'F'");
      if (!s.interface)
        fail(ctx, "deformation", "piecewise deformation requires an interface");
      s.deformation = material::PiecewiseAffineDeformation{
          get_mat3_rows(ctx, d["F_minus"], "F_minus"), get_vec3(ctx, d["a"], "a"),
          *s.interface};
    } else {
      fail(ctx, "type", "unknown deformation type: " + type);
    }
  }

  if (j.contains("schedule")) {
    const json& sch = j["schedule"];
    check_object(ctx, sch, "schedule", {"kind", "k_min", "k_max", "theta"});
    if (sch.contains("kind"))
      s.schedule.kind = schedule_kind_from_string(get_string(ctx, sch["kind"], "kind"));
    if (sch.contains("k_min")) s.schedule.k_min = get_int(ctx, sch["k_min"], "k_min");
    if (sch.contains("k_max")) s.schedule.k_max = get_int(ctx, sch["k_max"], "k_max");
    if (sch.contains("theta")) s.schedule.theta = get_number(ctx, sch["theta"], "theta");
  }

  if (j.contains("boundary_rule")) {
    std::string rule = get_string(ctx, j["boundary_rule"], "boundary_rule");
    if (rule == "closed")
      s.boundary_rule = BoundaryRule::Closed;
    else if (rule == "halfopen")
      s.boundary_rule = BoundaryRule::HalfOpen;
    else
      fail(ctx, "boundary_rule", "boundary_rule must be 'closed' or 'halfopen'");
  }

  if (j.contains("quadrature")) {
    const json& q = j["quadrature"];
    check_object(ctx, q, "quadrature", {"sigma_order", "smooth_order", "slab_tol"});
    if (q.contains("sigma_order"))
      s.quadrature.sigma_order = get_int(ctx, q["sigma_order"], "sigma_order");
    if (q.contains("smooth_order"))
      s.quadrature.smooth_order = get_int(ctx, q["smooth_order"], "smooth_order");
    if (q.contains("slab_tol"))
      s.quadrature.slab_tol = get_number(ctx, q["slab_tol"], "slab_tol");
    if (s.quadrature.sigma_order < 1 || s.quadrature.smooth_order < 1 ||
        s.quadrature.slab_tol <= 0.0)
      fail(ctx, "quadrature", "quadrature settings must be positive");
  }

  if (j.contains("threads")) {
    s.threads = get_int(ctx, j["threads"], "threads");
    if (s.threads < 1) fail(ctx, "threads", "threads must be at least 1");
  }
  s.quadrature.threads = s.threads;

  if (j.contains("format")) {
    s.format = get_string(ctx, j["format"], "format");
    if (s.format != "csv" && s.format != "json")
      fail(ctx, "format", "format must be 'csv' or 'json'");
  }

  if (j.contains("densities")) {
    const json& ds = j["densities"];
    if (!ds.is_array()) fail(ctx, "densities", "densities must be a list of names");
    const std::set<std::string> known{"W", "gamma", "gamma_diamond", "sigma", "tau"};
    for (const auto& dsj : ds) {
      std::string name = get_string(ctx, dsj, "densities");
      if (!known.count(name)) fail(ctx, "densities", "unknown density name: " + name);
      s.densities.push_back(name);
    }
  }

  s.spec = j;
  return s;
}

}  // namespace

Scene parse_scene(const json& j) { return parse_scene_impl(j, nullptr); }

Scene parse_scene_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto upto = std::min(text.size(), static_cast<std::size_t>(e.byte));
    auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ValidationError("line " + std::to_string(line) +
                          ": scene is not valid JSON: " + e.what());
  }
  return parse_scene_impl(j, &text);
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scene file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scene_text(buf.str());
}

nlohmann::json scene_to_json(const Scene& s) { return s.spec; }

}  // namespace latcell::scene
