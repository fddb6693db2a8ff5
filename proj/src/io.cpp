#include "cone_forge/io.hpp"

#include <stdexcept>

namespace cone_forge::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Json int_list(const std::vector<int>& xs) {
  Json a = Json::array();
  for (int x : xs) a.push_back(x);
  return a;
}

Json string_list(const std::vector<std::string>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(x);
  return a;
}

Json pair_json(const std::array<Rational, 2>& p) { return Json::array({rational_json(p[0]), rational_json(p[1])}); }

std::array<Rational, 2> pair_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) bad("expected a pair of rationals");
  return {rational_from(j[0]), rational_from(j[1])};
}

const char* kind_name(ComponentKind k) { return k == ComponentKind::Circle ? "circle" : "interval"; }

Json matrix_json(const std::vector<std::vector<int>>& m) {
  Json a = Json::array();
  for (const auto& row : m) a.push_back(int_list(row));
  return a;
}

Json strand_point_json(const StrandPoint& p) {
  return Json{{"component", p.component}, {"segment", p.segment}, {"param", rational_json(p.param)}};
}

}  // namespace

std::string schema_tag(std::string_view kind) { return "cone-forge/" + std::string(kind) + "/1"; }

void expect_schema(const Json& doc, std::string_view kind) {
  if (!doc.is_object() || !doc.contains("schema") || !doc["schema"].is_string()) bad("document has no schema tag");
  auto tag = doc["schema"].get<std::string>();
  if (tag != schema_tag(kind)) bad("expected schema " + schema_tag(kind) + ", found " + tag);
}

Json rational_json(const Rational& r) { return format_rational(r); }

Rational rational_from(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  bad("expected a rational string \"p/q\"");
}

Json pattern_json(const EdgePattern& p) {
  Json a = Json::array();
  for (int e : p.free_edges()) a.push_back(e);
  return Json{{"free_edge_at_vertex", a}};
}

EdgePattern pattern_from(const Json& j) {
  const Json* src = &j;
  if (j.is_object() && !j.contains("free_edge_at_vertex") && j.contains("pattern")) src = &j["pattern"];
  const auto& a = field(*src, "free_edge_at_vertex");
  if (!a.is_array() || a.size() != kVertexCount) bad("free_edge_at_vertex must list 8 edge ids");
  std::array<int, kVertexCount> edges{};
  for (std::size_t v = 0; v < edges.size(); ++v) {
    if (!a[v].is_number_integer()) bad("edge ids must be integers");
    edges[v] = a[v].get<int>();
  }
  return EdgePattern::from_free_edges(edges);
}

Json validity_json(const EdgePattern& p) {
  auto r = validate(p);
  Json out = pattern_json(p);
  out["index"] = p.index();
  out["valid"] = r.valid;
  out["circle_count"] = r.circle_count;
  out["interval_count"] = r.interval_count;
  out["circle_lengths"] = r.circle_lengths;
  out["interval_lengths"] = r.interval_lengths;
  if (!r.valid) out["reason"] = r.reason;
  return out;
}

Json box_json(const BoxSpec& b) {
  return Json::array({rational_json(b.dims[0]), rational_json(b.dims[1]), rational_json(b.dims[2])});
}

BoxSpec box_from(const Json& j) {
  if (!j.is_array() || j.size() != 3) bad("box must list three dimensions");
  BoxSpec b;
  for (std::size_t i = 0; i < 3; ++i) b.dims[i] = rational_from(j[i]);
  b.check();
  return b;
}

Json extent_json(const Extent& e) {
  return Json::array({e.lower ? rational_json(*e.lower) : Json("-inf"), e.upper ? rational_json(*e.upper) : Json("+inf")});
}

Extent extent_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) bad("extent must be [lo, hi]");
  Extent e;
  if (!(j[0].is_string() && j[0].get<std::string>() == "-inf")) e.lower = rational_from(j[0]);
  if (!(j[1].is_string() && j[1].get<std::string>() == "+inf")) e.upper = rational_from(j[1]);
  return e;
}

Json vec3q_json(const Vec3Q& v) { return Json::array({rational_json(v.x), rational_json(v.y), rational_json(v.z)}); }

Vec3Q vec3q_from(const Json& j) {
  if (!j.is_array() || j.size() != 3) bad("expected a rational 3-vector");
  return {rational_from(j[0]), rational_from(j[1]), rational_from(j[2])};
}

Json vec3_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

Json sectors_json(const SectorReport& s) {
  Json list = Json::array();
  for (const auto& sec : s.sectors) {
    list.push_back(Json{{"edge", sec.edge},
                        {"axis", std::string(1, axis_name(sec.axis))},
                        {"quadrant", Json::array({sec.quadrant[0], sec.quadrant[1]})},
                        {"apex", pair_json(sec.apex)},
                        {"extent", extent_json(sec.longitudinal)}});
  }
  Json pairs = Json::array();
  for (auto [a, b] : s.overlapping_pairs) pairs.push_back(Json::array({a, b}));
  return Json{{"sectors", list},
              {"overlapping_pairs", pairs},
              {"pairwise_disjoint", s.pairwise_disjoint},
              {"disjoint_away_from_corners", s.disjoint_away_from_corners},
              {"corners_covered", s.corners_covered},
              {"joints_covered", s.joints_covered},
              {"uncovered_corners", int_list(s.uncovered_corners)}};
}

Json realization_json(const RealizedPattern& rp) {
  Json edges = Json::array();
  for (const auto& e : rp.edges) {
    edges.push_back(Json{{"edge", e.edge},
                         {"axis", std::string(1, axis_name(e.line.axis))},
                         {"offset", pair_json(e.line.offset)},
                         {"extent", extent_json(e.line.extent)},
                         {"on_circle", e.on_circle},
                         {"component", e.component}});
  }
  Json comps = Json::array();
  for (const auto& c : rp.components) {
    Json joints = Json::array();
    for (const auto& jp : c.joints) joints.push_back(Json{{"vertex", jp.vertex}, {"point", vec3q_json(jp.point)}});
    Json cj{{"kind", kind_name(c.kind)}, {"edges", int_list(c.edges)}, {"joints", joints}};
    if (c.kind == ComponentKind::Interval) cj["end_vertices"] = Json::array({c.end_vertices[0], c.end_vertices[1]});
    comps.push_back(cj);
  }
  Json out{{"schema", schema_tag("realization")}};
  out["pattern"] = pattern_json(rp.pattern);
  out["box"] = box_json(rp.box);
  out["margin"] = rational_json(rp.margin);
  out["edges"] = edges;
  out["components"] = comps;
  out["sectors"] = sectors_json(compute_sectors(rp))["sectors"];
  return out;
}

RealizedPattern realization_from(const Json& j, std::vector<std::string>* mismatches) {
  expect_schema(j, "realization");
  auto pattern = pattern_from(field(j, "pattern"));
  auto box = box_from(field(j, "box"));
  auto margin = rational_from(field(j, "margin"));
  const auto& edges = field(j, "edges");
  if (!edges.is_array() || edges.size() != kEdgeCount) bad("a realization lists 12 edges");
  std::array<std::array<Rational, 2>, kEdgeCount> offsets;
  std::array<bool, kEdgeCount> seen{};
  for (const auto& e : edges) {
    int id = field(e, "edge").get<int>();
    if (id < 0 || id >= kEdgeCount || seen[static_cast<std::size_t>(id)]) bad("edge ids must be 0..11, each once");
    seen[static_cast<std::size_t>(id)] = true;
    if (parse_axis(field(e, "axis").get<std::string>()) != box::edge_axis(id)) bad("edge " + std::to_string(id) + " has the wrong axis");
    offsets[static_cast<std::size_t>(id)] = pair_from(field(e, "offset"));
  }
  auto rp = realize_from_offsets(pattern, box, margin, offsets);
  if (mismatches) {
    for (const auto& e : edges) {
      int id = e["edge"].get<int>();
      if (e.contains("extent") && extent_from(e["extent"]) != rp.edges[static_cast<std::size_t>(id)].line.extent) {
        mismatches->push_back("edge " + std::to_string(id) + ": stored extent differs from the one implied by the offsets");
      }
    }
    if (j.contains("components")) {
      for (const auto& c : j["components"]) {
        for (const auto& jp : c.value("joints", Json::array())) {
          int v = field(jp, "vertex").get<int>();
          if (v < 0 || v >= kVertexCount) bad("joint vertex out of range");
          if (vec3q_from(field(jp, "point")) != rp.joint_at(v)) {
            mismatches->push_back("vertex " + std::to_string(v) + ": stored joint differs from the one implied by the offsets");
          }
        }
      }
    }
  }
  return rp;
}

Json certificate_json(const EdgePattern& p, const BoxSpec& box, const Rational& margin, const RealizationResult& r) {
  Json out{{"schema", schema_tag("certificate")}};
  out["pattern"] = pattern_json(p);
  out["box"] = box_json(box);
  out["margin"] = rational_json(margin);
  out["feasible"] = r.feasible;
  out["sign_branches"] = r.sign_branches;
  if (r.certificate) {
    out["constraint_indices"] = int_list(r.certificate->indices);
    out["constraints"] = string_list(r.certificate->constraints);
  }
  return out;
}

Json link_json(const PolylineLink& link) {
  Json comps = Json::array();
  for (const auto& c : link.components) {
    Json pts = Json::array();
    for (const auto& p : c.points) pts.push_back(vec3q_json(p));
    Json cj{{"closed", c.closed}, {"closure", c.closure}, {"edges", int_list(c.edges)}, {"points", pts}};
    if (!c.closed) cj["ray_directions"] = Json::array({vec3q_json(c.ray_directions[0]), vec3q_json(c.ray_directions[1])});
    comps.push_back(cj);
  }
  return Json{{"schema", schema_tag("link")}, {"clip_radius", rational_json(link.clip_radius)}, {"components", comps}};
}

Json diagram_json(const LinkDiagram& d) {
  Json crossings = Json::array();
  for (std::size_t i = 0; i < d.crossings.size(); ++i) {
    const auto& c = d.crossings[i];
    crossings.push_back(Json{{"id", i + 1}, {"over", strand_point_json(c.over)}, {"under", strand_point_json(c.under)}, {"sign", c.sign}});
  }
  Json codes = Json::array();
  for (const auto& code : d.gauss_codes) codes.push_back(gauss_code_string(code));
  Json closed = Json::array();
  for (bool b : d.closed) closed.push_back(b);
  return Json{{"schema", schema_tag("diagram")},
              {"direction", vec3q_json(d.direction)},
              {"closed", closed},
              {"crossings", crossings},
              {"gauss_codes", codes},
              {"closed_components", int_list(d.closed_components)},
              {"linking_matrix", matrix_json(d.linking_matrix)}};
}

Json quaternion_json(const UnitQuaternion& q) { return Json::array({q.w, q.i, q.j, q.k}); }

Json end_report_json(const EndReport& r) {
  return Json{{"end", r.end},
              {"direction", vec3_json(r.direction)},
              {"edges", int_list(r.edges)},
              {"rotation", quaternion_json(r.product.rotation)},
              {"translation", vec3_json(r.translation)},
              {"rotation_identity", r.rotation_identity},
              {"spin", r.spin},
              {"path_length", r.path_length},
              {"deviation", r.deviation},
              {"passed", r.passed}};
}

Json gauss_bonnet_json(const GaussBonnetReport& r) {
  Json verts = Json::array();
  for (const auto& v : r.vertices) {
    verts.push_back(Json{{"vertex", v.vertex}, {"boundary", v.boundary}, {"angle", v.angle}, {"defect", v.defect}});
  }
  return Json{{"interior_defect_sum", r.interior_defect_sum},
              {"boundary_turning_sum", r.boundary_turning_sum},
              {"euler_characteristic", r.euler_characteristic},
              {"residual", r.residual},
              {"vertices", verts}};
}

Json doubled_disc_json(const DoubledDisc& d) {
  Json tris = Json::array();
  for (const auto& t : d.surface.triangles) {
    Json sq = Json::array();
    for (const auto& l : t.squared_lengths) sq.push_back(rational_json(l));
    tris.push_back(Json{{"vertices", Json::array({t.vertices[0], t.vertices[1], t.vertices[2]})}, {"squared_lengths", sq}});
  }
  Json glue = Json::array();
  for (const auto& g : d.surface.gluings) {
    glue.push_back(Json::array({Json::array({g.a.triangle, g.a.side}), Json::array({g.b.triangle, g.b.side})}));
  }
  return Json{{"schema", schema_tag("surface")},
              {"cone_angles", pi_list_json(d.cone_angles)},
              {"defects", pi_list_json(d.defects)},
              {"defect_sum", format_pi_multiple(sum(d.defects))},
              {"cone_vertices", int_list(d.cone_vertices)},
              {"triangles", tris},
              {"gluings", glue},
              {"gauss_bonnet", gauss_bonnet_json(gauss_bonnet(d.surface))}};
}

Json pi_list_json(const std::vector<PiMultiple>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(format_pi_multiple(x));
  return a;
}

std::vector<PiMultiple> pi_list_from(const Json& j) {
  if (!j.is_array()) bad("expected a list of angles");
  std::vector<PiMultiple> out;
  for (const auto& x : j) {
    if (!x.is_string()) bad("angles are strings such as \"1/2pi\"");
    out.push_back(parse_pi_multiple(x.get<std::string>()));
  }
  return out;
}

Json description_json(const ConeManifoldDescription& d) {
  Json out{{"schema", schema_tag("description")}, {"variant", variant_name(d)}};
  struct V {
    Json& out;
    void operator()(const SoulDim2Sphere& x) const { out["defects"] = pi_list_json(x.defects); }
    void operator()(const SoulDim2Projective& x) const { out["defects"] = pi_list_json(x.defects); }
    void operator()(const SoulDim1& x) const {
      Json pts = Json::array();
      for (const auto& p : x.plane_defects) pts.push_back(Json{{"defect", format_pi_multiple(p.defect)}, {"on_rotation_axis", p.on_rotation_axis}});
      out["plane_defects"] = pts;
      out["rotation_angle"] = format_pi_multiple(x.rotation_angle);
      out["rotation_order"] = x.rotation_order ? Json(*x.rotation_order) : Json("infinite");
    }
    void operator()(const SoulDim0Lines& x) const { out["line_defects"] = pi_list_json(x.line_defects); }
    void operator()(const Example1& x) const {
      out["disc_defects"] = pi_list_json(x.disc_defects);
      out["closed_defects"] = pi_list_json(x.closed_defects);
    }
    void operator()(const Example2& x) const {
      out["n"] = x.n;
      out["closed_defects"] = pi_list_json(x.closed_defects);
    }
    void operator()(const EdgePatternType& x) const {
      out["pattern"] = pattern_json(x.pattern);
      out["box"] = box_json(x.box);
    }
  };
  std::visit(V{out}, d);
  return out;
}

ConeManifoldDescription description_from(const Json& j) {
  expect_schema(j, "description");
  auto v = field(j, "variant").get<std::string>();
  if (v == "soul_dim2_sphere") return SoulDim2Sphere{pi_list_from(field(j, "defects"))};
  if (v == "soul_dim2_projective") return SoulDim2Projective{pi_list_from(field(j, "defects"))};
  if (v == "soul_dim1") {
    SoulDim1 s;
    for (const auto& p : field(j, "plane_defects")) {
      s.plane_defects.push_back({parse_pi_multiple(field(p, "defect").get<std::string>()), p.value("on_rotation_axis", false)});
    }
    s.rotation_angle = parse_pi_multiple(field(j, "rotation_angle").get<std::string>());
    const auto& ord = field(j, "rotation_order");
    if (ord.is_number_integer()) {
      s.rotation_order = ord.get<int>();
    } else if (!(ord.is_string() && ord.get<std::string>() == "infinite")) {
      bad("rotation_order must be an integer or \"infinite\"");
    }
    return s;
  }
  if (v == "soul_dim0_lines") return SoulDim0Lines{pi_list_from(field(j, "line_defects"))};
  if (v == "example1") return Example1{pi_list_from(field(j, "disc_defects")), pi_list_from(field(j, "closed_defects"))};
  if (v == "example2") {
    int n = field(j, "n").get<int>();
    if (n < 1) bad("n must be positive");
    return Example2{n, pi_list_from(field(j, "closed_defects"))};
  }
  if (v == "edge_pattern") {
    BoxSpec box;
    if (j.contains("box")) box = box_from(j["box"]);
    return EdgePatternType{pattern_from(field(j, "pattern")), box};
  }
  bad("unknown variant \"" + v + "\"");
}

Json budget_json(const BudgetReport& r) {
  Json out{{"passed", r.passed}, {"budget", format_pi_multiple(r.budget)}, {"violations", string_list(r.violations)}};
  out["component_cap"] = r.component_cap ? Json(*r.component_cap) : Json();
  return out;
}

Json classification_json(const Classification& c) {
  Json out{{"classified", c.classified}};
  out["soul_dimension"] = c.soul_dimension ? Json(*c.soul_dimension) : Json();
  out["structure"] = c.structure_name;
  out["rule"] = c.rule;
  return out;
}

Json shrink_state_json(const BoundaryState& s) {
  Json faces = Json::array();
  for (const auto& f : s.faces) faces.push_back(Json{{"cones", f.cone_count}, {"corners", f.corner_count}});
  Json edges = Json::array();
  for (const auto& e : s.edges) {
    edges.push_back(Json{{"faces", Json::array({e.face_a, e.face_b})}, {"corners", Json::array({e.from, e.to})}, {"created", e.created}});
  }
  return Json{{"phase", s.phase == ShrinkPhase::Shrinking ? "shrinking" : "collapsed"},
              {"faces", faces},
              {"corner_count", s.global_corner_count},
              {"edges", edges},
              {"sphere", s.sphere},
              {"history", string_list(s.history)},
              {"terminal", terminal_kind_name(classify_terminal(s))}};
}

Json exploration_json(const Exploration& e) {
  Json states = Json::array();
  for (std::size_t i = 0; i < e.states.size(); ++i) {
    Json s = shrink_state_json(e.states[i]);
    s["depth"] = e.depth[i];
    states.push_back(s);
  }
  return Json{{"schema", schema_tag("shrink-exploration")},
              {"state_count", e.states.size()},
              {"quiescent", e.quiescent},
              {"violations", string_list(e.violations)},
              {"states", states}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cone_forge::io
