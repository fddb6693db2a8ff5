#include "cone_forge/realize.hpp"

#include <algorithm>
#include <sstream>

namespace cone_forge {

namespace {

// Value of a transverse coordinate of some edge: constant + x[var].
struct Coord {
  Rational constant;
  int var = -1;
};

int slot(int edge, Axis a) {
  auto t = transverse_axes(box::edge_axis(edge));
  if (a == t[0]) return 0;
  if (a == t[1]) return 1;
  throw std::logic_error("slot: axis is the edge direction");
}

Rational base_coordinate(const BoxSpec& box, int edge, Axis a) { return box.face(a, box::edge_transverse_bit(edge, a)); }

int other_joined(const EdgePattern& p, int vertex, int edge) {
  auto j = p.joined_edges(vertex);
  return j[0] == edge ? j[1] : j[0];
}

/// Direction (+1/-1) from vertex v into the box along axis a.
int inward_sign(int vertex, Axis a) { return box::vertex_bit(vertex, a) ? -1 : 1; }

std::string edge_name(int e) { return "e" + std::to_string(e); }

std::string coord_name(int e, Axis a) { return edge_name(e) + "." + axis_name(a); }

// sign * (A - B) >= rhs
LinearConstraint difference(const Coord& a, const Coord& b, int sign, const Rational& rhs, std::string label) {
  LinearConstraint c;
  if (a.var >= 0) c.coeffs[a.var] += Rational(sign);
  if (b.var >= 0) c.coeffs[b.var] -= Rational(sign);
  c.rhs = rhs - Rational(sign) * (a.constant - b.constant);
  c.label = std::move(label);
  return c;
}

}  // namespace

Rational BoxSpec::min_dim() const { return std::min({dims[0], dims[1], dims[2]}); }

void BoxSpec::check() const {
  for (const auto& d : dims) {
    if (d <= 0) throw std::invalid_argument("box dimensions must be positive");
  }
}

const char* constraint_kind_name(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Joint: return "joint";
    case ConstraintKind::Length: return "length";
    case ConstraintKind::Corner: return "corner";
    case ConstraintKind::Diagonal: return "diagonal";
    case ConstraintKind::Bound: return "bound";
  }
  return "?";
}

std::size_t RealizabilitySystem::count(ConstraintKind kind) const {
  return static_cast<std::size_t>(std::count(kinds.begin(), kinds.end(), kind));
}

RealizabilitySystem build_constraints(const EdgePattern& pattern, const BoxSpec& box, const Rational& margin) {
  box.check();
  if (margin <= 0) throw std::invalid_argument("margin must be positive");
  auto report = validate(pattern);
  if (!report.valid) throw std::invalid_argument("pattern is not valid: " + report.reason);

  auto dec = decompose(pattern);
  RealizabilitySystem rs;
  auto on_circle = [&](int e) {
    return dec.components[static_cast<std::size_t>(dec.component_of_edge[static_cast<std::size_t>(e)])].kind == ComponentKind::Circle;
  };
  for (int e = 0; e < kEdgeCount; ++e) {
    auto& vars = rs.variables[static_cast<std::size_t>(e)];
    vars = {-1, -1};
    if (on_circle(e)) continue;
    auto t = transverse_axes(box::edge_axis(e));
    for (int k = 0; k < 2; ++k) {
      vars[static_cast<std::size_t>(k)] = rs.system.add_variable("d" + std::to_string(e) + axis_name(t[static_cast<std::size_t>(k)]));
    }
  }
  auto coord = [&](int e, Axis a) {
    return Coord{base_coordinate(box, e, a), rs.variables[static_cast<std::size_t>(e)][static_cast<std::size_t>(slot(e, a))]};
  };
  auto add = [&](LinearConstraint c, ConstraintKind kind) {
    rs.system.add(std::move(c));
    rs.kinds.push_back(kind);
  };

  // Joined edges keep meeting: shared coordinate along the third axis.
  for (int v = 0; v < kVertexCount; ++v) {
    auto [e1, e2] = pattern.joined_edges(v);
    if (on_circle(e1)) continue;
    Axis u3 = third_axis(box::edge_axis(e1), box::edge_axis(e2));
    auto c = difference(coord(e1, u3), coord(e2, u3), 1, 0,
                        "joint v" + std::to_string(v) + ": " + coord_name(e1, u3) + " = " + coord_name(e2, u3));
    c.relation = Relation::Equal;
    add(std::move(c), ConstraintKind::Joint);
  }

  // Edges joined at both ends keep positive length.
  for (int e = 0; e < kEdgeCount; ++e) {
    if (on_circle(e) || pattern.is_free_at(e, 0) || pattern.is_free_at(e, 1)) continue;
    Axis u = box::edge_axis(e);
    int lo = other_joined(pattern, box::edge_endpoint(e, 0), e);
    int hi = other_joined(pattern, box::edge_endpoint(e, 1), e);
    add(difference(coord(hi, u), coord(lo, u), 1, margin, "length " + edge_name(e) + ": " + coord_name(hi, u) + " - " + coord_name(lo, u) + " >= margin"),
        ConstraintKind::Length);
  }

  // The free edge at each corner passes strictly inside the right angle of
  // the joined pair, measured from their meeting point q.
  for (int v = 0; v < kVertexCount; ++v) {
    int f = pattern.free_edge(v);
    auto [e1, e2] = pattern.joined_edges(v);
    Axis u1 = box::edge_axis(e1), u2 = box::edge_axis(e2);
    // q.u1 is fixed by e2 (which runs along u2), q.u2 by e1.
    int s1 = inward_sign(v, u1), s2 = inward_sign(v, u2);
    std::string where = "corner v" + std::to_string(v) + ": ";
    add(difference(coord(f, u1), coord(e2, u1), s1, margin,
                   where + (s1 > 0 ? "" : "-") + "(" + coord_name(f, u1) + " - " + coord_name(e2, u1) + ") >= margin"),
        ConstraintKind::Corner);
    add(difference(coord(f, u2), coord(e1, u2), s2, margin,
                   where + (s2 > 0 ? "" : "-") + "(" + coord_name(f, u2) + " - " + coord_name(e1, u2) + ") >= margin"),
        ConstraintKind::Corner);
  }

  // ...and equally far from both joined edges, so the two faces of its
  // sector expose the same width near the corner and fold onto each other.
  for (int v = 0; v < kVertexCount; ++v) {
    int f = pattern.free_edge(v);
    auto [e1, e2] = pattern.joined_edges(v);
    Axis u1 = box::edge_axis(e1), u2 = box::edge_axis(e2);
    int s1 = inward_sign(v, u1), s2 = inward_sign(v, u2);
    Coord a = coord(f, u1), b = coord(e2, u1), c = coord(f, u2), d = coord(e1, u2);
    LinearConstraint eq;
    for (auto [co, w] : {std::pair{a, s1}, std::pair{b, -s1}, std::pair{c, -s2}, std::pair{d, s2}}) {
      if (co.var >= 0) eq.coeffs[co.var] += Rational(w);
      eq.rhs -= Rational(w) * co.constant;
    }
    eq.relation = Relation::Equal;
    eq.label = "diagonal v" + std::to_string(v) + ": " + (s1 > 0 ? "" : "-") + "(" + coord_name(f, u1) + " - " + coord_name(e2, u1) +
               ") = " + (s2 > 0 ? "" : "-") + "(" + coord_name(f, u2) + " - " + coord_name(e1, u2) + ")";
    add(std::move(eq), ConstraintKind::Diagonal);
  }

  // Displacements stay small.
  const Rational bound = box.min_dim() / 4;
  for (std::size_t var = 0; var < rs.system.variable_names.size(); ++var) {
    const auto& name = rs.system.variable_names[var];
    LinearConstraint upper{{{static_cast<int>(var), Rational(-1)}}, Relation::GreaterEqual, -bound, "bound " + name + " <= min_dim/4"};
    LinearConstraint lower{{{static_cast<int>(var), Rational(1)}}, Relation::GreaterEqual, -bound, "bound " + name + " >= -min_dim/4"};
    add(std::move(upper), ConstraintKind::Bound);
    add(std::move(lower), ConstraintKind::Bound);
  }
  return rs;
}

Vec3Q RealizedPattern::joint_at(int vertex) const {
  auto [e1, e2] = pattern.joined_edges(vertex);
  const auto& l1 = edges[static_cast<std::size_t>(e1)].line;
  const auto& l2 = edges[static_cast<std::size_t>(e2)].line;
  Axis u1 = l1.axis, u2 = l2.axis, u3 = third_axis(u1, u2);
  Vec3Q q;
  q[u1] = l2.coordinate(u1);
  q[u2] = l1.coordinate(u2);
  q[u3] = l1.coordinate(u3);
  return q;
}

RealizedPattern realize_from_offsets(const EdgePattern& pattern, const BoxSpec& box, const Rational& margin,
                                     const std::array<std::array<Rational, 2>, kEdgeCount>& offsets) {
  RealizedPattern rp;
  rp.pattern = pattern;
  rp.box = box;
  rp.margin = margin;
  auto dec = decompose(pattern);
  for (int e = 0; e < kEdgeCount; ++e) {
    auto& re = rp.edges[static_cast<std::size_t>(e)];
    re.edge = e;
    re.component = dec.component_of_edge[static_cast<std::size_t>(e)];
    re.on_circle = dec.components[static_cast<std::size_t>(re.component)].kind == ComponentKind::Circle;
    re.line.axis = box::edge_axis(e);
    re.line.offset = offsets[static_cast<std::size_t>(e)];
  }
  for (int e = 0; e < kEdgeCount; ++e) {
    auto& line = rp.edges[static_cast<std::size_t>(e)].line;
    for (int end = 0; end < 2; ++end) {
      std::optional<Rational> bound;
      if (!pattern.is_free_at(e, end)) {
        int partner = other_joined(pattern, box::edge_endpoint(e, end), e);
        bound = rp.edges[static_cast<std::size_t>(partner)].line.coordinate(line.axis);
      }
      (end == 0 ? line.extent.lower : line.extent.upper) = bound;
    }
  }
  for (const auto& comp : dec.components) {
    RealizedComponent rc;
    rc.kind = comp.kind;
    rc.edges = comp.edges;
    rc.end_vertices = comp.end_vertices;
    for (int v : comp.joints) rc.joints.push_back({v, rp.joint_at(v)});
    rp.components.push_back(std::move(rc));
  }
  return rp;
}

namespace {

// Intersection of two realized axis-parallel pieces, if any. Parallel
// overlapping pieces report their lowest common point.
std::optional<Vec3Q> intersection(const AxisLine& a, const AxisLine& b) {
  if (a.axis == b.axis) {
    if (a.offset != b.offset) return std::nullopt;
    std::optional<Rational> lo = a.extent.lower, hi = a.extent.upper;
    if (b.extent.lower && (!lo || *b.extent.lower > *lo)) lo = b.extent.lower;
    if (b.extent.upper && (!hi || *b.extent.upper < *hi)) hi = b.extent.upper;
    if (lo && hi && *lo > *hi) return std::nullopt;
    return a.point_at(lo ? *lo : hi ? *hi : Rational(0));
  }
  Axis u1 = a.axis, u2 = b.axis, u3 = third_axis(u1, u2);
  if (a.coordinate(u3) != b.coordinate(u3)) return std::nullopt;
  if (!a.extent.contains(b.coordinate(u1)) || !b.extent.contains(a.coordinate(u2))) return std::nullopt;
  Vec3Q p;
  p[u1] = b.coordinate(u1);
  p[u2] = a.coordinate(u2);
  p[u3] = a.coordinate(u3);
  return p;
}

std::string format_point(const Vec3Q& p) {
  return "(" + format_rational(p.x) + ", " + format_rational(p.y) + ", " + format_rational(p.z) + ")";
}

}  // namespace

std::vector<std::string> verify_realization(const RealizedPattern& rp) {
  std::vector<std::string> violations;
  const auto& pattern = rp.pattern;
  auto line = [&](int e) -> const AxisLine& { return rp.edges[static_cast<std::size_t>(e)].line; };
  auto base = [&](int e, Axis a) { return base_coordinate(rp.box, e, a); };

  auto validity = validate(pattern);
  if (!validity.valid) violations.push_back("pattern invalid: " + validity.reason);
  if (rp.margin <= 0) violations.push_back("margin must be positive");

  const Rational bound = rp.box.min_dim() / 4;
  for (int e = 0; e < kEdgeCount; ++e) {
    const auto& re = rp.edges[static_cast<std::size_t>(e)];
    if (re.line.axis != box::edge_axis(e)) violations.push_back("edge " + edge_name(e) + " has the wrong axis");
    for (Axis a : transverse_axes(re.line.axis)) {
      Rational d = re.line.coordinate(a) - base(e, a);
      if (re.on_circle && d != 0) violations.push_back("circle edge displaced: " + coord_name(e, a));
      if (d > bound || d < -bound) violations.push_back("bound: " + coord_name(e, a) + " displaced beyond min_dim/4");
    }
    const auto& ext = re.line.extent;
    for (int end = 0; end < 2; ++end) {
      bool free = pattern.is_free_at(e, end);
      bool finite = end == 0 ? ext.lower.has_value() : ext.upper.has_value();
      if (free == finite) violations.push_back("extent of " + edge_name(e) + " does not match the pattern at end " + std::to_string(end));
    }
    if (ext.is_segment()) {
      if (*ext.upper - *ext.lower < rp.margin) violations.push_back("length: " + edge_name(e) + " shorter than margin");
    }
  }

  for (int v = 0; v < kVertexCount; ++v) {
    auto [e1, e2] = pattern.joined_edges(v);
    Axis u1 = box::edge_axis(e1), u2 = box::edge_axis(e2), u3 = third_axis(u1, u2);
    if (line(e1).coordinate(u3) != line(e2).coordinate(u3)) {
      violations.push_back("joint v" + std::to_string(v) + ": " + coord_name(e1, u3) + " != " + coord_name(e2, u3));
    }
    Vec3Q q = rp.joint_at(v);
    int f = pattern.free_edge(v);
    for (auto [u, s] : {std::pair{u1, box::vertex_bit(v, u1) ? -1 : 1}, std::pair{u2, box::vertex_bit(v, u2) ? -1 : 1}}) {
      if (Rational(s) * (line(f).coordinate(u) - q[u]) < rp.margin) {
        violations.push_back("corner v" + std::to_string(v) + ": free " + edge_name(f) + " not inside the right angle along " + axis_name(u));
      }
    }
    if (Rational(box::vertex_bit(v, u1) ? -1 : 1) * (line(f).coordinate(u1) - q[u1]) !=
        Rational(box::vertex_bit(v, u2) ? -1 : 1) * (line(f).coordinate(u2) - q[u2])) {
      violations.push_back("diagonal v" + std::to_string(v) + ": free " + edge_name(f) + " is not equidistant from the joined edges");
    }
    for (int e : {e1, e2}) {
      int end = box::edge_endpoint(e, 0) == v ? 0 : 1;
      const auto& ext = line(e).extent;
      const auto& b = end == 0 ? ext.lower : ext.upper;
      if (b && *b != q[line(e).axis]) violations.push_back("extent of " + edge_name(e) + " does not end at joint v" + std::to_string(v));
    }
  }

  for (int a = 0; a < kEdgeCount; ++a) {
    for (int b = a + 1; b < kEdgeCount; ++b) {
      auto p = intersection(line(a), line(b));
      int joint_vertex = -1;
      for (int end = 0; end < 2; ++end) {
        int v = box::edge_endpoint(a, end);
        auto j = pattern.joined_edges(v);
        if ((j[0] == a && j[1] == b) || (j[0] == b && j[1] == a)) joint_vertex = v;
      }
      if (joint_vertex >= 0) {
        if (!p || *p != rp.joint_at(joint_vertex)) {
          violations.push_back("joined edges " + edge_name(a) + ", " + edge_name(b) + " do not meet at their joint");
        }
      } else if (p) {
        violations.push_back("embedding: " + edge_name(a) + " and " + edge_name(b) + " meet at " + format_point(*p));
      }
    }
  }
  return violations;
}

RealizationResult solve_realization(const EdgePattern& pattern, const BoxSpec& box, const Rational& margin) {
  auto rs = build_constraints(pattern, box, margin);
  RealizationResult result;
  // The corner condition fixes every sign once the joined edges' directions
  // are known, so there is exactly one system to decide.
  result.sign_branches = 1;
  auto fm = solve_fourier_motzkin(rs.system);
  if (!fm.feasible) {
    InfeasibilityCertificate cert;
    cert.indices = fm.certificate;
    for (int idx : fm.certificate) cert.constraints.push_back(rs.system.constraints[static_cast<std::size_t>(idx)].label);
    result.certificate = std::move(cert);
    return result;
  }
  std::array<std::array<Rational, 2>, kEdgeCount> offsets;
  for (int e = 0; e < kEdgeCount; ++e) {
    auto t = transverse_axes(box::edge_axis(e));
    for (int k = 0; k < 2; ++k) {
      Rational value = base_coordinate(box, e, t[static_cast<std::size_t>(k)]);
      int var = rs.variables[static_cast<std::size_t>(e)][static_cast<std::size_t>(k)];
      if (var >= 0) value += fm.witness[static_cast<std::size_t>(var)];
      offsets[static_cast<std::size_t>(e)][static_cast<std::size_t>(k)] = value;
    }
  }
  auto realized = realize_from_offsets(pattern, box, margin, offsets);
  auto problems = verify_realization(realized);
  if (!problems.empty()) {
    throw std::logic_error("solver witness failed verification: " + problems.front());
  }
  result.feasible = true;
  result.realized = std::move(realized);
  return result;
}

bool point_in_sector_interior(const SectorSpec& s, const Vec3Q& p) {
  if (!s.longitudinal.contains_interior(p[s.axis])) return false;
  auto t = transverse_axes(s.axis);
  for (std::size_t k = 0; k < 2; ++k) {
    if (Rational(s.quadrant[k]) * (p[t[k]] - s.apex[k]) <= 0) return false;
  }
  return true;
}

namespace {

// Open interval (lo, hi) of a sector along an axis.
std::pair<std::optional<Rational>, std::optional<Rational>> sector_interval(const SectorSpec& s, Axis a) {
  if (a == s.axis) return {s.longitudinal.lower, s.longitudinal.upper};
  auto t = transverse_axes(s.axis);
  std::size_t k = a == t[0] ? 0 : 1;
  if (s.quadrant[k] > 0) return {s.apex[k], std::nullopt};
  return {std::nullopt, s.apex[k]};
}

}  // namespace

bool sector_interiors_intersect(const SectorSpec& a, const SectorSpec& b) {
  for (Axis axis : kAxes) {
    auto [alo, ahi] = sector_interval(a, axis);
    auto [blo, bhi] = sector_interval(b, axis);
    std::optional<Rational> lo = alo, hi = ahi;
    if (blo && (!lo || *blo > *lo)) lo = blo;
    if (bhi && (!hi || *bhi < *hi)) hi = bhi;
    if (lo && hi && !(*lo < *hi)) return false;
  }
  return true;
}

SectorReport compute_sectors(const RealizedPattern& rp) {
  SectorReport report;
  for (int e = 0; e < kEdgeCount; ++e) {
    const auto& line = rp.edges[static_cast<std::size_t>(e)].line;
    SectorSpec s;
    s.edge = e;
    s.axis = line.axis;
    auto t = transverse_axes(line.axis);
    for (std::size_t k = 0; k < 2; ++k) {
      // The box lies on the side of its own face; the sector is opposite.
      s.quadrant[k] = box::edge_transverse_bit(e, t[k]) ? 1 : -1;
      s.apex[k] = line.offset[k];
    }
    s.longitudinal = line.extent;
    report.sectors.push_back(std::move(s));
  }
  report.disjoint_away_from_corners = true;
  for (int a = 0; a < kEdgeCount; ++a) {
    for (int b = a + 1; b < kEdgeCount; ++b) {
      if (!sector_interiors_intersect(report.sectors[static_cast<std::size_t>(a)], report.sectors[static_cast<std::size_t>(b)])) continue;
      report.overlapping_pairs.emplace_back(a, b);
      if (!box::edges_share_vertex(a, b)) report.disjoint_away_from_corners = false;
    }
  }
  report.pairwise_disjoint = report.overlapping_pairs.empty();

  auto covered = [&](const Vec3Q& p) {
    return std::any_of(report.sectors.begin(), report.sectors.end(), [&](const SectorSpec& s) { return point_in_sector_interior(s, p); });
  };
  for (int v = 0; v < kVertexCount; ++v) {
    Vec3Q corner;
    for (Axis a : kAxes) corner[a] = rp.box.face(a, box::vertex_bit(v, a));
    if (!covered(corner)) report.uncovered_corners.push_back(v);
  }
  report.corners_covered = report.uncovered_corners.empty();
  report.joints_covered = true;
  for (const auto& comp : rp.components) {
    for (const auto& j : comp.joints) {
      if (!covered(j.point)) report.joints_covered = false;
    }
  }
  return report;
}

}  // namespace cone_forge
