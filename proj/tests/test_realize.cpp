#include <doctest.h>

#include "cone_forge/far_section.hpp"
#include "cone_forge/linear_system.hpp"
#include "cone_forge/realize.hpp"

using namespace cone_forge;

namespace {

EdgePattern pat(std::array<int, 8> e) { return EdgePattern::from_free_edges(e); }

const std::vector<EdgePattern>& figure_patterns() {
  static const std::vector<EdgePattern> p = {pat({0, 0, 1, 1, 2, 2, 3, 3}), pat({0, 0, 1, 1, 6, 7, 6, 7}),
                                             pat({0, 0, 4, 5, 8, 9, 3, 3}), pat({0, 0, 4, 11, 8, 7, 3, 3})};
  return p;
}

Vec3Q axis_vector_of(Axis a) {
  Vec3Q v;
  v[a] = 1;
  return v;
}

const EdgePattern kPinwheel = pat({0, 5, 1, 11, 2, 9, 3, 7});

// Substitutes a full offset table into every constraint of the system.
bool offsets_satisfy(const RealizabilitySystem& rs, const BoxSpec& box, const std::array<std::array<Rational, 2>, kEdgeCount>& off) {
  std::vector<Rational> x(rs.system.variable_names.size());
  for (int e = 0; e < kEdgeCount; ++e) {
    auto t = transverse_axes(box::edge_axis(e));
    for (int k = 0; k < 2; ++k) {
      int var = rs.variables[static_cast<std::size_t>(e)][static_cast<std::size_t>(k)];
      Rational base = box.face(t[static_cast<std::size_t>(k)], box::edge_transverse_bit(e, t[static_cast<std::size_t>(k)]));
      if (var >= 0) x[static_cast<std::size_t>(var)] = off[static_cast<std::size_t>(e)][static_cast<std::size_t>(k)] - base;
    }
  }
  for (const auto& c : rs.system.constraints)
    if (!c.satisfied_by(x)) return false;
  return true;
}

}  // namespace

TEST_SUITE("linear_system") {
  TEST_CASE("feasible system yields a substitutable witness") {
    LinearSystem s;
    int x = s.add_variable("x"), y = s.add_variable("y");
    s.add({{{x, Rational(1)}, {y, Rational(1)}}, Relation::GreaterEqual, Rational(1), "x+y>=1"});
    s.add({{{x, Rational(1)}, {y, Rational(-1)}}, Relation::Equal, Rational(1, 3), "x-y=1/3"});
    s.add({{{x, Rational(-1)}}, Relation::GreaterEqual, Rational(-5), "x<=5"});
    auto r = solve_fourier_motzkin(s);
    REQUIRE(r.feasible);
    for (const auto& c : s.constraints) CHECK(c.satisfied_by(r.witness));
  }

  TEST_CASE("infeasible system yields a contradictory subset") {
    LinearSystem s;
    int x = s.add_variable("x"), y = s.add_variable("y");
    s.add({{{x, Rational(1)}}, Relation::GreaterEqual, Rational(0), "x>=0"});
    s.add({{{y, Rational(1)}, {x, Rational(-1)}}, Relation::GreaterEqual, Rational(1), "y>=x+1"});
    s.add({{{y, Rational(-1)}}, Relation::GreaterEqual, Rational(-1, 2), "y<=1/2"});
    s.add({{{x, Rational(-1)}}, Relation::GreaterEqual, Rational(-10), "x<=10"});
    auto r = solve_fourier_motzkin(s);
    REQUIRE_FALSE(r.feasible);
    std::set<int> cert(r.certificate.begin(), r.certificate.end());
    CHECK(cert == std::set<int>{0, 1, 2});
  }

  TEST_CASE("empty and trivially contradictory systems") {
    LinearSystem s;
    CHECK(solve_fourier_motzkin(s).feasible);
    s.add({{}, Relation::GreaterEqual, Rational(1), "0>=1"});
    CHECK_FALSE(solve_fourier_motzkin(s).feasible);
  }
}

TEST_SUITE("realize") {
  TEST_CASE("constraint counts for the two-circle pattern") {
    BoxSpec box;
    auto p = figure_patterns()[0];
    auto rs = build_constraints(p, box, Rational(1, 8));
    // Counting oracle from the decomposition: only the four interval edges move.
    auto dec = decompose(p);
    std::size_t moving = 0;
    for (const auto& c : dec.components)
      if (c.kind == ComponentKind::Interval) moving += c.edges.size();
    CHECK(moving == 4);
    CHECK(rs.system.variable_names.size() == 2 * moving);
    CHECK(rs.count(ConstraintKind::Joint) == 0);
    CHECK(rs.count(ConstraintKind::Length) == 0);
    CHECK(rs.count(ConstraintKind::Corner) == 2 * kVertexCount);
    CHECK(rs.count(ConstraintKind::Diagonal) == kVertexCount);
  }

  TEST_CASE("constraint counts match the decomposition on every orbit") {
    BoxSpec box;
    for (const auto& p : enumerate_patterns(true)) {
      auto rs = build_constraints(p, box, Rational(1, 8));
      auto dec = decompose(p);
      std::size_t moving = 0, joints = 0, lengths = 0;
      for (const auto& c : dec.components) {
        if (c.kind != ComponentKind::Interval) continue;
        moving += c.edges.size();
        joints += c.joints.size();
        lengths += c.edges.size() >= 2 ? c.edges.size() - 2 : 0;
      }
      CHECK(rs.system.variable_names.size() == 2 * moving);
      CHECK(rs.count(ConstraintKind::Joint) == joints);
      CHECK(rs.count(ConstraintKind::Length) == lengths);
      CHECK(rs.count(ConstraintKind::Bound) == 4 * moving);
    }
  }

  TEST_CASE("explicit witness for the two-circle pattern") {
    BoxSpec box;
    auto p = figure_patterns()[0];
    Rational m(1, 8);
    // Every interval edge moves by 1/8 into the quadrant of the circle edges
    // at its ends; circle edges stay on the box.
    std::array<std::array<Rational, 2>, kEdgeCount> off;
    for (int e = 0; e < kEdgeCount; ++e) {
      auto t = transverse_axes(box::edge_axis(e));
      bool interval = p.is_free_at(e, 0);
      for (int k = 0; k < 2; ++k) {
        int bit = box::edge_transverse_bit(e, t[static_cast<std::size_t>(k)]);
        off[static_cast<std::size_t>(e)][static_cast<std::size_t>(k)] = Rational(bit) + (interval ? (bit ? -m : m) : Rational(0));
      }
    }
    auto rs = build_constraints(p, box, m);
    CHECK(offsets_satisfy(rs, box, off));
    auto rp = realize_from_offsets(p, box, m, off);
    CHECK(verify_realization(rp).empty());
    // Joints of circles sit at the box vertices.
    for (const auto& c : rp.components)
      for (const auto& j : c.joints)
        CHECK(j.point == Vec3Q{Rational(box::vertex_bit(j.vertex, Axis::X)), Rational(box::vertex_bit(j.vertex, Axis::Y)),
                               Rational(box::vertex_bit(j.vertex, Axis::Z))});
    // Flipping one sign breaks the corner condition.
    auto bad = off;
    bad[0][0] = -bad[0][0];
    CHECK_FALSE(offsets_satisfy(rs, box, bad));
    auto v = verify_realization(realize_from_offsets(p, box, m, bad));
    REQUIRE_FALSE(v.empty());
    CHECK(v.front().rfind("corner", 0) == 0);

    auto solved = solve_realization(p, box, m);
    REQUIRE(solved.feasible);
    CHECK(solved.sign_branches == 1);
    for (const auto& e : solved.realized->edges)
      for (int k = 0; k < 2; ++k)
        CHECK(e.line.offset[static_cast<std::size_t>(k)] == off[static_cast<std::size_t>(e.edge)][static_cast<std::size_t>(k)]);
  }

  TEST_CASE("figure patterns realize, the pinwheel does not") {
    BoxSpec box;
    for (const auto& p : figure_patterns()) {
      auto r = solve_realization(p, box, Rational(1, 8));
      REQUIRE(r.feasible);
      CHECK(verify_realization(*r.realized).empty());
      CHECK_FALSE(r.certificate);
    }
    for (Rational m : {Rational(1, 8), Rational(1, 64), Rational(1, 1000)}) {
      auto r = solve_realization(kPinwheel, box, m);
      CHECK_FALSE(r.feasible);
      REQUIRE(r.certificate);
      // The certificate alone is already contradictory.
      auto rs = build_constraints(kPinwheel, box, m);
      LinearSystem sub;
      sub.variable_names = rs.system.variable_names;
      for (int idx : r.certificate->indices) sub.add(rs.system.constraints[static_cast<std::size_t>(idx)]);
      CHECK_FALSE(solve_fourier_motzkin(sub).feasible);
      CHECK(r.certificate->constraints.size() == r.certificate->indices.size());
    }
  }

  TEST_CASE("bad inputs are rejected") {
    BoxSpec box;
    auto p = figure_patterns()[0];
    CHECK_THROWS_AS(build_constraints(p, box, Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(solve_realization(p, box, Rational(-1, 8)), std::invalid_argument);
    BoxSpec flat;
    flat.dims[2] = 0;
    CHECK_THROWS_AS(solve_realization(p, flat, Rational(1, 8)), std::invalid_argument);
    int invalid = 0;
    while (validate(EdgePattern::from_index(invalid)).valid) ++invalid;
    CHECK_THROWS_AS(solve_realization(EdgePattern::from_index(invalid), box, Rational(1, 8)), std::invalid_argument);
  }

  TEST_CASE("feasibility is monotone in the margin") {
    BoxSpec box;
    for (const auto& p : enumerate_patterns(true)) {
      bool coarse = solve_realization(p, box, Rational(1, 8)).feasible;
      bool fine = solve_realization(p, box, Rational(1, 16)).feasible;
      if (coarse) CHECK(fine);
    }
  }

  TEST_CASE("non-cubical boxes") {
    BoxSpec box;
    box.dims = {Rational(2), Rational(3), Rational(5, 2)};
    for (const auto& p : figure_patterns()) {
      auto r = solve_realization(p, box, box.default_margin());
      REQUIRE(r.feasible);
      CHECK(verify_realization(*r.realized).empty());
    }
  }

  TEST_CASE("sectors of the two-circle pattern") {
    auto r = solve_realization(figure_patterns()[0], BoxSpec{}, Rational(1, 8));
    REQUIRE(r.feasible);
    auto s = compute_sectors(*r.realized);
    CHECK(s.sectors.size() == 12);
    CHECK(s.corners_covered);
    CHECK(s.joints_covered);
    CHECK(s.uncovered_corners.empty());
    // Overlaps only occur between sectors of edges meeting at a box vertex.
    CHECK(s.disjoint_away_from_corners);
    for (auto [a, b] : s.overlapping_pairs) CHECK(box::edges_share_vertex(a, b));
    // Edges 0 and 1 lie in the face z = 0 on opposite sides.
    CHECK_FALSE(sector_interiors_intersect(s.sectors[0], s.sectors[1]));
    CHECK_FALSE(sector_interiors_intersect(s.sectors[0], s.sectors[3]));
  }

  TEST_CASE("joints lie inside the sector of the free edge") {
    for (const auto& p : figure_patterns()) {
      auto r = solve_realization(p, BoxSpec{}, Rational(1, 8));
      REQUIRE(r.feasible);
      auto s = compute_sectors(*r.realized);
      CHECK(s.joints_covered);
      for (int v = 0; v < kVertexCount; ++v) {
        auto [e1, e2] = p.joined_edges(v);
        if (r.realized->edges[static_cast<std::size_t>(e1)].on_circle) continue;
        (void)e2;
        const auto& sec = s.sectors[static_cast<std::size_t>(p.free_edge(v))];
        CHECK(point_in_sector_interior(sec, r.realized->joint_at(v)));
      }
    }
  }
}

TEST_SUITE("far_section") {
  TEST_CASE("far cross-section of every realizable orbit") {
    int realized = 0;
    for (const auto& p : enumerate_patterns(true)) {
      auto r = solve_realization(p, BoxSpec{}, Rational(1, 64));
      if (!r.feasible) continue;
      ++realized;
      auto fs = build_far_section(*r.realized);
      CHECK(fs.rays.size() == 8);
      for (const auto& ray : fs.rays) CHECK(ray.cone_quarters == 3);
      CHECK(fs.is_flat_away_from_rays());
      auto splits = end_splits(fs);
      REQUIRE_FALSE(splits.empty());
      CHECK(splits.front().groups[0].size() == 4);
      CHECK(splits.front().groups[1].size() == 4);
      auto ends = disc_ends(fs);
      for (const auto& end : ends) {
        CHECK(end.rays.size() == 4);
        for (const auto& dr : end.rays) CHECK(dr.direction == end.direction);
      }
    }
    CHECK(realized == 17);
  }

  TEST_CASE("axis isometries") {
    auto q = AxisIsometry::quarter_turn(Axis::Z, Vec3Q{Rational(1), Rational(0), Rational(0)}, Vec3Q{Rational(1), Rational(0), Rational(0)},
                                        Vec3Q{Rational(0), Rational(1), Rational(0)});
    Vec3Q p{Rational(2), Rational(0), Rational(5)};
    CHECK(q.apply(p) == Vec3Q{Rational(1), Rational(1), Rational(5)});
    CHECK(q.inverse().apply(q.apply(p)) == p);
    CHECK(compose(q, q.inverse()) == AxisIsometry::identity());
    for (int plane = 0; plane < 6; ++plane) {
      auto d = FarDirection::from_plane(plane);
      auto ax = far_plane_axes(plane);
      auto c = cross(axis_vector_of(ax[0]), axis_vector_of(ax[1]));
      CHECK(c == d.vector());
    }
  }
}
