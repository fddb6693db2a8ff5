#include <doctest.h>

#include <cmath>
#include <fstream>

#include "cone_forge/io.hpp"
#include "cone_forge/realize.hpp"
#include "cone_forge/singular_link.hpp"

using namespace cone_forge;

namespace {

Vec3Q q(long x, long y, long z) { return {Rational(x), Rational(y), Rational(z)}; }

LinkComponent closed_polygon(std::vector<Vec3Q> pts) {
  LinkComponent c;
  c.closed = true;
  c.points = std::move(pts);
  return c;
}

// Gauss linking integral of two closed polygons, evaluated exactly per
// segment pair as a signed solid angle.
double gauss_linking(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  auto unit = [](Vec3 v) { return (1.0 / norm(v)) * v; };
  double total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Vec3 p1 = a[i], p2 = a[(i + 1) % a.size()];
    for (std::size_t j = 0; j < b.size(); ++j) {
      Vec3 p3 = b[j], p4 = b[(j + 1) % b.size()];
      Vec3 r13 = p3 - p1, r14 = p4 - p1, r23 = p3 - p2, r24 = p4 - p2;
      Vec3 n1 = cross(r13, r14), n2 = cross(r14, r24), n3 = cross(r24, r23), n4 = cross(r23, r13);
      if (norm(n1) < 1e-15 || norm(n2) < 1e-15 || norm(n3) < 1e-15 || norm(n4) < 1e-15) continue;
      n1 = unit(n1), n2 = unit(n2), n3 = unit(n3), n4 = unit(n4);
      auto as = [](double x) { return std::asin(std::clamp(x, -1.0, 1.0)); };
      double omega = as(dot(n1, n2)) + as(dot(n2, n3)) + as(dot(n3, n4)) + as(dot(n4, n1));
      double s = dot(cross(p4 - p3, p2 - p1), r13);
      total += (s > 0 ? 1 : -1) * omega;
    }
  }
  return total / (4 * kPi);
}

std::vector<Vec3> as_doubles(const std::vector<Vec3Q>& pts) {
  std::vector<Vec3> out;
  for (const auto& p : pts) out.push_back(to_vec3(p));
  return out;
}

PolylineLink hopf() {
  PolylineLink l;
  l.components.push_back(closed_polygon({q(0, 0, 0), q(2, 0, 0), q(2, 2, 0), q(0, 2, 0)}));
  l.components.push_back(closed_polygon({q(1, 1, -1), q(1, 1, 1), q(3, 1, 1), q(3, 1, -1)}));
  l.clip_radius = 10;
  return l;
}

RealizedPattern realized(std::array<int, 8> free, Rational margin = Rational(1, 8)) {
  auto r = solve_realization(EdgePattern::from_free_edges(free), BoxSpec{}, margin);
  REQUIRE(r.feasible);
  return *r.realized;
}

}  // namespace

TEST_SUITE("singular_link") {
  TEST_CASE("Hopf link against the Gauss integral") {
    auto l = hopf();
    double oracle = gauss_linking(as_doubles(l.components[0].points), as_doubles(l.components[1].points));
    CHECK(std::abs(std::abs(oracle) - 1) < 1e-9);
    for (int attempt = 0; attempt < 5; ++attempt) {
      auto d = project_generic(l, static_cast<std::uint64_t>(attempt)).diagram;
      CHECK(linking_number(d, 0, 1) == static_cast<int>(std::lround(oracle)));
      CHECK(d.linking_matrix[0][1] == d.linking_matrix[1][0]);
      CHECK(d.linking_matrix[0][0] == 0);
    }
  }

  TEST_CASE("mirror image flips the linking number") {
    auto l = hopf();
    auto m = l;
    for (auto& c : m.components)
      for (auto& p : c.points) p.z = -p.z;
    auto d = project_generic(l, 3).diagram, e = project_generic(m, 3).diagram;
    CHECK(linking_number(d, 0, 1) == -linking_number(e, 0, 1));
  }

  TEST_CASE("split links") {
    PolylineLink l;
    l.components.push_back(closed_polygon({q(0, 0, 0), q(1, 0, 0), q(1, 1, 0), q(0, 1, 0)}));
    l.components.push_back(closed_polygon({q(3, 0, 0), q(4, 0, 0), q(4, 1, 0), q(3, 1, 0)}));
    auto d = project(l, q(0, 0, 1));
    CHECK(d.crossings.empty());
    CHECK(d.linking_matrix == std::vector<std::vector<int>>{{0, 0}, {0, 0}});
    auto g = project_generic(l, 11).diagram;
    CHECK(g.linking_matrix == std::vector<std::vector<int>>{{0, 0}, {0, 0}});
  }

  TEST_CASE("circle and a distant line") {
    PolylineLink l;
    l.components.push_back(closed_polygon({q(0, 0, 0), q(2, 0, 0), q(2, 2, 0), q(0, 2, 0)}));
    LinkComponent line;
    line.points = {q(-1, 1, 5), q(3, 1, 5)};
    line.ray_directions = {q(-1, 0, 0), q(1, 0, 0)};
    l.components.push_back(line);
    l.clip_radius = 8;
    auto d = project(l, Vec3Q{Rational(1, 7), Rational(1, 9), Rational(1)});
    int sum = 0;
    for (const auto& c : d.crossings)
      if (c.over.component != c.under.component) sum += c.sign;
    CHECK(d.crossings_between(0, 1) == 2);
    CHECK(sum == 0);
    CHECK_THROWS_AS(linking_number(d, 0, 1), UnsupportedOperation);
  }

  TEST_CASE("vertical line through a circle, closed off far away") {
    PolylineLink l;
    l.components.push_back(closed_polygon({q(-1, -1, 0), q(1, -1, 0), q(1, 1, 0), q(-1, 1, 0)}));
    LinkComponent line;
    line.points = {q(0, 0, -2), q(0, 0, 2)};
    line.ray_directions = {q(0, 0, -1), q(0, 0, 1)};
    l.components.push_back(line);
    l.clip_radius = 4;
    auto closed = close_open_components(l);
    REQUIRE(closed.components[1].closed);
    CHECK(closed.components[1].closure);
    // The closure stays far from the circle, so the winding number of the
    // circle about the closed curve is the Gauss integral.
    double oracle = gauss_linking(as_doubles(closed.components[0].points), as_doubles(closed.components[1].points));
    CHECK(std::abs(std::abs(oracle) - 1) < 1e-6);
    auto d = project_generic(closed, 5).diagram;
    CHECK(linking_number(d, 0, 1) == static_cast<int>(std::lround(oracle)));
  }

  TEST_CASE("non-generic projections are reported") {
    PolylineLink l;
    l.components.push_back(closed_polygon({q(0, 0, 0), q(1, 0, 0), q(1, 0, 1), q(0, 0, 1)}));
    CHECK_THROWS_AS(project(l, q(1, 0, 1)), NonGeneric);  // the square seen edge-on
    CHECK_THROWS_AS(project(l, q(1, 0, 0)), NonGeneric);  // two segments seen end-on
    CHECK_THROWS_AS(project(l, q(0, 0, 0)), std::invalid_argument);
    auto other = l;
    other.components.push_back(closed_polygon({q(0, 0, 0), q(0, 1, 0), q(0, 1, 1)}));
    CHECK_THROWS_AS(project(other, Vec3Q{Rational(1, 3), Rational(1, 5), Rational(1)}), NonGeneric);  // shared vertex
  }

  TEST_CASE("projection directions are deterministic and nonzero") {
    for (std::uint64_t seed : {0u, 1u, 42u}) {
      for (int a = 0; a < 10; ++a) {
        auto d = projection_direction(seed, a);
        CHECK(d == projection_direction(seed, a));
        CHECK(d.x != 0);
        CHECK(d.y != 0);
        CHECK(d.z != 0);
      }
    }
  }

  TEST_CASE("two-circle pattern link") {
    auto rp = realized({0, 0, 1, 1, 2, 2, 3, 3});
    CHECK_THROWS_AS(extract_link(rp, Rational(1)), std::invalid_argument);
    auto l = extract_link(rp, Rational(4));
    int closed = 0, open = 0;
    for (const auto& c : l.components) {
      if (c.closed) {
        ++closed;
        CHECK(c.points.size() == 4);
      } else {
        ++open;
        CHECK(c.points.size() == 2);
        CHECK(c.edges.size() == 1);
      }
    }
    CHECK(closed == 2);
    CHECK(open == 4);
    auto d = project_generic(l, 1).diagram;
    CHECK(diagram_svg(d).rfind("<svg", 0) == 0);
  }

  TEST_CASE("two-circle arcs closed off far away link each circle once") {
    auto closed = close_open_components(extract_link(realized({0, 0, 1, 1, 2, 2, 3, 3}), Rational(4)));
    auto d = project_generic(closed, 2).diagram;
    REQUIRE(d.closed_components.size() == 6);
    for (std::size_t a = 0; a < closed.components.size(); ++a) {
      if (closed.components[a].closure) continue;
      for (std::size_t b = 0; b < closed.components.size(); ++b) {
        if (!closed.components[b].closure) continue;
        double oracle = gauss_linking(as_doubles(closed.components[a].points), as_doubles(closed.components[b].points));
        CHECK(std::abs(std::abs(oracle) - 1) < 1e-9);
        CHECK(linking_number(d, static_cast<int>(a), static_cast<int>(b)) == static_cast<int>(std::lround(oracle)));
      }
    }
  }

  TEST_CASE("figure links match the recorded goldens") {
    const std::string dir = CONE_FORGE_GOLDENS;
    std::ifstream in(dir + "/links.json");
    auto doc = io::Json::parse(in);
    const BoxSpec box = io::box_from(doc["box"]);
    const Rational margin = io::rational_from(doc["margin"]), clip = io::rational_from(doc["clip_radius"]);
    for (const auto& g : doc["links"]) {
      std::ifstream pin(dir + "/" + g["pattern"].get<std::string>() + ".json");
      auto r = solve_realization(io::pattern_from(io::Json::parse(pin)), box, margin);
      REQUIRE(r.feasible);
      auto link = extract_link(*r.realized, clip);
      int closed = 0;
      for (const auto& c : link.components) closed += c.closed;
      CHECK(closed == g["closed_components"].get<int>());
      CHECK(static_cast<int>(link.components.size()) - closed == g["open_components"].get<int>());
      auto all = close_open_components(link);
      auto expected = g["closed_off_linking_matrix"].get<std::vector<std::vector<int>>>();
      for (std::uint64_t seed = 1; seed <= 3; ++seed) CHECK(project_generic(all, seed).diagram.linking_matrix == expected);
      for (std::size_t a = 0; a < all.components.size(); ++a)
        for (std::size_t b = a + 1; b < all.components.size(); ++b) {
          double oracle = gauss_linking(as_doubles(all.components[a].points), as_doubles(all.components[b].points));
          CHECK(std::abs(oracle - expected[a][b]) < 1e-6);
        }
    }
  }

  TEST_CASE("links of every realizable orbit") {
    for (const auto& p : enumerate_patterns(true)) {
      auto r = solve_realization(p, BoxSpec{}, Rational(1, 64));
      if (!r.feasible) continue;
      auto l = extract_link(*r.realized, Rational(4));
      CHECK(l.components.size() == validate(p).circle_count + 4);
      std::vector<std::vector<int>> first;
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto d = project_generic(l, seed).diagram;
        // Gauss code length: two entries per self crossing, one per mixed.
        for (std::size_t c = 0; c < d.gauss_codes.size(); ++c) {
          std::size_t mixed = 0;
          for (std::size_t o = 0; o < d.gauss_codes.size(); ++o)
            if (o != c) mixed += d.crossings_between(static_cast<int>(c), static_cast<int>(o));
          CHECK(d.gauss_codes[c].size() == 2 * d.crossings_between(static_cast<int>(c), static_cast<int>(c)) + mixed);
        }
        if (seed == 1) first = d.linking_matrix;
        CHECK(d.linking_matrix == first);
      }
      // Closed-circle linking agrees with the Gauss integral.
      std::vector<std::size_t> circles;
      for (std::size_t c = 0; c < l.components.size(); ++c)
        if (l.components[c].closed) circles.push_back(c);
      if (circles.size() == 2) {
        double oracle = gauss_linking(as_doubles(l.components[circles[0]].points), as_doubles(l.components[circles[1]].points));
        CHECK(first[0][1] == static_cast<int>(std::lround(oracle)));
      }
    }
  }

  TEST_CASE("gauss code strings") {
    std::vector<GaussEntry> code{{0, true, 1}, {1, false, -1}};
    CHECK(gauss_code_string(code) == "O1+ U2-");
    CHECK(gauss_code_string({}).empty());
  }
}
