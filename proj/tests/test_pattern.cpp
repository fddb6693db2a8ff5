#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "cone_forge/pattern.hpp"

using namespace cone_forge;

namespace {

// Brute-force oracle built from the geometry alone: edges are pairs of box
// vertices differing in one coordinate, joins are the two non-free edges at
// each vertex, and components come from a union-find over the joins.
struct OracleEdge {
  int a, b, axis;
};

std::vector<OracleEdge> oracle_edges() {
  std::vector<OracleEdge> out;
  for (int v = 0; v < 8; ++v)
    for (int axis = 0; axis < 3; ++axis)
      if (!((v >> axis) & 1)) out.push_back({v, v | (1 << axis), axis});
  return out;
}

struct OracleResult {
  int circles = 0, intervals = 0;
  std::vector<int> circle_lengths, interval_lengths;
};

OracleResult oracle(const std::array<int, 8>& free_axis) {
  auto edges = oracle_edges();
  std::vector<int> parent(edges.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::vector<int> joined_ends(edges.size(), 0);
  for (int v = 0; v < 8; ++v) {
    std::vector<int> at;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if ((edges[e].a == v || edges[e].b == v) && edges[e].axis != free_axis[v]) at.push_back(static_cast<int>(e));
    parent[find(at[0])] = find(at[1]);
    ++joined_ends[at[0]];
    ++joined_ends[at[1]];
  }
  std::map<int, std::pair<int, bool>> comps;  // root -> (size, closed)
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto& c = comps.try_emplace(find(static_cast<int>(e)), 0, true).first->second;
    ++c.first;
    if (joined_ends[e] < 2) c.second = false;
  }
  OracleResult r;
  for (auto& [root, c] : comps) {
    (c.second ? r.circle_lengths : r.interval_lengths).push_back(c.first);
  }
  std::sort(r.circle_lengths.begin(), r.circle_lengths.end());
  std::sort(r.interval_lengths.begin(), r.interval_lengths.end());
  r.circles = static_cast<int>(r.circle_lengths.size());
  r.intervals = static_cast<int>(r.interval_lengths.size());
  return r;
}

std::array<int, 8> digits_of(int index) {
  std::array<int, 8> d{};
  for (int v = 7; v >= 0; --v) {
    d[v] = index % 3;
    index /= 3;
  }
  return d;
}

// Orbits of valid assignments under the 48 box symmetries, acting on the
// free-axis assignment directly.
int oracle_orbits(const std::vector<int>& valid) {
  std::set<int> valid_set(valid.begin(), valid.end()), seen;
  std::array<int, 3> perm{0, 1, 2};
  std::vector<std::pair<std::array<int, 3>, int>> group;
  do {
    for (int flips = 0; flips < 8; ++flips) group.push_back({perm, flips});
  } while (std::next_permutation(perm.begin(), perm.end()));
  int orbits = 0;
  for (int idx : valid) {
    if (seen.count(idx)) continue;
    ++orbits;
    auto d = digits_of(idx);
    for (auto& [p, flips] : group) {
      std::array<int, 8> img{};
      for (int v = 0; v < 8; ++v) {
        int w = 0;
        for (int a = 0; a < 3; ++a) w |= (((v >> a) & 1) ^ ((flips >> a) & 1)) << p[a];
        img[w] = p[d[v]];
      }
      int j = 0;
      for (int v = 0; v < 8; ++v) j = 3 * j + img[v];
      CHECK(valid_set.count(j) == 1);
      seen.insert(j);
    }
  }
  return orbits;
}

// Regression constants frozen from the oracle above.
constexpr std::size_t kValidAssignments = 633;
constexpr std::size_t kOrbitCount = 22;

EdgePattern two_circles() { return EdgePattern::from_free_edges({0, 0, 1, 1, 2, 2, 3, 3}); }

}  // namespace

TEST_SUITE("pattern") {
  TEST_CASE("numbering") {
    CHECK(box::vertex_from_bits(1, 0, 1) == 5);
    CHECK(box::edge_at(0, Axis::X) == 0);
    CHECK(box::edge_at(6, Axis::X) == 3);
    CHECK(box::edge_at(5, Axis::Y) == 7);
    CHECK(box::edge_at(3, Axis::Z) == 11);
    for (int e = 0; e < kEdgeCount; ++e) {
      int lo = box::edge_endpoint(e, 0), hi = box::edge_endpoint(e, 1);
      CHECK((lo ^ hi) == (1 << index(box::edge_axis(e))));
      CHECK(box::edge_at(lo, box::edge_axis(e)) == e);
    }
    CHECK_THROWS_AS(EdgePattern::from_free_edges({5, 0, 1, 1, 2, 2, 3, 3}), std::invalid_argument);
    for (int i : {0, 1, 100, 6560}) CHECK(EdgePattern::from_index(i).index() == i);
  }

  TEST_CASE("every assignment against the brute-force oracle") {
    auto start = std::chrono::steady_clock::now();
    std::vector<int> valid;
    for (int i = 0; i < kAssignmentCount; ++i) {
      auto d = digits_of(i);
      auto o = oracle(d);
      auto p = EdgePattern::from_index(i);
      for (int v = 0; v < 8; ++v) REQUIRE(index(p.free_axis(v)) == d[v]);
      auto r = validate(p);
      CHECK(r.interval_count == 4);
      CHECK(static_cast<int>(r.circle_count) == o.circles);
      CHECK(std::vector<int>(r.circle_lengths.begin(), r.circle_lengths.end()) == o.circle_lengths);
      CHECK(std::vector<int>(r.interval_lengths.begin(), r.interval_lengths.end()) == o.interval_lengths);
      bool ok = o.intervals == 4 && (o.circles == 1 || o.circles == 2);
      CHECK(r.valid == ok);
      if (ok) {
        valid.push_back(i);
        for (int len : o.circle_lengths) CHECK((len == 4 || len == 6 || len == 8));
        if (o.circles == 2) CHECK(o.interval_lengths == std::vector<int>{1, 1, 1, 1});
      } else {
        CHECK_FALSE(r.reason.empty());
      }
    }
    CHECK(valid.size() == kValidAssignments);
    CHECK(enumerate_patterns(false).size() == kValidAssignments);
    int orbits = oracle_orbits(valid);
    CHECK(orbits == static_cast<int>(kOrbitCount));
    auto s = enumeration_summary(4);
    CHECK(s.raw == 6561);
    CHECK(s.valid == kValidAssignments);
    CHECK(s.orbits == kOrbitCount);
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(5));
  }

  TEST_CASE("zero circles is invalid") {
    int zero = -1;
    for (int i = 0; i < kAssignmentCount && zero < 0; ++i)
      if (oracle(digits_of(i)).circles == 0) zero = i;
    REQUIRE(zero >= 0);
    auto r = validate(EdgePattern::from_index(zero));
    CHECK_FALSE(r.valid);
    CHECK(r.reason == "circle count 0");
  }

  TEST_CASE("two-circle decomposition") {
    auto dec = decompose(two_circles());
    CHECK(dec.circle_count() == 2);
    CHECK(dec.interval_count() == 4);
    for (const auto& c : dec.components) {
      if (c.kind == ComponentKind::Circle) {
        CHECK(c.edges.size() == 4);
        CHECK(c.joints.size() == 4);
      } else {
        CHECK(c.edges.size() == 1);
        CHECK(c.joints.empty());
      }
    }
    for (int e = 0; e < kEdgeCount; ++e) {
      const auto& c = dec.components[static_cast<std::size_t>(dec.component_of_edge[static_cast<std::size_t>(e)])];
      CHECK(std::count(c.edges.begin(), c.edges.end(), e) == 1);
    }
  }

  TEST_CASE("eight-edge circle") {
    bool found = false;
    for (const auto& p : enumerate_patterns(false)) {
      auto r = validate(p);
      if (r.circle_lengths == std::vector<std::size_t>{8}) {
        auto dec = decompose(p);
        // Traversal oracle: consecutive circle edges share their joint vertex.
        for (const auto& c : dec.components) {
          if (c.kind != ComponentKind::Circle) continue;
          for (std::size_t i = 0; i < c.edges.size(); ++i) {
            int a = c.edges[i], b = c.edges[(i + 1) % c.edges.size()], v = c.joints[i];
            auto j = p.joined_edges(v);
            CHECK(((j[0] == a && j[1] == b) || (j[0] == b && j[1] == a)));
          }
        }
        CHECK(r.interval_lengths == std::vector<std::size_t>{1, 1, 1, 1});
        found = true;
        break;
      }
    }
    CHECK(found);
  }

  TEST_CASE("decompose round-trips the join table") {
    for (const auto& p : enumerate_patterns(false)) {
      auto dec = decompose(p);
      std::array<int, kVertexCount> joins_seen{};
      for (const auto& c : dec.components)
        for (int v : c.joints) ++joins_seen[static_cast<std::size_t>(v)];
      std::array<int, kVertexCount> free_edges{};
      for (const auto& c : dec.components) {
        if (c.kind != ComponentKind::Interval) continue;
        auto ends = c.end_vertices;
        free_edges[static_cast<std::size_t>(ends[0])] = c.edges.front();
        free_edges[static_cast<std::size_t>(ends[1])] = c.edges.back();
      }
      for (int n : joins_seen) CHECK(n == 1);
      CHECK(EdgePattern::from_free_edges(free_edges) == p);
    }
  }

  TEST_CASE("symmetry group and canonical forms") {
    const auto& g = box_symmetries();
    CHECK(g.size() == 48);
    CHECK(std::count_if(g.begin(), g.end(), [](const BoxSymmetry& s) { return s.preserves_orientation(); }) == 24);
    auto all = enumerate_patterns(false);
    std::set<int> valid;
    for (const auto& p : all) valid.insert(p.index());
    std::map<int, int> orbit_sizes;
    for (const auto& p : all) {
      auto c = canonical_form(p);
      CHECK(canonical_form(c) == c);
      for (const auto& s : g) {
        CHECK(valid.count(s.apply(p).index()) == 1);
        CHECK(canonical_form(s.apply(p)) == c);
      }
      ++orbit_sizes[c.index()];
    }
    CHECK(orbit_sizes.size() == kOrbitCount);
    auto reps = enumerate_patterns(true);
    CHECK(reps.size() == kOrbitCount);
    std::size_t total = 0;
    for (const auto& r : reps) total += static_cast<std::size_t>(orbit_sizes.at(r.index()));
    CHECK(total == all.size());
  }

  TEST_CASE("figure patterns are valid and sit in distinct orbits") {
    std::vector<EdgePattern> figs = {
        EdgePattern::from_free_edges({0, 0, 1, 1, 2, 2, 3, 3}),
        EdgePattern::from_free_edges({0, 0, 1, 1, 6, 7, 6, 7}),
        EdgePattern::from_free_edges({0, 0, 4, 5, 8, 9, 3, 3}),
        EdgePattern::from_free_edges({0, 0, 4, 11, 8, 7, 3, 3}),
    };
    auto reps = enumerate_patterns(true);
    std::set<int> canon;
    for (const auto& p : figs) {
      CHECK(validate(p).valid);
      auto c = canonical_form(p);
      CHECK(std::find(reps.begin(), reps.end(), c) != reps.end());
      canon.insert(c.index());
    }
    CHECK(canon.size() == figs.size());
    auto mirror = box_symmetries()[1].apply(figs[2]);
    CHECK(canonical_form(mirror) == canonical_form(figs[2]));
    auto pin = EdgePattern::from_free_edges({0, 5, 1, 11, 2, 9, 3, 7});
    CHECK(validate(pin).valid);
    CHECK(validate(pin).circle_count == 1);
  }
}
