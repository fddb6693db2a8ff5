#include <doctest.h>

#include <algorithm>

#include "cone_forge/shrink.hpp"

using namespace cone_forge;

TEST_SUITE("shrink") {
  TEST_CASE("initial state") {
    auto s = initial_state();
    CHECK(s.faces.size() == 2);
    CHECK(check_laws(s).empty());
    CHECK(s.cone_total() == 8);
    CHECK(s.global_corner_count == 0);
    CHECK(classify_terminal(s) == TerminalKind::NotTerminal);
    CHECK_FALSE(legal_moves(s).empty());
  }

  TEST_CASE("a cone pair becomes an edge") {
    auto s = apply_move(initial_state(), {MoveKind::ConePairToEdge, 0, 1});
    CHECK(s.faces[0] == ShrinkFace{3, 1});
    CHECK(s.faces[1] == ShrinkFace{3, 1});
    CHECK(s.global_corner_count == 2);
    CHECK(check_laws(s).empty());
    for (int d : s.corner_degrees()) CHECK(d == 3);
    CHECK(std::count_if(s.edges.begin(), s.edges.end(), [](const ShrinkEdge& e) { return e.created; }) == 1);
  }

  TEST_CASE("rejected moves") {
    auto s = initial_state();
    CHECK_THROWS_AS(apply_move(s, {MoveKind::ConePairToEdge, 0, 0}), MoveRejected);
    CHECK_THROWS_AS(apply_move(s, {MoveKind::ConePairToEdge, 0, 5}), MoveRejected);
    CHECK_THROWS_AS(apply_move(s, {MoveKind::RespeedAvoidCorner, 0, 0}), MoveRejected);
    CHECK_THROWS_AS(apply_move(s, {MoveKind::Collapse, 0, 1}), MoveRejected);
    for (int i = 0; i < 4; ++i) s = apply_move(s, {MoveKind::ConePairToEdge, 0, 1});
    CHECK_THROWS_AS(apply_move(s, {MoveKind::ConePairToEdge, 0, 1}), MoveRejected);
    auto cube = apply_move(s, {MoveKind::Collapse, 0, 1});
    CHECK_THROWS_AS(apply_move(cube, {MoveKind::Collapse, 0, 1}), MoveRejected);
  }

  TEST_CASE("four cone pairs exhaust the cone points") {
    auto s = initial_state();
    for (int i = 0; i < 4; ++i) {
      s = apply_move(s, {MoveKind::ConePairToEdge, 0, 1});
      CHECK(check_laws(s).empty());
      CHECK(s.global_corner_count == 2 * (i + 1));
    }
    CHECK(s.cone_total() == 0);
    CHECK(s.global_corner_count == 8);
  }

  TEST_CASE("respeeding keeps the counts") {
    auto s = apply_move(initial_state(), {MoveKind::ConePairToEdge, 0, 1});
    auto r = apply_move(s, {MoveKind::RespeedAvoidCorner, 1, 1});
    CHECK(r.key() == s.key());
    CHECK(r.history.size() == s.history.size() + 1);
  }

  TEST_CASE("terminal states") {
    auto cube = cube_state();
    CHECK(check_laws(cube).empty());
    CHECK(cube.faces.size() == 6);
    CHECK(cube.global_corner_count == 8);
    CHECK(cube.cone_total() == 0);
    for (const auto& f : cube.faces) CHECK(f == ShrinkFace{0, 4});
    CHECK(classify_terminal(cube) == TerminalKind::SmoothPoint_Cube);

    auto prism = prism_state();
    CHECK(check_laws(prism).empty());
    CHECK(prism.faces.size() == 5);
    CHECK(std::count(prism.faces.begin(), prism.faces.end(), ShrinkFace{1, 3}) == 2);
    CHECK(classify_terminal(prism) == TerminalKind::SingularPoint_Prism);
    CHECK(prism.cone_total() + prism.global_corner_count == 8);
  }

  TEST_CASE("laws catch broken states") {
    auto s = initial_state();
    s.faces[0].cone_count = 3;
    CHECK_FALSE(check_laws(s).empty());
    auto t = cube_state();
    t.edges.pop_back();
    CHECK_FALSE(check_laws(t).empty());
  }

  TEST_CASE("exploration") {
    auto zero = explore(0);
    REQUIRE(zero.states.size() == 1);
    CHECK(zero.states[0].key() == initial_state().key());
    CHECK_THROWS_AS(explore(-1), std::invalid_argument);

    auto four = explore(4);
    bool full_stratum = std::any_of(four.states.begin(), four.states.end(),
                                    [](const BoundaryState& s) { return s.cone_total() == 0 && s.global_corner_count == 8; });
    CHECK(full_stratum);

    auto all = explore(32);
    CHECK(all.quiescent);
    CHECK(all.violations.empty());
    for (const auto& s : all.states) {
      CHECK(s.cone_total() + s.global_corner_count == 8);
      for (const auto& f : s.faces) CHECK(f.cone_count + f.corner_count == 4);
    }
    std::vector<TerminalKind> kinds;
    for (const auto& s : all.states)
      if (legal_moves(s).empty()) kinds.push_back(classify_terminal(s));
    CHECK(std::count(kinds.begin(), kinds.end(), TerminalKind::SmoothPoint_Cube) == 1);
    CHECK(std::count(kinds.begin(), kinds.end(), TerminalKind::SingularPoint_Prism) == 1);
    CHECK(std::count(kinds.begin(), kinds.end(), TerminalKind::NotTerminal) == 0);
    auto keys = [](const Exploration& e) {
      std::vector<std::string> k;
      for (const auto& s : e.states) k.push_back(s.key());
      return k;
    };
    CHECK(keys(explore(32)) == keys(all));
  }
}
