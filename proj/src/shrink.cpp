#include "cone_forge/shrink.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace cone_forge {

int BoundaryState::cone_total() const {
  int n = 0;
  for (const auto& f : faces) n += f.cone_count;
  return n;
}

std::set<std::pair<int, int>> BoundaryState::adjacency() const {
  std::set<std::pair<int, int>> out;
  for (const auto& e : edges)
    if (e.face_a != e.face_b) out.insert(std::minmax(e.face_a, e.face_b));
  return out;
}

std::vector<int> BoundaryState::corner_degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(std::max(global_corner_count, 0)), 0);
  for (const auto& e : edges) {
    for (int c : {e.from, e.to})
      if (c >= 0 && c < global_corner_count) ++deg[static_cast<std::size_t>(c)];
  }
  return deg;
}

std::string BoundaryState::key() const {
  std::ostringstream s;
  s << (phase == ShrinkPhase::Shrinking ? 'S' : 'C') << global_corner_count << (sphere ? 's' : 'x') << '|';
  for (const auto& f : faces) s << f.cone_count << ',' << f.corner_count << ';';
  s << '|';
  for (const auto& e : edges) s << e.face_a << ',' << e.face_b << ',' << e.from << ',' << e.to << (e.created ? "*" : "") << ';';
  return s.str();
}

const char* move_kind_name(MoveKind k) {
  switch (k) {
    case MoveKind::ConePairToEdge: return "cone_pair_to_edge";
    case MoveKind::RespeedAvoidCorner: return "respeed_avoid_corner";
    case MoveKind::Collapse: return "collapse";
  }
  return "?";
}

const char* terminal_kind_name(TerminalKind k) {
  switch (k) {
    case TerminalKind::SmoothPoint_Cube: return "smooth_point_cube";
    case TerminalKind::SingularPoint_Prism: return "singular_point_prism";
    case TerminalKind::ProductCollapse: return "product_collapse";
    case TerminalKind::NotTerminal: return "not_terminal";
  }
  return "?";
}

BoundaryState initial_state() {
  BoundaryState s;
  s.faces = {{4, 0}, {4, 0}};
  s.edges = {{0, 1, -1, -1, false}};
  return s;
}

std::vector<std::string> check_laws(const BoundaryState& s) {
  std::vector<std::string> v;
  if (s.cone_total() + s.global_corner_count != 8) {
    v.push_back("global: " + std::to_string(s.cone_total()) + " cones + " + std::to_string(s.global_corner_count) + " corners != 8");
  }
  for (std::size_t i = 0; i < s.faces.size(); ++i) {
    const auto& f = s.faces[i];
    if (f.cone_count < 0 || f.corner_count < 0) v.push_back("face " + std::to_string(i) + ": negative count");
    if (f.cone_count + f.corner_count != 4) {
      v.push_back("face " + std::to_string(i) + ": " + std::to_string(f.cone_count) + " cones + " + std::to_string(f.corner_count) +
                  " corners != 4");
    }
  }
  auto deg = s.corner_degrees();
  for (std::size_t c = 0; c < deg.size(); ++c)
    if (deg[c] != 3) v.push_back("corner " + std::to_string(c) + " has degree " + std::to_string(deg[c]));
  std::vector<bool> touched(s.faces.size(), false);
  for (const auto& e : s.edges) {
    int n = static_cast<int>(s.faces.size());
    if (e.face_a < 0 || e.face_a >= n || e.face_b < 0 || e.face_b >= n) {
      v.push_back("edge refers to a missing face");
      continue;
    }
    if ((e.from < 0) != (e.to < 0) || e.from >= s.global_corner_count || e.to >= s.global_corner_count) {
      v.push_back("edge refers to a missing corner");
    }
    touched[static_cast<std::size_t>(e.face_a)] = touched[static_cast<std::size_t>(e.face_b)] = true;
  }
  for (std::size_t i = 0; i < touched.size(); ++i)
    if (!touched[i]) v.push_back("face " + std::to_string(i) + " has no edge");
  if (s.phase == ShrinkPhase::Collapsed) {
    int incid = 0;
    for (const auto& f : s.faces) incid += f.corner_count;
    if (incid != 3 * s.global_corner_count) v.push_back("corner incidences do not match trivalence");
  }
  if (!s.sphere) v.push_back("boundary is not a 2-sphere");
  return v;
}

namespace {

// X^2 x [0, eps] for a polygon X^2 with k corners and c = 4 - k cone points.
BoundaryState product_state(int k) {
  int c = 4 - k;
  BoundaryState s;
  s.phase = ShrinkPhase::Collapsed;
  s.faces = {{c, k}, {c, k}};
  for (int i = 0; i < k; ++i) s.faces.push_back({0, 4});
  s.global_corner_count = 2 * k;
  auto side = [k](int i) { return 2 + ((i % k) + k) % k; };
  for (int i = 0; i < k; ++i) {
    int j = (i + 1) % k;
    s.edges.push_back({0, side(i), i, j, false});
    s.edges.push_back({1, side(i), k + i, k + j, false});
    s.edges.push_back({side(i - 1), side(i), i, k + i, false});
  }
  return s;
}

void reject(const Move& m, const std::string& why) { throw MoveRejected(std::string(move_kind_name(m.kind)) + ": " + why); }

}  // namespace

BoundaryState cube_state() { return product_state(4); }

BoundaryState prism_state() { return product_state(3); }

BoundaryState apply_move(const BoundaryState& s, const Move& m) {
  if (s.phase != ShrinkPhase::Shrinking) reject(m, "the boundary has already collapsed");
  int n = static_cast<int>(s.faces.size());
  auto face_ok = [&](int f) { return f >= 0 && f < n; };
  BoundaryState out = s;
  switch (m.kind) {
    case MoveKind::ConePairToEdge: {
      if (!face_ok(m.face_a) || !face_ok(m.face_b)) reject(m, "no such face");
      if (m.face_a == m.face_b) reject(m, "the cone pair must lie on two different faces");
      const auto &fa = s.faces[static_cast<std::size_t>(m.face_a)], &fb = s.faces[static_cast<std::size_t>(m.face_b)];
      if (fa.cone_count < 1) reject(m, "face " + std::to_string(m.face_a) + " has no cone point");
      if (fb.cone_count < 1) reject(m, "face " + std::to_string(m.face_b) + " has no cone point");
      auto it = std::find_if(out.edges.begin(), out.edges.end(), [&](const ShrinkEdge& e) {
        return std::minmax(e.face_a, e.face_b) == std::minmax(m.face_a, m.face_b);
      });
      if (it == out.edges.end()) reject(m, "faces " + std::to_string(m.face_a) + " and " + std::to_string(m.face_b) + " are not adjacent");
      // Both new corners split the shared edge; the new edge joins them.
      int p = s.global_corner_count, q = p + 1;
      ShrinkEdge old = *it;
      out.edges.erase(it);
      if (old.from < 0) {
        out.edges.push_back({old.face_a, old.face_b, p, q, false});
        out.edges.push_back({old.face_a, old.face_b, q, p, false});
      } else {
        out.edges.push_back({old.face_a, old.face_b, old.from, p, false});
        out.edges.push_back({old.face_a, old.face_b, p, q, false});
        out.edges.push_back({old.face_a, old.face_b, q, old.to, false});
      }
      out.edges.push_back({m.face_a, m.face_b, p, q, true});
      for (int f : {m.face_a, m.face_b}) {
        --out.faces[static_cast<std::size_t>(f)].cone_count;
        ++out.faces[static_cast<std::size_t>(f)].corner_count;
      }
      out.global_corner_count += 2;
      out.history.push_back("cone pair on faces " + std::to_string(m.face_a) + "," + std::to_string(m.face_b) + " -> edge " +
                            std::to_string(p) + "-" + std::to_string(q));
      break;
    }
    case MoveKind::RespeedAvoidCorner: {
      if (!face_ok(m.face_a)) reject(m, "no such face");
      const auto& f = s.faces[static_cast<std::size_t>(m.face_a)];
      if (f.cone_count < 1 || f.corner_count < 1) reject(m, "no cone point can meet a corner on face " + std::to_string(m.face_a));
      out.history.push_back("respeed face " + std::to_string(m.face_a) + " to keep its cone points off the corners");
      break;
    }
    case MoveKind::Collapse: {
      if (n != 2) reject(m, "only a two-face boundary collapses");
      if (s.faces[0] != s.faces[1]) reject(m, "the two faces carry different counts");
      int k = s.faces[0].corner_count;
      if (k < 1) reject(m, "faces without corners cannot collapse to a product");
      auto hist = s.history;
      out = product_state(k);
      out.history = std::move(hist);
      out.history.push_back("collapse to X^2 x [0,eps] with a " + std::to_string(k) + "-gon");
      break;
    }
  }
  auto v = check_laws(out);
  if (!v.empty()) throw InvariantViolation("after " + std::string(move_kind_name(m.kind)) + ": " + v.front());
  return out;
}

std::vector<Move> legal_moves(const BoundaryState& s) {
  std::vector<Move> out;
  if (s.phase != ShrinkPhase::Shrinking) return out;
  int n = static_cast<int>(s.faces.size());
  std::vector<Move> candidates;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) candidates.push_back({MoveKind::ConePairToEdge, a, b});
  for (int a = 0; a < n; ++a) candidates.push_back({MoveKind::RespeedAvoidCorner, a, a});
  candidates.push_back({MoveKind::Collapse, 0, 1});
  for (const auto& m : candidates) {
    try {
      apply_move(s, m);
      out.push_back(m);
    } catch (const MoveRejected&) {
    }
  }
  return out;
}

TerminalKind classify_terminal(const BoundaryState& s) {
  if (!legal_moves(s).empty() || !check_laws(s).empty()) return TerminalKind::NotTerminal;
  std::map<ShrinkFace, int> counts;
  for (const auto& f : s.faces) ++counts[f];
  int g = s.global_corner_count;
  if (s.faces.size() == 6 && counts[{0, 4}] == 6 && g == 8) return TerminalKind::SmoothPoint_Cube;
  if (s.faces.size() == 5 && counts[{1, 3}] == 2 && counts[{0, 4}] == 3 && g == 6) return TerminalKind::SingularPoint_Prism;
  for (int k : {1, 2}) {
    if (static_cast<int>(s.faces.size()) == k + 2 && counts[{4 - k, k}] == 2 && counts[{0, 4}] == k && g == 2 * k) {
      return TerminalKind::ProductCollapse;
    }
  }
  return TerminalKind::NotTerminal;
}

Exploration explore(int max_depth) {
  if (max_depth < 0) throw std::invalid_argument("max_depth must be non-negative");
  Exploration ex;
  std::set<std::string> seen;
  auto add = [&](BoundaryState s, int d) {
    if (!seen.insert(s.key()).second) return false;
    for (auto& v : check_laws(s)) ex.violations.push_back(s.key() + ": " + v);
    ex.states.push_back(std::move(s));
    ex.depth.push_back(d);
    return true;
  };
  add(initial_state(), 0);
  std::size_t frontier_begin = 0;
  bool grew = true;
  for (int d = 1; d <= max_depth && grew; ++d) {
    grew = false;
    std::size_t frontier_end = ex.states.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (const auto& m : legal_moves(ex.states[i])) grew |= add(apply_move(ex.states[i], m), d);
    }
    frontier_begin = frontier_end;
  }
  if (!grew) ex.quiescent = true;
  if (grew) {
    ex.quiescent = true;
    for (std::size_t i = frontier_begin; i < ex.states.size() && ex.quiescent; ++i)
      for (const auto& m : legal_moves(ex.states[i]))
        if (!seen.count(apply_move(ex.states[i], m).key())) ex.quiescent = false;
  }
  for (const auto& s : ex.states) {
    if (legal_moves(s).empty() && classify_terminal(s) == TerminalKind::NotTerminal) {
      ex.violations.push_back(s.key() + ": stuck in an unclassified state");
    }
  }
  return ex;
}

}  // namespace cone_forge
