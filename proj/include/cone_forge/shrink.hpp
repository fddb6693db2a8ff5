#pragma once

// Counting model of the boundary of the shrinking convex core: faces carry
// cone points and pi/2 corners, edges meet at trivalent corners, and every
// move must keep n_cone + n_corner = 8 overall and = 4 on each face.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cone_forge {

struct ShrinkFace {
  int cone_count = 0;
  int corner_count = 0;
  friend auto operator<=>(const ShrinkFace&, const ShrinkFace&) = default;
};

/// An edge of the boundary complex separating two faces. Closed edges have
/// no endpoints.
struct ShrinkEdge {
  int face_a = 0, face_b = 0;
  int from = -1, to = -1;  // corner ids, -1 for a closed edge
  bool created = false;    // produced by a cone pair
  friend auto operator<=>(const ShrinkEdge&, const ShrinkEdge&) = default;
};

enum class ShrinkPhase { Shrinking, Collapsed };

struct BoundaryState {
  ShrinkPhase phase = ShrinkPhase::Shrinking;
  std::vector<ShrinkFace> faces;
  int global_corner_count = 0;
  std::vector<ShrinkEdge> edges;
  bool sphere = true;
  std::vector<std::string> history;  // not part of the state's identity

  int cone_total() const;
  /// Faces sharing at least one edge, as (i, j) with i < j.
  std::set<std::pair<int, int>> adjacency() const;
  /// Number of edge ends at each corner.
  std::vector<int> corner_degrees() const;
  /// Identity used for exploration: everything but the history.
  std::string key() const;
};

enum class MoveKind { ConePairToEdge, RespeedAvoidCorner, Collapse };

const char* move_kind_name(MoveKind k);

struct Move {
  MoveKind kind = MoveKind::ConePairToEdge;
  int face_a = 0;
  int face_b = 1;
};

class MoveRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

BoundaryState initial_state();

/// Empty when the state satisfies both conservation laws, trivalence and the
/// face/edge bookkeeping.
std::vector<std::string> check_laws(const BoundaryState& state);

/// Throws MoveRejected naming the failed precondition, or InvariantViolation
/// if the result breaks a law.
BoundaryState apply_move(const BoundaryState& state, const Move& move);

std::vector<Move> legal_moves(const BoundaryState& state);

enum class TerminalKind { SmoothPoint_Cube, SingularPoint_Prism, ProductCollapse, NotTerminal };

const char* terminal_kind_name(TerminalKind k);

TerminalKind classify_terminal(const BoundaryState& state);

/// The cube (6 faces without cone points) and the triangular prism with one
/// cone point on each triangle.
BoundaryState cube_state();
BoundaryState prism_state();

struct Exploration {
  std::vector<BoundaryState> states;  // breadth-first order, first at depth 0
  std::vector<int> depth;
  std::vector<std::string> violations;
  bool quiescent = false;  // no new state at the last depth
};

Exploration explore(int max_depth);

}  // namespace cone_forge
