#pragma once

// Edge patterns on the twelve edges of a box.
//
// Numbering (fixed, part of the JSON format):
//   vertex v = x + 2y + 4z with x, y, z in {0, 1}
//   edge id  = 4 * axis + b0 + 2 * b1, where (b0, b1) are the vertex bits in
//              the two transverse axes taken in increasing axis order.
//   So edges 0-3 run along x (indexed by y + 2z), 4-7 along y (x + 2z) and
//   8-11 along z (x + 2y).
//
// A pattern picks at each vertex the one incident edge that is *not* joined
// there; the other two edges are joined at that vertex.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cone_forge/geom_core.hpp"

namespace cone_forge {

inline constexpr int kVertexCount = 8;
inline constexpr int kEdgeCount = 12;
inline constexpr int kAssignmentCount = 6561;  // 3^8

namespace box {

int vertex_bit(int vertex, Axis a);
int vertex_from_bits(int x, int y, int z);
Axis edge_axis(int edge);
/// Vertex at the low (0) or high (1) end of the edge along its axis.
int edge_endpoint(int edge, int end);
/// The unique edge at `vertex` running along `a`.
int edge_at(int vertex, Axis a);
/// Bit of the edge's (fixed) transverse coordinate along axis a != edge_axis.
int edge_transverse_bit(int edge, Axis a);
bool edges_share_vertex(int e1, int e2);

}  // namespace box

class EdgePattern {
 public:
  EdgePattern() = default;
  /// Axis of the free edge at each vertex.
  explicit EdgePattern(std::array<Axis, kVertexCount> free_axes) : free_axes_(free_axes) {}

  /// From edge ids; throws std::invalid_argument if an edge is not incident
  /// to its vertex.
  static EdgePattern from_free_edges(const std::array<int, kVertexCount>& free_edges);
  /// Assignment index in [0, 6561): base-3 digits, vertex 0 most significant.
  static EdgePattern from_index(int index);

  Axis free_axis(int vertex) const { return free_axes_.at(static_cast<std::size_t>(vertex)); }
  int free_edge(int vertex) const { return box::edge_at(vertex, free_axis(vertex)); }
  std::array<int, kVertexCount> free_edges() const;
  /// The two edges joined at the vertex, in increasing axis order.
  std::array<int, 2> joined_edges(int vertex) const;
  bool is_free_at(int edge, int end) const;

  int index() const;
  /// Lexicographic comparison key (axis digits per vertex).
  const std::array<Axis, kVertexCount>& digits() const { return free_axes_; }

  friend bool operator==(const EdgePattern&, const EdgePattern&) = default;
  friend bool operator<(const EdgePattern& a, const EdgePattern& b) { return a.index() < b.index(); }

 private:
  std::array<Axis, kVertexCount> free_axes_{};
};

enum class ComponentKind { Circle, Interval };

struct Component {
  ComponentKind kind = ComponentKind::Interval;
  /// Edges in traversal order; for circles the sequence is cyclic.
  std::vector<int> edges;
  /// joints[i] is the vertex joining edges[i] and edges[i+1] (cyclically for
  /// circles, so circles have edges.size() joints and intervals one fewer).
  std::vector<int> joints;
  /// Intervals only: the free vertex ends of edges.front() and edges.back().
  std::array<int, 2> end_vertices{-1, -1};
};

struct ComponentDecomposition {
  std::vector<Component> components;  // intervals first, then circles
  /// Component index of every edge.
  std::array<int, kEdgeCount> component_of_edge{};

  std::size_t circle_count() const;
  std::size_t interval_count() const;
};

ComponentDecomposition decompose(const EdgePattern& pattern);

struct ValidityReport {
  bool valid = false;
  std::size_t circle_count = 0;
  std::size_t interval_count = 0;
  std::vector<std::size_t> circle_lengths;    // sorted
  std::vector<std::size_t> interval_lengths;  // sorted
  std::string reason;                         // empty when valid
};

ValidityReport validate(const EdgePattern& pattern);

/// A symmetry of the box: vertex coordinate along `permutation[a]` of the
/// image is coordinate a of the source, xor `flip[a]`.
struct BoxSymmetry {
  std::array<Axis, 3> permutation{Axis::X, Axis::Y, Axis::Z};
  std::array<bool, 3> flip{false, false, false};

  int apply_vertex(int vertex) const;
  int apply_edge(int edge) const;
  EdgePattern apply(const EdgePattern& pattern) const;
  bool preserves_orientation() const;
};

/// All 48 symmetries, identity first, in a fixed order.
const std::vector<BoxSymmetry>& box_symmetries();

/// Lexicographically minimal image under the 48-element group.
EdgePattern canonical_form(const EdgePattern& pattern);
/// Same, restricted to the 24 orientation-preserving symmetries.
EdgePattern oriented_canonical_form(const EdgePattern& pattern);
/// True when the pattern is not equivalent to its mirror image by a rotation.
bool is_chiral(const EdgePattern& pattern);

struct EnumerationSummary {
  std::size_t raw = 0;
  std::size_t valid = 0;
  std::size_t orbits = 0;
};

/// Valid patterns in increasing index order; with up_to_symmetry, one
/// canonical representative per orbit. `jobs` partitions the assignment
/// space over threads; the result does not depend on it.
std::vector<EdgePattern> enumerate_patterns(bool up_to_symmetry, int jobs = 1);
EnumerationSummary enumeration_summary(int jobs = 1);

std::string describe(const EdgePattern& pattern);

}  // namespace cone_forge
