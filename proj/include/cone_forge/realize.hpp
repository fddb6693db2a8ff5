#pragma once

// Metric realization of an edge pattern by axis-parallel lines in R^3.
//
// Circle edges stay on the box. Every other edge is translated in its two
// transverse coordinates; an end that is free in the pattern is extended to
// infinity. At each vertex the two joined edges must still meet, and the free
// edge must pass strictly inside the right angle those two edges span at
// their meeting point. All of this is linear in the displacements, so
// realizability is an exact rational feasibility problem.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cone_forge/geom_core.hpp"
#include "cone_forge/linear_system.hpp"
#include "cone_forge/pattern.hpp"

namespace cone_forge {

struct BoxSpec {
  std::array<Rational, 3> dims{Rational(1), Rational(1), Rational(1)};

  const Rational& operator[](Axis a) const { return dims[static_cast<std::size_t>(index(a))]; }
  Rational min_dim() const;
  /// Throws std::invalid_argument unless every dimension is positive.
  void check() const;
  /// Coordinate of the box face on the given side (0 or 1) of axis a.
  Rational face(Axis a, int side) const { return side ? (*this)[a] : Rational(0); }
  Rational default_margin() const { return min_dim() / 8; }
  friend bool operator==(const BoxSpec&, const BoxSpec&) = default;
};

enum class ConstraintKind { Joint, Length, Corner, Diagonal, Bound };

const char* constraint_kind_name(ConstraintKind kind);

struct RealizabilitySystem {
  LinearSystem system;
  std::vector<ConstraintKind> kinds;  // parallel to system.constraints
  /// Variable index of each transverse displacement (transverse_axes
  /// order); -1 for circle edges, which are not displaced.
  std::array<std::array<int, 2>, kEdgeCount> variables{};

  std::size_t count(ConstraintKind kind) const;
};

/// Throws std::invalid_argument for an invalid pattern, a bad box or a
/// non-positive margin.
RealizabilitySystem build_constraints(const EdgePattern& pattern, const BoxSpec& box, const Rational& margin);

struct RealizedEdge {
  int edge = 0;
  AxisLine line;
  bool on_circle = false;
  int component = 0;
};

struct JointPoint {
  int vertex = 0;
  Vec3Q point;
};

struct RealizedComponent {
  ComponentKind kind = ComponentKind::Interval;
  std::vector<int> edges;
  std::vector<JointPoint> joints;  // same indexing as Component::joints
  std::array<int, 2> end_vertices{-1, -1};
};

struct RealizedPattern {
  EdgePattern pattern;
  BoxSpec box;
  Rational margin;
  std::array<RealizedEdge, kEdgeCount> edges;
  std::vector<RealizedComponent> components;

  /// Meeting point of the two edges joined at a vertex.
  Vec3Q joint_at(int vertex) const;
};

/// Builds lines, extents and joints from absolute transverse offsets
/// (transverse_axes order per edge). Never throws on constraint violations;
/// use verify_realization for that.
RealizedPattern realize_from_offsets(const EdgePattern& pattern, const BoxSpec& box, const Rational& margin,
                                     const std::array<std::array<Rational, 2>, kEdgeCount>& offsets);

/// Exact re-check of every realizability condition on a realized pattern,
/// including that no two realized edges meet except at their joint. Empty
/// when the realization is sound.
std::vector<std::string> verify_realization(const RealizedPattern& realized);

struct InfeasibilityCertificate {
  std::vector<std::string> constraints;  // labels of an unsatisfiable subset
  std::vector<int> indices;              // into build_constraints(...).system
};

struct RealizationResult {
  bool feasible = false;
  std::optional<RealizedPattern> realized;
  std::optional<InfeasibilityCertificate> certificate;
  std::size_t sign_branches = 0;
};

RealizationResult solve_realization(const EdgePattern& pattern, const BoxSpec& box, const Rational& margin);

struct SectorSpec {
  int edge = 0;
  Axis axis = Axis::X;
  /// Outward signs in the edge's transverse_axes order.
  std::array<int, 2> quadrant{};
  /// Realized transverse position of the edge (apex of the quadrant).
  std::array<Rational, 2> apex;
  Extent longitudinal;
};

struct SectorReport {
  std::vector<SectorSpec> sectors;
  std::vector<std::pair<int, int>> overlapping_pairs;  // edge ids, first < second
  bool pairwise_disjoint = false;
  /// Disjointness ignoring pairs of edges that share a box vertex.
  bool disjoint_away_from_corners = false;
  bool corners_covered = false;  // every box corner interior to some sector
  bool joints_covered = false;   // every joint interior to some sector
  std::vector<int> uncovered_corners;
};

SectorReport compute_sectors(const RealizedPattern& realized);

bool point_in_sector_interior(const SectorSpec& sector, const Vec3Q& p);
bool sector_interiors_intersect(const SectorSpec& a, const SectorSpec& b);

}  // namespace cone_forge
