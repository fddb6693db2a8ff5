#pragma once

// The folded complement of the removed sectors looks, far from the box, like
// X x [T, inf) for a closed flat surface X. X is glued from the six
// cross-sections that survive far out along +-x, +-y and +-z; the sector folds
// identify their sides by quarter turns. Every singular ray is a cone point of
// X, and the two disc ends are the halves of X on either side of a closed
// geodesic.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cone_forge/geom_core.hpp"
#include "cone_forge/realize.hpp"

namespace cone_forge {

/// p -> M p + t with M a signed permutation matrix of determinant +1.
struct AxisIsometry {
  std::array<std::array<int, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  Vec3Q t;

  static AxisIsometry identity() { return {}; }
  /// Quarter turn about the line through `point` parallel to `axis`, taking
  /// the unit coordinate vector `from` to `to` (both orthogonal to `axis`).
  static AxisIsometry quarter_turn(Axis axis, const Vec3Q& point, const Vec3Q& from, const Vec3Q& to);

  Vec3Q apply(const Vec3Q& p) const;
  Vec3Q apply_linear(const Vec3Q& v) const;
  AxisIsometry inverse() const;
  friend AxisIsometry compose(const AxisIsometry& a, const AxisIsometry& b);  // a after b
  friend bool operator==(const AxisIsometry&, const AxisIsometry&) = default;
};

struct FarDirection {
  Axis axis = Axis::X;
  int sign = 1;

  Vec3Q vector() const;
  int plane() const { return 2 * index(axis) + (sign > 0 ? 0 : 1); }
  std::string name() const;  // "+x", "-z", ...
  static FarDirection from_plane(int plane);
  /// Throws std::invalid_argument unless v is a signed unit coordinate vector.
  static FarDirection from_vector(const Vec3Q& v);
  friend bool operator==(const FarDirection&, const FarDirection&) = default;
};

/// Coordinate axes (P, Q) of the cross-section plane for a far direction d,
/// ordered so that P x Q = d.
std::array<Axis, 2> far_plane_axes(int plane);

/// Open rectangle of a cross-section plane, in far_plane_axes order.
struct FarCell {
  int plane = 0;
  std::array<Rational, 2> lo, hi;
};

/// Sides: 0 = P-low, 1 = P-high, 2 = Q-low, 3 = Q-high. A link glues the part
/// [from, to] (tangential coordinate) of one side of `cell` to a side of
/// `other`; `transition` maps native coordinates of `cell` to those of
/// `other` and is the identity between neighbours in the same plane.
struct FarLink {
  int cell = 0;
  int side = 0;
  Rational from, to;
  int other = 0;
  int other_side = 0;
  int sector = -1;  // edge whose sector fold provides the gluing, -1 if none
  AxisIsometry transition;
  Rational image_from, image_to;  // images of from and to along other_side
};

struct FarRay {
  int edge = 0;
  int vertex = 0;
  FarDirection direction;
  std::array<Rational, 2> apex;  // in far_plane_axes(direction.plane()) order
  int cell = -1;                 // a cell of that plane with the apex as a corner
  int cone_quarters = 0;         // cone angle in units of pi/2
};

struct FarSection {
  std::vector<FarCell> cells;
  std::vector<FarLink> links;
  std::vector<std::vector<int>> links_of_cell;
  std::vector<FarRay> rays;
  /// Corners of the surface that are not ray apexes but are not flat either.
  std::vector<std::string> singular_points;

  bool is_flat_away_from_rays() const { return singular_points.empty(); }
};

/// Throws std::domain_error when the far cross-section is not compact or the
/// folds do not close it up into a surface without boundary.
FarSection build_far_section(const RealizedPattern& realized);

/// A partition of the rays (indices into FarSection::rays) into two groups
/// separated by a closed geodesic of the far surface. groups[0] holds ray 0.
struct EndSplit {
  std::array<std::vector<int>, 2> groups;
  int score = 0;  // pairs of rays with the same native direction in the same group
};

/// All distinct splits found by tracing closed geodesics in the two axis
/// directions of every cell, best first (score, then lexicographic).
std::vector<EndSplit> end_splits(const FarSection& section);

struct DevelopedRay {
  int ray = 0;  // index into FarSection::rays
  int edge = 0;
  Vec3Q point;      // a point of the ray line, in the end's chart
  Vec3Q direction;  // outgoing direction, in the end's chart
};

struct DiscEnd {
  std::vector<DevelopedRay> rays;
  Vec3Q direction;  // common outgoing direction of the developed rays
  int base_cell = 0;
};

/// Develops both halves of the best split into one chart each. Throws
/// std::domain_error if no separating geodesic is found, and
/// std::logic_error if the developed rays of an end are not parallel.
std::array<DiscEnd, 2> disc_ends(const FarSection& section);
std::array<DiscEnd, 2> disc_ends(const FarSection& section, const EndSplit& split);

}  // namespace cone_forge
