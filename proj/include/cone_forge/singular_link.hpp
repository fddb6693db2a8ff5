#pragma once

// The singular locus of a realized pattern as a spatial polyline link with
// open ends, and exact generic projections of it: crossings, Gauss codes,
// linking numbers between closed components.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cone_forge/geom_core.hpp"
#include "cone_forge/realize.hpp"

namespace cone_forge {

struct LinkComponent {
  bool closed = false;
  std::vector<Vec3Q> points;
  /// Open components only: directions of the rays leaving points.front()
  /// and points.back().
  std::array<Vec3Q, 2> ray_directions;
  std::vector<int> edges;  // pattern edges, empty for hand-built links
  bool closure = false;    // closed off by close_open_components
};

struct PolylineLink {
  std::vector<LinkComponent> components;
  /// Rays are cut where they leave the cube [-clip_radius, clip_radius]^3.
  Rational clip_radius{4};

  /// Finite polyline used for projection; closed components repeat nothing
  /// (the closing segment is implicit).
  std::vector<Vec3Q> clipped_points(std::size_t component) const;
};

/// Largest |coordinate| over the finite points of the link.
Rational bounding_radius(const PolylineLink& link);

/// One closed component per circle, one open component per interval.
/// Throws std::invalid_argument when clip_radius does not exceed the
/// bounding radius of the realized complex.
PolylineLink extract_link(const RealizedPattern& realized, const Rational& clip_radius);

/// Closes every open component far away: each ray end is pushed further out
/// along its ray, lifted along a slightly slanted segment into the half-space
/// z > 3 clip_radius and joined there; the slant differs per component. The result depends on this choice; the closed components are
/// flagged with `closure`.
PolylineLink close_open_components(const PolylineLink& link);

class NonGeneric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StrandPoint {
  int component = 0;
  int segment = 0;
  Rational param;  // in (0, 1) along the segment
};

struct Crossing {
  StrandPoint over, under;
  int sign = 0;  // sign of det(over tangent, under tangent, direction)
};

struct GaussEntry {
  int crossing = 0;
  bool over = false;
  int sign = 0;
};

struct LinkDiagram {
  Vec3Q direction;  // the viewer sits at +direction
  std::vector<std::vector<std::array<Rational, 2>>> strands;  // projected clipped polylines
  std::vector<bool> closed;
  std::vector<Crossing> crossings;  // ordered by (component, segment, param) of the first strand point
  std::vector<std::vector<GaussEntry>> gauss_codes;
  std::vector<int> closed_components;             // component ids indexing the matrix
  std::vector<std::vector<int>> linking_matrix;   // over closed components

  /// Crossings between components a and b (a == b gives self crossings).
  std::size_t crossings_between(int a, int b) const;
};

/// Throws std::invalid_argument for a zero direction and NonGeneric when the
/// projection has a degeneracy (overlap, crossing at a vertex, triple point,
/// a segment seen end-on or an actual intersection).
LinkDiagram project(const PolylineLink& link, const Vec3Q& direction);

/// Deterministic sequence of rational projection directions.
Vec3Q projection_direction(std::uint64_t seed, int attempt);

struct GenericProjection {
  LinkDiagram diagram;
  int attempts = 0;
};

/// Tries projection_direction(seed, 0), (seed, 1), ... until one is generic.
GenericProjection project_generic(const PolylineLink& link, std::uint64_t seed, int max_attempts = 64);

/// Linking matrix over closed components. Throws UnsupportedOperation when a
/// requested component is open.
std::vector<std::vector<int>> linking_matrix(const LinkDiagram& diagram);
int linking_number(const LinkDiagram& diagram, int a, int b);

std::string gauss_code_string(const std::vector<GaussEntry>& code);

/// Plain SVG drawing of a diagram, under-strands broken at crossings.
std::string diagram_svg(const LinkDiagram& diagram);

}  // namespace cone_forge
