#pragma once

// Flat cone surfaces with Gauss-Bonnet bookkeeping, defect budgets for the
// structure types of non-compact cone 3-manifolds, and their classifier.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cone_forge/geom_core.hpp"
#include "cone_forge/pattern.hpp"
#include "cone_forge/realize.hpp"

namespace cone_forge {

/// Exact angle coeff * pi.
struct PiMultiple {
  Rational coeff;

  double radians() const { return to_double(coeff) * kPi; }
  friend PiMultiple operator+(const PiMultiple& a, const PiMultiple& b) { return {a.coeff + b.coeff}; }
  friend PiMultiple operator-(const PiMultiple& a, const PiMultiple& b) { return {a.coeff - b.coeff}; }
  friend bool operator<(const PiMultiple& a, const PiMultiple& b) { return a.coeff < b.coeff; }
  friend bool operator>(const PiMultiple& a, const PiMultiple& b) { return a.coeff > b.coeff; }
  friend bool operator<=(const PiMultiple& a, const PiMultiple& b) { return a.coeff <= b.coeff; }
  friend bool operator>=(const PiMultiple& a, const PiMultiple& b) { return a.coeff >= b.coeff; }
  friend bool operator==(const PiMultiple& a, const PiMultiple& b) { return a.coeff == b.coeff; }
};

PiMultiple pi_times(const Rational& r);
PiMultiple pi_times(long p, long q = 1);
/// Accepts "1/2pi", "pi", "3pi", "-1/4pi", "0pi" and a bare rational "1/2"
/// (read as a multiple of pi).
PiMultiple parse_pi_multiple(std::string_view text);
std::string format_pi_multiple(const PiMultiple& a);  // "1/2pi", always with the slash

PiMultiple sum(const std::vector<PiMultiple>& xs);

struct SurfaceTriangle {
  std::array<int, 3> vertices{};
  /// Squared length of side k, which joins vertices[k] and vertices[(k+1)%3].
  std::array<Rational, 3> squared_lengths;
};

struct SideRef {
  int triangle = 0;
  int side = 0;
  friend auto operator<=>(const SideRef&, const SideRef&) = default;
};

struct Gluing {
  SideRef a, b;
};

struct TriangulatedFlatSurface {
  std::vector<SurfaceTriangle> triangles;
  std::vector<Gluing> gluings;

  /// Sides not appearing in any gluing.
  std::vector<SideRef> boundary() const;
  int vertex_count() const;
};

/// Interior angle of a triangle at vertices[k], from the squared lengths.
double triangle_angle(const SurfaceTriangle& t, int k);

struct VertexAngle {
  int vertex = 0;
  bool boundary = false;
  double angle = 0;   // total angle around the vertex
  double defect = 0;  // 2pi - angle (interior) or pi - angle (boundary turning)
};

struct GaussBonnetReport {
  double interior_defect_sum = 0;
  double boundary_turning_sum = 0;
  int euler_characteristic = 0;
  std::vector<VertexAngle> vertices;
  double residual = 0;  // |defects + turning - 2 pi chi|
};

/// Throws std::invalid_argument for degenerate triangles, a side glued twice,
/// glued sides of different lengths or endpoints that do not match.
GaussBonnetReport gauss_bonnet(const TriangulatedFlatSurface& surface);

/// True iff the defects sum to exactly 2pi and there are at least two.
/// Throws std::invalid_argument for a defect outside (0, 2pi).
bool disc_metric_exists(const std::vector<PiMultiple>& defects);

struct DoubledDisc {
  TriangulatedFlatSurface surface;
  std::vector<PiMultiple> cone_angles;  // 2 theta_i
  std::vector<PiMultiple> defects;      // 2 (pi - theta_i)
  std::vector<int> cone_vertices;       // vertex ids of the cone points
};

/// Double of the convex region bounded by a unit-step polyline with interior
/// angles theta_i, its two parallel end rays, and a cut one unit above the
/// polyline. Vertex coordinates are rounded to dyadic rationals so that side
/// lengths are exact. Throws std::invalid_argument unless every theta lies in
/// (0, pi) and sum(pi - theta_i) = pi.
DoubledDisc build_doubled_disc(const std::vector<PiMultiple>& corner_angles);

struct SoulDim2Sphere {
  std::vector<PiMultiple> defects;
};
struct SoulDim2Projective {
  std::vector<PiMultiple> defects;
};
struct PlaneConePoint {
  PiMultiple defect;
  bool on_rotation_axis = false;
};
struct SoulDim1 {
  std::vector<PlaneConePoint> plane_defects;
  PiMultiple rotation_angle;
  std::optional<int> rotation_order;  // nullopt: infinite order
};
struct SoulDim0Lines {
  std::vector<PiMultiple> line_defects;
};
struct Example1 {
  std::vector<PiMultiple> disc_defects;
  std::vector<PiMultiple> closed_defects;
};
struct Example2 {
  int n = 1;
  std::vector<PiMultiple> closed_defects;
};
struct EdgePatternType {
  EdgePattern pattern;
  BoxSpec box;
};

using ConeManifoldDescription =
    std::variant<SoulDim2Sphere, SoulDim2Projective, SoulDim1, SoulDim0Lines, Example1, Example2, EdgePatternType>;

const char* variant_name(const ConeManifoldDescription& d);

/// Every singular defect of the description (edge patterns: pi/2 per edge).
std::vector<PiMultiple> all_defects(const ConeManifoldDescription& d);

struct BudgetReport {
  bool passed = false;
  std::vector<std::string> violations;
  PiMultiple budget;             // the defect budget the cap is computed from
  std::optional<long> component_cap;  // floor(budget / (2pi - c))
};

/// Throws std::invalid_argument when a defect lies outside (0, 2pi), a cone
/// angle exceeds the cap, or the cap is not below 2pi.
BudgetReport validate_description(const ConeManifoldDescription& d, const PiMultiple& angle_cap);

/// floor(budget / (2pi - c)); throws std::invalid_argument unless c < 2pi.
long component_cap(const PiMultiple& budget, const PiMultiple& angle_cap);

struct Classification {
  bool classified = false;
  std::optional<int> soul_dimension;
  std::string structure_name;
  std::string rule;
};

Classification classify(const ConeManifoldDescription& d);

struct MergeResult {
  PiMultiple sum;
  bool valid = false;
};

MergeResult merge_defects(const std::vector<PiMultiple>& defects);

}  // namespace cone_forge
