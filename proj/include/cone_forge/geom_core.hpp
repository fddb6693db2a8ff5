#pragma once

// Exact rational positions, float64 quaternions for Spin(3), and rigid
// motions of R^3 with an explicit spin lift.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace cone_forge {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;

/// Thrown when an operation is well-formed but not defined for its argument
/// (e.g. linking numbers of open arcs).
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Parses "p/q", "p" or "-p/q". Throws std::invalid_argument on bad input or
/// a zero denominator.
Rational parse_rational(std::string_view text);

/// Always emits "p/q" with q > 0, including q = 1.
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

/// Exact dyadic rational equal to a finite double.
Rational rational_from_double(double value);

enum class Axis : int { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::X, Axis::Y, Axis::Z};

inline int index(Axis a) { return static_cast<int>(a); }
char axis_name(Axis a);
Axis parse_axis(std::string_view name);

/// The two remaining axes in increasing order (used for AxisLine offsets).
std::array<Axis, 2> transverse_axes(Axis a);

/// The two remaining axes in cyclic order (a, a+1, a+2) -- a right-handed
/// frame for the plane orthogonal to a.
std::array<Axis, 2> cyclic_transverse_axes(Axis a);

Axis third_axis(Axis a, Axis b);

struct Vec3Q {
  Rational x, y, z;

  const Rational& operator[](Axis a) const;
  Rational& operator[](Axis a);

  friend Vec3Q operator+(const Vec3Q& a, const Vec3Q& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3Q operator-(const Vec3Q& a, const Vec3Q& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3Q operator*(const Rational& s, const Vec3Q& v) { return {s * v.x, s * v.y, s * v.z}; }
  friend bool operator==(const Vec3Q& a, const Vec3Q& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
  friend bool operator<(const Vec3Q& a, const Vec3Q& b);
};

Rational dot(const Vec3Q& a, const Vec3Q& b);
Vec3Q cross(const Vec3Q& a, const Vec3Q& b);
Rational det3(const Vec3Q& a, const Vec3Q& b, const Vec3Q& c);

struct Vec3 {
  double x = 0, y = 0, z = 0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
  friend Vec3 operator-(const Vec3& v) { return {-v.x, -v.y, -v.z}; }
};

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);
Vec3 to_vec3(const Vec3Q& v);
Vec3 unit_vector(Axis a);

/// Point of Spin(3) = S^3. The sign is meaningful: q and -q cover the same
/// rotation.
struct UnitQuaternion {
  double w = 1, i = 0, j = 0, k = 0;

  static UnitQuaternion identity() { return {1, 0, 0, 0}; }

  UnitQuaternion operator-() const { return {-w, -i, -j, -k}; }
  UnitQuaternion conjugate() const { return {w, -i, -j, -k}; }
  double norm() const { return std::sqrt(w * w + i * i + j * j + k * k); }
  UnitQuaternion normalized() const;

  /// Action of the SO(3) image on a vector.
  Vec3 rotate(const Vec3& v) const;

  friend UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b);
};

/// Returns (cos(angle/2), sin(angle/2) axis); the spherical distance to the
/// identity is |angle|/2 for angle in [-2pi, 2pi].
UnitQuaternion quat_from_axis_angle(const Vec3& axis, double angle);

/// Round-metric distance on S^3, in [0, pi].
double spin_distance(const UnitQuaternion& a, const UnitQuaternion& b);

/// True when the SO(3) image of q is the identity rotation.
bool is_rotation_identity(const UnitQuaternion& q, double tol = kDefaultTolerance);

/// +1 or -1 when q is within tol of +-identity, 0 otherwise.
int spin_sign(const UnitQuaternion& q, double tol = kDefaultTolerance);

/// Element of R^3 x| Spin(3), acting by p -> R(p) + t.
struct RigidMotion {
  UnitQuaternion rotation;
  Vec3 translation;

  static RigidMotion identity() { return {}; }
  Vec3 apply(const Vec3& p) const { return rotation.rotate(p) + translation; }
};

/// compose(a, b)(p) = a(b(p)); spin lifts multiply.
RigidMotion compose(const RigidMotion& a, const RigidMotion& b);
RigidMotion inverse(const RigidMotion& m);

/// Interval on the real line with optionally infinite endpoints.
struct Extent {
  std::optional<Rational> lower;  // nullopt = -infinity
  std::optional<Rational> upper;  // nullopt = +infinity

  bool is_segment() const { return lower && upper; }
  bool is_line() const { return !lower && !upper; }
  bool contains(const Rational& t) const;           // closed
  bool contains_interior(const Rational& t) const;  // open
  friend bool operator==(const Extent&, const Extent&) = default;
};

/// Line (or ray, or segment) parallel to a coordinate axis.
struct AxisLine {
  Axis axis = Axis::X;
  /// Coordinates in transverse_axes(axis) order.
  std::array<Rational, 2> offset;
  Extent extent;

  /// Transverse coordinate in a given axis (must differ from `axis`).
  const Rational& coordinate(Axis a) const;
  Vec3Q point_at(const Rational& t) const;
  friend bool operator==(const AxisLine&, const AxisLine&) = default;
};

/// Throws std::invalid_argument when the extent is empty or degenerate.
void check_axis_line(const AxisLine& line);

/// Rotation by `angle` about the line through `point` with direction
/// `direction` (normalized here; zero direction is rejected).
RigidMotion rotation_about_line(const Vec3& point, const Vec3& direction, double angle);
RigidMotion rotation_about_line(const AxisLine& line, double angle);

}  // namespace cone_forge
