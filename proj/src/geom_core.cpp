#include "cone_forge/geom_core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cone_forge {

namespace {

BigInt parse_integer(std::string_view text) {
  std::string_view digits = text;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  }
  return BigInt(std::string(text.front() == '+' ? text.substr(1) : text));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  BigInt num = parse_integer(text.substr(0, slash));
  BigInt den = parse_integer(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("rational with zero denominator: '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string format_rational(const Rational& value) {
  std::ostringstream out;
  out << boost::multiprecision::numerator(value) << '/' << boost::multiprecision::denominator(value);
  return out.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("rational_from_double: non-finite value");
  int exponent = 0;
  double mantissa = std::frexp(value, &exponent);
  // 53 bits of mantissa become an exact integer.
  auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  Rational result{BigInt(scaled)};
  exponent -= 53;
  BigInt power = BigInt(1) << std::abs(exponent);
  return exponent >= 0 ? result * Rational(power) : result / Rational(power);
}

char axis_name(Axis a) { return "xyz"[index(a)]; }

Axis parse_axis(std::string_view name) {
  if (name == "x" || name == "X") return Axis::X;
  if (name == "y" || name == "Y") return Axis::Y;
  if (name == "z" || name == "Z") return Axis::Z;
  throw std::invalid_argument("unknown axis '" + std::string(name) + "'");
}

std::array<Axis, 2> transverse_axes(Axis a) {
  switch (a) {
    case Axis::X: return {Axis::Y, Axis::Z};
    case Axis::Y: return {Axis::X, Axis::Z};
    case Axis::Z: return {Axis::X, Axis::Y};
  }
  throw std::logic_error("bad axis");
}

std::array<Axis, 2> cyclic_transverse_axes(Axis a) {
  return {kAxes[(index(a) + 1) % 3], kAxes[(index(a) + 2) % 3]};
}

Axis third_axis(Axis a, Axis b) {
  if (a == b) throw std::invalid_argument("third_axis: axes must differ");
  return kAxes[3 - index(a) - index(b)];
}

const Rational& Vec3Q::operator[](Axis a) const {
  switch (a) {
    case Axis::X: return x;
    case Axis::Y: return y;
    case Axis::Z: return z;
  }
  throw std::logic_error("bad axis");
}

Rational& Vec3Q::operator[](Axis a) { return const_cast<Rational&>(std::as_const(*this)[a]); }

bool operator<(const Vec3Q& a, const Vec3Q& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

Rational dot(const Vec3Q& a, const Vec3Q& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3Q cross(const Vec3Q& a, const Vec3Q& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

Rational det3(const Vec3Q& a, const Vec3Q& b, const Vec3Q& c) { return dot(cross(a, b), c); }

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 to_vec3(const Vec3Q& v) { return {to_double(v.x), to_double(v.y), to_double(v.z)}; }

Vec3 unit_vector(Axis a) {
  Vec3 v;
  (a == Axis::X ? v.x : a == Axis::Y ? v.y : v.z) = 1.0;
  return v;
}

UnitQuaternion UnitQuaternion::normalized() const {
  double n = norm();
  if (n == 0) throw std::invalid_argument("cannot normalize the zero quaternion");
  return {w / n, i / n, j / n, k / n};
}

UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
  return {a.w * b.w - a.i * b.i - a.j * b.j - a.k * b.k,
          a.w * b.i + a.i * b.w + a.j * b.k - a.k * b.j,
          a.w * b.j - a.i * b.k + a.j * b.w + a.k * b.i,
          a.w * b.k + a.i * b.j - a.j * b.i + a.k * b.w};
}

Vec3 UnitQuaternion::rotate(const Vec3& v) const {
  // v' = v + 2w (u x v) + 2 u x (u x v), u = vector part.
  Vec3 u{i, j, k};
  Vec3 t = 2.0 * cross(u, v);
  return v + w * t + cross(u, t);
}

UnitQuaternion quat_from_axis_angle(const Vec3& axis, double angle) {
  if (std::abs(norm(axis) - 1.0) > 1e-9) throw std::invalid_argument("quat_from_axis_angle: axis is not a unit vector");
  double s = std::sin(angle / 2);
  return UnitQuaternion{std::cos(angle / 2), s * axis.x, s * axis.y, s * axis.z}.normalized();
}

double spin_distance(const UnitQuaternion& a, const UnitQuaternion& b) {
  double inner = a.w * b.w + a.i * b.i + a.j * b.j + a.k * b.k;
  return std::acos(std::clamp(inner, -1.0, 1.0));
}

bool is_rotation_identity(const UnitQuaternion& q, double tol) { return spin_sign(q, tol) != 0; }

int spin_sign(const UnitQuaternion& q, double tol) {
  if (spin_distance(q, UnitQuaternion::identity()) <= tol) return 1;
  if (spin_distance(q, -UnitQuaternion::identity()) <= tol) return -1;
  return 0;
}

RigidMotion compose(const RigidMotion& a, const RigidMotion& b) {
  // a(b(p)) = Ra(Rb p + tb) + ta
  return {(a.rotation * b.rotation).normalized(), a.rotation.rotate(b.translation) + a.translation};
}

RigidMotion inverse(const RigidMotion& m) {
  UnitQuaternion inv = m.rotation.conjugate();
  return {inv, -inv.rotate(m.translation)};
}

bool Extent::contains(const Rational& t) const {
  return (!lower || *lower <= t) && (!upper || t <= *upper);
}

bool Extent::contains_interior(const Rational& t) const {
  return (!lower || *lower < t) && (!upper || t < *upper);
}

const Rational& AxisLine::coordinate(Axis a) const {
  auto t = transverse_axes(axis);
  if (a == t[0]) return offset[0];
  if (a == t[1]) return offset[1];
  throw std::invalid_argument("AxisLine::coordinate: axis is the line direction");
}

Vec3Q AxisLine::point_at(const Rational& t) const {
  Vec3Q p;
  auto tr = transverse_axes(axis);
  p[axis] = t;
  p[tr[0]] = offset[0];
  p[tr[1]] = offset[1];
  return p;
}

void check_axis_line(const AxisLine& line) {
  if (line.extent.is_segment() && !(*line.extent.lower < *line.extent.upper)) {
    throw std::invalid_argument("AxisLine: segment extent must have lower < upper");
  }
}

RigidMotion rotation_about_line(const Vec3& point, const Vec3& direction, double angle) {
  double n = norm(direction);
  if (n == 0) throw std::invalid_argument("rotation_about_line: zero direction");
  UnitQuaternion q = quat_from_axis_angle((1.0 / n) * direction, angle);
  // p -> R(p - c) + c
  return {q, point - q.rotate(point)};
}

RigidMotion rotation_about_line(const AxisLine& line, double angle) {
  check_axis_line(line);
  return rotation_about_line(to_vec3(line.point_at(Rational(0))), unit_vector(line.axis), angle);
}

}  // namespace cone_forge
