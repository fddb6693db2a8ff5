#pragma once

// Meridian holonomy in R^3 x| Spin(3) and the piecewise geodesic path
// Id, A1, A1A2, ... in S^3 built from the meridian lifts.

#include <array>
#include <string>
#include <vector>

#include "cone_forge/geom_core.hpp"
#include "cone_forge/far_section.hpp"
#include "cone_forge/realize.hpp"

namespace cone_forge {

struct MeridianDatum {
  Vec3 point;
  Vec3 direction;  // any nonzero vector; normalized on use
  double defect = kPi / 2;
  int orientation = 1;  // +1: right-handed about direction
};

struct MeridianMotion {
  RigidMotion motion;
  /// Spin distance of the short lift from the identity.
  double lift_distance = 0;
  /// defect / 2; equals lift_distance when defect <= pi.
  double half_defect = 0;
};

/// Throws std::invalid_argument for a defect outside (0, 2pi), a zero
/// direction or an orientation other than +-1.
MeridianMotion meridian_motion(const MeridianDatum& m);

enum class EndpointClass { Identity, Antipode, Other };

const char* endpoint_class_name(EndpointClass c);

struct SpinPath {
  std::vector<UnitQuaternion> vertices;  // Id, A1, A1A2, ...
  std::vector<double> segment_lengths;
  double total_length = 0;
  EndpointClass endpoint = EndpointClass::Other;
};

/// Throws std::invalid_argument on an empty list.
SpinPath spin_path(const std::vector<MeridianDatum>& meridians, double tol = kDefaultTolerance);

/// Total length minus the distance from Id to the endpoint; zero exactly for
/// a minimizing path.
double geodesic_deviation(const SpinPath& path);

struct EndReport {
  int end = 0;
  Vec3 direction;           // outgoing direction of the end's rays
  std::vector<int> edges;   // ray edges in the cyclic order used for the product
  RigidMotion product;      // A1 A2 A3 A4
  bool rotation_identity = false;
  int spin = 0;             // +1, -1, or 0 when the SO(3) part is not the identity
  Vec3 translation;
  double path_length = 0;
  double deviation = 0;
  bool passed = false;      // SO(3) identity, spin -1, path length pi, deviation 0
};

/// Product of meridian motions in the given order (first factor applied
/// last), with the spin path diagnostics.
EndReport product_report(const std::vector<MeridianDatum>& meridians, double tol = kDefaultTolerance);

/// Orders meridians with parallel axes counterclockwise about the common
/// direction, starting from the first entry.
std::vector<int> cyclic_order(const std::vector<MeridianDatum>& meridians);

/// Holonomy of the given disc end (0 or 1) of a realized pattern. The rays
/// escaping through the end are developed into one chart; their meridians
/// are right-handed about the outgoing direction and taken in cyclic order.
/// Throws std::invalid_argument unless the end has exactly 4 rays, and
/// std::domain_error when the far section cannot be built.
EndReport end_product_check(const RealizedPattern& realized, int end, double tol = kDefaultTolerance);

/// Same check on an already developed end.
EndReport end_product_check(const DiscEnd& de, int end, double tol = kDefaultTolerance);

}  // namespace cone_forge
