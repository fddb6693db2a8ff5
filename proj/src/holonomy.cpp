#include "cone_forge/holonomy.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cone_forge/far_section.hpp"

namespace cone_forge {

MeridianMotion meridian_motion(const MeridianDatum& m) {
  if (!(m.defect > 0 && m.defect < 2 * kPi)) throw std::invalid_argument("meridian defect must lie in (0, 2pi)");
  if (m.orientation != 1 && m.orientation != -1) throw std::invalid_argument("meridian orientation must be +1 or -1");
  double angle = m.orientation * m.defect;
  if (angle > kPi) angle -= 2 * kPi;
  if (angle < -kPi) angle += 2 * kPi;
  MeridianMotion out;
  out.motion = rotation_about_line(m.point, m.direction, angle);
  out.lift_distance = spin_distance(UnitQuaternion::identity(), out.motion.rotation);
  out.half_defect = m.defect / 2;
  return out;
}

const char* endpoint_class_name(EndpointClass c) {
  switch (c) {
    case EndpointClass::Identity: return "identity";
    case EndpointClass::Antipode: return "antipode";
    case EndpointClass::Other: return "other";
  }
  return "?";
}

SpinPath spin_path(const std::vector<MeridianDatum>& meridians, double tol) {
  if (meridians.empty()) throw std::invalid_argument("spin_path needs at least one meridian");
  SpinPath path;
  path.vertices.push_back(UnitQuaternion::identity());
  for (const auto& m : meridians) {
    UnitQuaternion next = (path.vertices.back() * meridian_motion(m).motion.rotation).normalized();
    double len = spin_distance(path.vertices.back(), next);
    path.segment_lengths.push_back(len);
    path.total_length += len;
    path.vertices.push_back(next);
  }
  int s = spin_sign(path.vertices.back(), tol);
  path.endpoint = s > 0 ? EndpointClass::Identity : s < 0 ? EndpointClass::Antipode : EndpointClass::Other;
  return path;
}

double geodesic_deviation(const SpinPath& path) {
  if (path.vertices.empty()) throw std::invalid_argument("geodesic_deviation of an empty path");
  double d = path.total_length - spin_distance(UnitQuaternion::identity(), path.vertices.back());
  return std::max(d, 0.0);
}

EndReport product_report(const std::vector<MeridianDatum>& meridians, double tol) {
  EndReport r;
  for (const auto& m : meridians) r.product = compose(r.product, meridian_motion(m).motion);
  r.rotation_identity = is_rotation_identity(r.product.rotation, tol);
  r.spin = r.rotation_identity ? spin_sign(r.product.rotation, tol) : 0;
  r.translation = r.product.translation;
  if (!meridians.empty()) {
    SpinPath path = spin_path(meridians, tol);
    r.path_length = path.total_length;
    r.deviation = geodesic_deviation(path);
    r.direction = (1 / norm(meridians.front().direction)) * meridians.front().direction;
  }
  r.passed = r.rotation_identity && r.spin == -1 && std::abs(r.path_length - kPi) <= tol && r.deviation <= tol;
  return r;
}

std::vector<int> cyclic_order(const std::vector<MeridianDatum>& meridians) {
  std::vector<int> order(meridians.size());
  std::iota(order.begin(), order.end(), 0);
  if (meridians.size() < 2) return order;
  Vec3 d = (1 / norm(meridians[0].direction)) * meridians[0].direction;
  Vec3 helper = std::abs(d.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 e1 = cross(helper, d);
  e1 = (1 / norm(e1)) * e1;
  Vec3 e2 = cross(d, e1);
  Vec3 c;
  for (const auto& m : meridians) c = c + m.point;
  c = (1.0 / static_cast<double>(meridians.size())) * c;
  std::vector<double> angle(meridians.size());
  for (std::size_t i = 0; i < meridians.size(); ++i) {
    Vec3 p = meridians[i].point - c;
    angle[i] = std::atan2(dot(p, e2), dot(p, e1));
  }
  // counterclockwise from the first entry
  const double base = angle[0];
  for (auto& a : angle) {
    a -= base;
    while (a < 0) a += 2 * kPi;
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return angle[a] < angle[b]; });
  return order;
}

EndReport end_product_check(const RealizedPattern& realized, int end, double tol) {
  if (end != 0 && end != 1) throw std::invalid_argument("end must be 0 or 1");
  return end_product_check(disc_ends(build_far_section(realized))[static_cast<std::size_t>(end)], end, tol);
}

EndReport end_product_check(const DiscEnd& de, int end, double tol) {
  if (de.rays.size() != 4) {
    throw std::invalid_argument("end " + std::to_string(end) + " has " + std::to_string(de.rays.size()) + " rays, expected 4");
  }
  std::vector<DevelopedRay> rays = de.rays;
  std::sort(rays.begin(), rays.end(), [](const DevelopedRay& a, const DevelopedRay& b) { return a.ray < b.ray; });
  std::vector<MeridianDatum> ms;
  for (const auto& r : rays) ms.push_back({to_vec3(r.point), to_vec3(de.direction), kPi / 2, 1});
  std::vector<MeridianDatum> ordered;
  EndReport out;
  for (int i : cyclic_order(ms)) {
    ordered.push_back(ms[static_cast<std::size_t>(i)]);
    out.edges.push_back(rays[static_cast<std::size_t>(i)].edge);
  }
  EndReport pr = product_report(ordered, tol);
  pr.end = end;
  pr.edges = std::move(out.edges);
  return pr;
}

}  // namespace cone_forge
