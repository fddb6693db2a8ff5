#include "cone_forge/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace cone_forge {

PiMultiple pi_times(const Rational& r) { return {r}; }

PiMultiple pi_times(long p, long q) { return {Rational(p) / Rational(q)}; }

PiMultiple parse_pi_multiple(std::string_view text) {
  std::string s(text);
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    s.resize(s.size() - 2);
    if (s.empty() || s == "+") return {Rational(1)};
    if (s == "-") return {Rational(-1)};
    if (s.back() == '*') s.pop_back();
  }
  return {parse_rational(s)};
}

std::string format_pi_multiple(const PiMultiple& a) { return format_rational(a.coeff) + "pi"; }

PiMultiple sum(const std::vector<PiMultiple>& xs) {
  PiMultiple s{Rational(0)};
  for (const auto& x : xs) s = s + x;
  return s;
}

std::vector<SideRef> TriangulatedFlatSurface::boundary() const {
  std::set<SideRef> glued;
  for (const auto& g : gluings) {
    glued.insert(g.a);
    glued.insert(g.b);
  }
  std::vector<SideRef> out;
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t)
    for (int s = 0; s < 3; ++s)
      if (!glued.count({t, s})) out.push_back({t, s});
  return out;
}

int TriangulatedFlatSurface::vertex_count() const {
  std::set<int> vs;
  for (const auto& t : triangles) vs.insert(t.vertices.begin(), t.vertices.end());
  return static_cast<int>(vs.size());
}

double triangle_angle(const SurfaceTriangle& t, int k) {
  double a = to_double(t.squared_lengths[static_cast<std::size_t>(k)]);
  double b = to_double(t.squared_lengths[static_cast<std::size_t>((k + 1) % 3)]);
  double c = to_double(t.squared_lengths[static_cast<std::size_t>((k + 2) % 3)]);
  double cosine = (a + c - b) / (2 * std::sqrt(a * c));
  return std::acos(std::clamp(cosine, -1.0, 1.0));
}

namespace {

std::pair<int, int> side_ends(const SurfaceTriangle& t, int s) {
  return {t.vertices[static_cast<std::size_t>(s)], t.vertices[static_cast<std::size_t>((s + 1) % 3)]};
}

void check_surface(const TriangulatedFlatSurface& surf) {
  for (std::size_t i = 0; i < surf.triangles.size(); ++i) {
    const auto& sq = surf.triangles[i].squared_lengths;
    // 16 area^2 in terms of squared side lengths
    Rational area16 = 2 * (sq[0] * sq[1] + sq[1] * sq[2] + sq[2] * sq[0]) - (sq[0] * sq[0] + sq[1] * sq[1] + sq[2] * sq[2]);
    if (area16 <= 0 || sq[0] <= 0 || sq[1] <= 0 || sq[2] <= 0) {
      throw std::invalid_argument("triangle " + std::to_string(i) + " is degenerate");
    }
  }
  std::set<SideRef> used;
  for (const auto& g : surf.gluings) {
    for (const SideRef& r : {g.a, g.b}) {
      if (r.triangle < 0 || r.triangle >= static_cast<int>(surf.triangles.size()) || r.side < 0 || r.side > 2) {
        throw std::invalid_argument("gluing refers to a missing side");
      }
      if (!used.insert(r).second) {
        throw std::invalid_argument("side " + std::to_string(r.side) + " of triangle " + std::to_string(r.triangle) + " glued twice");
      }
    }
    const auto &ta = surf.triangles[static_cast<std::size_t>(g.a.triangle)], &tb = surf.triangles[static_cast<std::size_t>(g.b.triangle)];
    if (ta.squared_lengths[static_cast<std::size_t>(g.a.side)] != tb.squared_lengths[static_cast<std::size_t>(g.b.side)]) {
      throw std::invalid_argument("glued sides have different lengths (triangles " + std::to_string(g.a.triangle) + " and " +
                                  std::to_string(g.b.triangle) + ")");
    }
    auto [a0, a1] = side_ends(ta, g.a.side);
    auto [b0, b1] = side_ends(tb, g.b.side);
    if (std::minmax(a0, a1) != std::minmax(b0, b1)) throw std::invalid_argument("glued sides have different endpoints");
  }
}

}  // namespace

GaussBonnetReport gauss_bonnet(const TriangulatedFlatSurface& surf) {
  check_surface(surf);
  std::map<int, double> angle;
  std::set<int> on_boundary;
  for (const auto& t : surf.triangles)
    for (int k = 0; k < 3; ++k) angle[t.vertices[static_cast<std::size_t>(k)]] += triangle_angle(t, k);
  for (const auto& s : surf.boundary()) {
    auto [a, b] = side_ends(surf.triangles[static_cast<std::size_t>(s.triangle)], s.side);
    on_boundary.insert(a);
    on_boundary.insert(b);
  }
  GaussBonnetReport r;
  for (const auto& [v, a] : angle) {
    bool bd = on_boundary.count(v) > 0;
    VertexAngle va{v, bd, a, (bd ? kPi : 2 * kPi) - a};
    (bd ? r.boundary_turning_sum : r.interior_defect_sum) += va.defect;
    r.vertices.push_back(va);
  }
  int f = static_cast<int>(surf.triangles.size());
  int e = 3 * f - static_cast<int>(surf.gluings.size());
  r.euler_characteristic = static_cast<int>(angle.size()) - e + f;
  r.residual = std::abs(r.interior_defect_sum + r.boundary_turning_sum - 2 * kPi * r.euler_characteristic);
  return r;
}

namespace {

void check_defect(const PiMultiple& d) {
  if (d.coeff <= 0 || d.coeff >= 2) throw std::invalid_argument("defect " + format_pi_multiple(d) + " outside (0, 2pi)");
}

}  // namespace

bool disc_metric_exists(const std::vector<PiMultiple>& defects) {
  for (const auto& d : defects) check_defect(d);
  return defects.size() >= 2 && sum(defects).coeff == 2;
}

DoubledDisc build_doubled_disc(const std::vector<PiMultiple>& thetas) {
  Rational turning(0);
  for (const auto& t : thetas) {
    if (t.coeff <= 0 || t.coeff >= 1) throw std::invalid_argument("corner angle " + format_pi_multiple(t) + " outside (0, pi)");
    turning += 1 - t.coeff;
  }
  if (turning != 1) throw std::invalid_argument("exterior angles sum to " + format_rational(turning) + "pi, expected pi");

  std::size_t n = thetas.size();
  std::vector<std::array<Rational, 2>> p(n);
  double x = 0, y = 0, phi = -kPi / 2;
  Rational gone(0);
  Rational top = 0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = {rational_from_double(x), rational_from_double(y)};
    top = std::max(top, p[i][1]);
    gone += 1 - thetas[i].coeff;
    phi = -kPi / 2 + to_double(gone) * kPi;
    x += std::cos(phi);
    y += std::sin(phi);
  }
  top += 1;
  // polygon A, P0 .. P(n-1), B with ids 0 .. n+1
  std::vector<std::array<Rational, 2>> poly;
  poly.push_back({p.front()[0], top});
  poly.insert(poly.end(), p.begin(), p.end());
  poly.push_back({p.back()[0], top});
  auto sq = [&](int a, int b) {
    Rational dx = poly[static_cast<std::size_t>(a)][0] - poly[static_cast<std::size_t>(b)][0];
    Rational dy = poly[static_cast<std::size_t>(a)][1] - poly[static_cast<std::size_t>(b)][1];
    return Rational(dx * dx + dy * dy);
  };
  auto tri = [&](int a, int b, int c) { return SurfaceTriangle{{a, b, c}, {sq(a, b), sq(b, c), sq(c, a)}}; };

  DoubledDisc out;
  auto& s = out.surface;
  int fan = static_cast<int>(n);  // triangles per copy
  for (int k = 1; k <= fan; ++k) s.triangles.push_back(tri(0, k, k + 1));
  for (int k = 1; k <= fan; ++k) s.triangles.push_back(tri(0, k + 1, k));
  auto up = [](int k) { return k - 1; };
  auto down = [fan](int k) { return fan + k - 1; };
  for (int k = 1; k < fan; ++k) {
    s.gluings.push_back({{up(k), 2}, {up(k + 1), 0}});
    s.gluings.push_back({{down(k), 0}, {down(k + 1), 2}});
  }
  s.gluings.push_back({{up(1), 0}, {down(1), 2}});
  for (int k = 1; k <= fan; ++k) s.gluings.push_back({{up(k), 1}, {down(k), 1}});

  for (std::size_t i = 0; i < n; ++i) {
    out.cone_angles.push_back({2 * thetas[i].coeff});
    out.defects.push_back({2 * (1 - thetas[i].coeff)});
    out.cone_vertices.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

const char* variant_name(const ConeManifoldDescription& d) {
  static const char* names[] = {"soul_dim2_sphere", "soul_dim2_projective", "soul_dim1", "soul_dim0_lines",
                                "example1", "example2", "edge_pattern"};
  return names[d.index()];
}

std::vector<PiMultiple> all_defects(const ConeManifoldDescription& d) {
  struct V {
    std::vector<PiMultiple> operator()(const SoulDim2Sphere& x) const { return x.defects; }
    std::vector<PiMultiple> operator()(const SoulDim2Projective& x) const { return x.defects; }
    std::vector<PiMultiple> operator()(const SoulDim1& x) const {
      std::vector<PiMultiple> out;
      for (const auto& p : x.plane_defects) out.push_back(p.defect);
      return out;
    }
    std::vector<PiMultiple> operator()(const SoulDim0Lines& x) const { return x.line_defects; }
    std::vector<PiMultiple> operator()(const Example1& x) const {
      auto out = x.disc_defects;
      out.insert(out.end(), x.closed_defects.begin(), x.closed_defects.end());
      return out;
    }
    std::vector<PiMultiple> operator()(const Example2& x) const { return x.closed_defects; }
    std::vector<PiMultiple> operator()(const EdgePatternType&) const { return std::vector<PiMultiple>(kEdgeCount, pi_times(1, 2)); }
  };
  return std::visit(V{}, d);
}

long component_cap(const PiMultiple& budget, const PiMultiple& c) {
  if (c.coeff >= 2) throw std::invalid_argument("angle cap must be below 2pi");
  Rational q = budget.coeff / (2 - c.coeff);
  BigInt fl = numerator(q) / denominator(q);
  if (q < 0 && fl * denominator(q) != numerator(q)) fl -= 1;
  return static_cast<long>(fl);
}

BudgetReport validate_description(const ConeManifoldDescription& d, const PiMultiple& c) {
  if (c.coeff >= 2) throw std::invalid_argument("angle cap must be below 2pi");
  for (const auto& x : all_defects(d)) {
    check_defect(x);
    if (pi_times(2) - x > c) {
      throw std::invalid_argument("cone angle " + format_pi_multiple(pi_times(2) - x) + " exceeds the cap " + format_pi_multiple(c));
    }
  }
  BudgetReport r;
  auto fail = [&](std::string why) { r.violations.push_back(std::move(why)); };
  auto need = [&](bool ok, const std::string& why) {
    if (!ok) fail(why);
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SoulDim2Sphere>) {
          r.budget = pi_times(4);
          need(sum(x.defects) == r.budget, "sphere defects sum to " + format_pi_multiple(sum(x.defects)) + ", expected 4pi");
        } else if constexpr (std::is_same_v<T, SoulDim2Projective>) {
          r.budget = pi_times(2);
          need(sum(x.defects) == r.budget, "projective plane defects sum to " + format_pi_multiple(sum(x.defects)) + ", expected 2pi");
        } else if constexpr (std::is_same_v<T, SoulDim1>) {
          r.budget = pi_times(2);
          auto s = sum(all_defects(d));
          need(s < r.budget, "plane defects sum to " + format_pi_multiple(s) + ", expected less than 2pi");
          bool off_axis = std::any_of(x.plane_defects.begin(), x.plane_defects.end(), [](const auto& p) { return !p.on_rotation_axis; });
          need(!off_axis || x.rotation_order.has_value(), "cone points off the rotation axis need a rotation of finite order");
          if (x.rotation_order && *x.rotation_order < 1) fail("rotation order must be positive");
        } else if constexpr (std::is_same_v<T, SoulDim0Lines>) {
          r.budget = pi_times(2);
          need(sum(x.line_defects) <= r.budget, "line defects sum to " + format_pi_multiple(sum(x.line_defects)) + ", exceeding 2pi");
        } else if constexpr (std::is_same_v<T, Example1>) {
          r.budget = pi_times(1);
          need(disc_metric_exists(x.disc_defects), "disc defects sum to " + format_pi_multiple(sum(x.disc_defects)) + ", expected 2pi");
          need(sum(x.closed_defects) <= r.budget, "closed defects sum to " + format_pi_multiple(sum(x.closed_defects)) + ", exceeding pi");
        } else if constexpr (std::is_same_v<T, Example2>) {
          if (x.n < 1) throw std::invalid_argument("n must be a positive integer");
          r.budget = pi_times(1, x.n);
          need(sum(x.closed_defects) <= r.budget,
               "closed defects sum to " + format_pi_multiple(sum(x.closed_defects)) + ", exceeding " + format_pi_multiple(r.budget));
        } else {
          r.budget = pi_times(2);
          x.box.check();
          auto v = validate(x.pattern);
          need(v.valid, "pattern is not valid: " + v.reason);
        }
      },
      d);
  r.component_cap = component_cap(r.budget, c);
  r.passed = r.violations.empty();
  return r;
}

Classification classify(const ConeManifoldDescription& d) {
  Classification out;
  auto defects = all_defects(d);
  for (const auto& x : defects)
    if (x.coeff <= 0 || x.coeff >= 2) return out;
  PiMultiple cap = pi_times(0);
  for (const auto& x : defects) cap = std::max(cap, pi_times(2) - x);
  BudgetReport br;
  try {
    br = validate_description(d, cap);
  } catch (const std::invalid_argument&) {
    return out;
  }
  if (!br.passed) return out;

  bool below = std::all_of(defects.begin(), defects.end(), [](const PiMultiple& x) { return x.coeff > Rational(1, 2); });
  bool closed = false;
  if (auto* e1 = std::get_if<Example1>(&d)) closed = !e1->closed_defects.empty();
  if (auto* e2 = std::get_if<Example2>(&d)) closed = !e2->closed_defects.empty();
  if (std::holds_alternative<EdgePatternType>(d)) closed = true;

  out.classified = true;
  switch (d.index()) {
    case 0:
      out.soul_dimension = 2;
      out.structure_name = "product with a Euclidean 2-sphere";
      out.rule = "soul of dimension 2, orientable: sphere defects add up to 4pi";
      return out;
    case 1:
      out.soul_dimension = 2;
      out.structure_name = "twisted product over a Euclidean projective plane";
      out.rule = "soul of dimension 2, non-orientable: defects add up to 2pi";
      return out;
    case 2:
      out.soul_dimension = 1;
      out.structure_name = "metric suspension of a rotation of a flat plane";
      out.rule = "soul of dimension 1: plane defects below 2pi";
      return out;
    case 3:
      out.soul_dimension = 0;
      out.structure_name = "non-compact singular components only";
      out.rule = "soul a point: defects of the non-compact components add up to at most 2pi";
      return out;
    default:
      break;
  }
  out.soul_dimension = 0;
  if (closed && below) {
    out.structure_name = "Example 1";
    out.rule = "soul a point, compact singular component, all cone angles below 3pi/2";
  } else if (std::holds_alternative<EdgePatternType>(d)) {
    out.structure_name = "edge pattern in a parallelepiped";
    out.rule = "soul a point, compact singular component, all cone angles 3pi/2";
  } else if (std::holds_alternative<Example1>(d)) {
    out.structure_name = "Example 1";
    out.rule = "disc product with closed parallel singular geodesics";
  } else {
    out.structure_name = "Example 2";
    out.rule = "folded slab with closed singular geodesics, defects at most pi/n";
  }
  return out;
}

MergeResult merge_defects(const std::vector<PiMultiple>& defects) {
  MergeResult r{sum(defects), false};
  r.valid = r.sum.coeff < 2;
  return r;
}

}  // namespace cone_forge
