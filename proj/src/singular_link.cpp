#include "cone_forge/singular_link.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

namespace cone_forge {

namespace {

using P2 = std::array<Rational, 2>;

Rational abs_q(const Rational& r) { return r < 0 ? Rational(-r) : r; }

Rational max_norm(const Vec3Q& p) { return std::max({abs_q(p.x), abs_q(p.y), abs_q(p.z)}); }

// Point where the ray p + t d (t >= 0) leaves the cube of radius r.
Vec3Q exit_point(const Vec3Q& p, const Vec3Q& d, const Rational& r) {
  std::optional<Rational> best;
  for (Axis a : kAxes) {
    if (d[a] == 0) continue;
    Rational t = ((d[a] > 0 ? r : Rational(-r)) - p[a]) / d[a];
    if (!best || t < *best) best = t;
  }
  if (!best) throw std::invalid_argument("ray with zero direction");
  return p + *best * d;
}

Vec3Q axis_vector(Axis a, int sign) {
  Vec3Q v;
  v[a] = sign;
  return v;
}

Rational cross2(const P2& a, const P2& b) { return a[0] * b[1] - a[1] * b[0]; }
P2 sub2(const P2& a, const P2& b) { return {a[0] - b[0], a[1] - b[1]}; }
Rational dot2(const P2& a, const P2& b) { return a[0] * b[0] + a[1] * b[1]; }

int sgn(const Rational& r) { return r > 0 ? 1 : r < 0 ? -1 : 0; }

bool strand_less(const StrandPoint& a, const StrandPoint& b) {
  return std::tie(a.component, a.segment, a.param) < std::tie(b.component, b.segment, b.param);
}

}  // namespace

std::vector<Vec3Q> PolylineLink::clipped_points(std::size_t component) const {
  const auto& c = components.at(component);
  if (c.closed) return c.points;
  std::vector<Vec3Q> out;
  out.push_back(exit_point(c.points.front(), c.ray_directions[0], clip_radius));
  out.insert(out.end(), c.points.begin(), c.points.end());
  out.push_back(exit_point(c.points.back(), c.ray_directions[1], clip_radius));
  return out;
}

Rational bounding_radius(const PolylineLink& link) {
  Rational r(0);
  for (const auto& c : link.components)
    for (const auto& p : c.points) r = std::max(r, max_norm(p));
  return r;
}

PolylineLink extract_link(const RealizedPattern& rp, const Rational& clip_radius) {
  PolylineLink link;
  link.clip_radius = clip_radius;
  for (const auto& rc : rp.components) {
    LinkComponent lc;
    lc.edges = rc.edges;
    lc.closed = rc.kind == ComponentKind::Circle;
    for (const auto& j : rc.joints) lc.points.push_back(j.point);
    if (!lc.closed) {
      auto free_end = [&](int edge, int vertex) { return box::edge_endpoint(edge, 0) == vertex ? 0 : 1; };
      int first = rc.edges.front(), last = rc.edges.back();
      int s0 = free_end(first, rc.end_vertices[0]), s1 = free_end(last, rc.end_vertices[1]);
      lc.ray_directions[0] = axis_vector(box::edge_axis(first), s0 ? 1 : -1);
      lc.ray_directions[1] = axis_vector(box::edge_axis(last), s1 ? 1 : -1);
      if (rc.edges.size() == 1) {
        const AxisLine& line = rp.edges[static_cast<std::size_t>(first)].line;
        Vec3Q lo = line.point_at(0), hi = line.point_at(rp.box[line.axis]);
        lc.points = s0 ? std::vector<Vec3Q>{hi, lo} : std::vector<Vec3Q>{lo, hi};
      }
    }
    link.components.push_back(std::move(lc));
  }
  Rational r = bounding_radius(link);
  if (clip_radius <= r) {
    throw std::invalid_argument("clip radius " + format_rational(clip_radius) + " does not exceed the bounding radius " +
                                format_rational(r));
  }
  return link;
}

PolylineLink close_open_components(const PolylineLink& link) {
  PolylineLink out = link;
  const Rational& r = link.clip_radius;
  int k = 0;
  for (std::size_t c = 0; c < link.components.size(); ++c) {
    const auto& src = link.components[c];
    if (src.closed) continue;
    ++k;
    Rational height = 3 * r + k;
    auto far_path = [&](const Vec3Q& p, const Vec3Q& d) {
      std::vector<Vec3Q> path;
      Vec3Q q = p + ((r + k) / max_norm(d)) * d;
      path.push_back(q);
      if (d.x == 0 && d.y == 0 && d.z < 0) {
        q = q + Vec3Q{4 * r, Rational(k), Rational(0)};
        path.push_back(q);
      }
      path.push_back({q.x + Rational(k, 7), q.y + Rational(k, 11), height});
      return path;
    };
    auto pts = link.clipped_points(c);
    auto back = far_path(pts.back(), src.ray_directions[1]);
    auto front = far_path(pts.front(), src.ray_directions[0]);
    LinkComponent lc;
    lc.closed = true;
    lc.closure = true;
    lc.edges = src.edges;
    lc.points = pts;
    lc.points.insert(lc.points.end(), back.begin(), back.end());
    lc.points.insert(lc.points.end(), front.rbegin(), front.rend());
    out.components[c] = std::move(lc);
  }
  return out;
}

std::size_t LinkDiagram::crossings_between(int a, int b) const {
  return static_cast<std::size_t>(std::count_if(crossings.begin(), crossings.end(), [&](const Crossing& x) {
    return (x.over.component == a && x.under.component == b) || (x.over.component == b && x.under.component == a);
  }));
}

LinkDiagram project(const PolylineLink& link, const Vec3Q& n) {
  if (n == Vec3Q{}) throw std::invalid_argument("projection direction must be nonzero");
  Axis helper = Axis::X;
  for (Axis a : kAxes)
    if (abs_q(n[a]) < abs_q(n[helper])) helper = a;
  Vec3Q u = cross(n, axis_vector(helper, 1));
  Vec3Q w = cross(n, u);

  LinkDiagram dg;
  dg.direction = n;
  struct Seg {
    int comp, index;
    Vec3Q a, b;
    P2 pa, pb;
    int count;  // segments in the component
  };
  std::vector<Seg> segs;
  std::vector<std::vector<Vec3Q>> pts3;
  for (std::size_t c = 0; c < link.components.size(); ++c) {
    auto pts = link.clipped_points(c);
    bool closed = link.components[c].closed;
    if (pts.size() < (closed ? 3u : 2u)) throw std::invalid_argument("link component " + std::to_string(c) + " has too few points");
    std::vector<P2> proj;
    for (const auto& p : pts) proj.push_back({dot(p, u), dot(p, w)});
    int count = static_cast<int>(pts.size()) - (closed ? 0 : 1);
    for (int i = 0; i < count; ++i) {
      std::size_t j = (static_cast<std::size_t>(i) + 1) % pts.size();
      Seg s{static_cast<int>(c), i, pts[static_cast<std::size_t>(i)], pts[j], proj[static_cast<std::size_t>(i)], proj[j], count};
      if (s.pa == s.pb) throw NonGeneric("segment " + std::to_string(i) + " of component " + std::to_string(c) + " is seen end-on");
      segs.push_back(s);
    }
    dg.strands.push_back(std::move(proj));
    dg.closed.push_back(closed);
  }

  auto adjacent = [&](const Seg& s, const Seg& t, P2* shared, P2* sa, P2* ta) {
    if (s.comp != t.comp) return false;
    bool closed = dg.closed[static_cast<std::size_t>(s.comp)];
    if (t.index == s.index + 1 || (closed && s.index == s.count - 1 && t.index == 0)) {
      *shared = s.pb, *sa = s.pa, *ta = t.pb;
      return true;
    }
    if (s.index == t.index + 1 || (closed && t.index == t.count - 1 && s.index == 0)) {
      *shared = s.pa, *sa = s.pb, *ta = t.pa;
      return true;
    }
    return false;
  };

  std::set<P2> crossing_points;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      const Seg &s = segs[i], &t = segs[j];
      P2 shared, sa, ta;
      if (adjacent(s, t, &shared, &sa, &ta)) {
        P2 x = sub2(sa, shared), y = sub2(ta, shared);
        if (cross2(x, y) == 0 && dot2(x, y) > 0) throw NonGeneric("adjacent segments overlap in projection");
        continue;
      }
      P2 r = sub2(s.pb, s.pa), v = sub2(t.pb, t.pa), qp = sub2(t.pa, s.pa);
      Rational den = cross2(r, v);
      if (den == 0) {
        if (cross2(qp, r) != 0) continue;
        Rational rr = dot2(r, r);
        Rational t0 = dot2(qp, r) / rr, t1 = dot2(sub2(t.pb, s.pa), r) / rr;
        if (std::max(t0, t1) >= 0 && std::min(t0, t1) <= 1) throw NonGeneric("collinear segments overlap in projection");
        continue;
      }
      Rational ps = cross2(qp, v) / den, pt = cross2(qp, r) / den;
      if (ps < 0 || ps > 1 || pt < 0 || pt > 1) continue;
      if (ps == 0 || ps == 1 || pt == 0 || pt == 1) throw NonGeneric("crossing at a polyline vertex");
      Vec3Q xs = s.a + ps * (s.b - s.a), xt = t.a + pt * (t.b - t.a);
      Rational ds = dot(xs, n), dt = dot(xt, n);
      if (ds == dt) throw NonGeneric("strands intersect");
      P2 at{s.pa[0] + ps * r[0], s.pa[1] + ps * r[1]};
      if (!crossing_points.insert(at).second) throw NonGeneric("triple point");
      StrandPoint a{s.comp, s.index, ps}, b{t.comp, t.index, pt};
      Crossing c;
      bool s_over = ds > dt;
      c.over = s_over ? a : b;
      c.under = s_over ? b : a;
      Vec3Q to = s_over ? s.b - s.a : t.b - t.a, tu = s_over ? t.b - t.a : s.b - s.a;
      c.sign = sgn(det3(to, tu, n));
      dg.crossings.push_back(c);
    }
  }
  std::sort(dg.crossings.begin(), dg.crossings.end(), [](const Crossing& x, const Crossing& y) {
    auto key = [](const Crossing& c) {
      return strand_less(c.over, c.under) ? std::pair{c.over, c.under} : std::pair{c.under, c.over};
    };
    auto kx = key(x), ky = key(y);
    if (strand_less(kx.first, ky.first)) return true;
    if (strand_less(ky.first, kx.first)) return false;
    return strand_less(kx.second, ky.second);
  });

  dg.gauss_codes.resize(link.components.size());
  for (std::size_t c = 0; c < link.components.size(); ++c) {
    std::vector<std::pair<StrandPoint, GaussEntry>> hits;
    for (std::size_t x = 0; x < dg.crossings.size(); ++x) {
      const auto& cr = dg.crossings[x];
      if (cr.over.component == static_cast<int>(c)) hits.push_back({cr.over, {static_cast<int>(x), true, cr.sign}});
      if (cr.under.component == static_cast<int>(c)) hits.push_back({cr.under, {static_cast<int>(x), false, cr.sign}});
    }
    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return strand_less(a.first, b.first); });
    for (const auto& h : hits) dg.gauss_codes[c].push_back(h.second);
  }

  for (std::size_t c = 0; c < link.components.size(); ++c)
    if (dg.closed[c]) dg.closed_components.push_back(static_cast<int>(c));
  std::size_t m = dg.closed_components.size();
  dg.linking_matrix.assign(m, std::vector<int>(m, 0));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      int sum = 0;
      for (const auto& cr : dg.crossings) {
        int ca = dg.closed_components[a], cb = dg.closed_components[b];
        if ((cr.over.component == ca && cr.under.component == cb) || (cr.over.component == cb && cr.under.component == ca)) sum += cr.sign;
      }
      if (sum % 2 != 0) throw std::logic_error("odd signed crossing sum between closed components");
      dg.linking_matrix[a][b] = dg.linking_matrix[b][a] = sum / 2;
    }
  }
  return dg;
}

Vec3Q projection_direction(std::uint64_t seed, int attempt) {
  std::mt19937_64 gen(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(attempt) + 1);
  while (true) {
    std::array<long, 3> c{};
    for (auto& x : c) x = static_cast<long>(gen() % 195) - 97;
    if (c[0] && c[1] && c[2]) return {Rational(c[0]), Rational(c[1]), Rational(c[2])};
  }
}

GenericProjection project_generic(const PolylineLink& link, std::uint64_t seed, int max_attempts) {
  std::string last;
  for (int k = 0; k < max_attempts; ++k) {
    try {
      return {project(link, projection_direction(seed, k)), k + 1};
    } catch (const NonGeneric& e) {
      last = e.what();
    }
  }
  throw NonGeneric("no generic projection in " + std::to_string(max_attempts) + " attempts (last: " + last + ")");
}

std::vector<std::vector<int>> linking_matrix(const LinkDiagram& diagram) { return diagram.linking_matrix; }

int linking_number(const LinkDiagram& diagram, int a, int b) {
  auto pos = [&](int c) {
    auto it = std::find(diagram.closed_components.begin(), diagram.closed_components.end(), c);
    if (it == diagram.closed_components.end()) {
      throw UnsupportedOperation("linking number of component " + std::to_string(c) + ", which is not closed");
    }
    return static_cast<std::size_t>(it - diagram.closed_components.begin());
  };
  return diagram.linking_matrix[pos(a)][pos(b)];
}

std::string gauss_code_string(const std::vector<GaussEntry>& code) {
  std::string s;
  for (const auto& g : code) {
    if (!s.empty()) s += ' ';
    s += (g.over ? 'O' : 'U') + std::to_string(g.crossing + 1) + (g.sign > 0 ? '+' : '-');
  }
  return s;
}

std::string diagram_svg(const LinkDiagram& dg) {
  double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
  for (const auto& s : dg.strands)
    for (const auto& p : s)
      for (int k = 0; k < 2; ++k) {
        double v = to_double(p[static_cast<std::size_t>(k)]);
        lo[k] = std::min(lo[k], v);
        hi[k] = std::max(hi[k], v);
      }
  double span = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-12});
  double size = 480, pad = 10, scale = (size - 2 * pad) / span, gap = 0.025 * span;
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  auto X = [&](double x) { return fmt(pad + (x - lo[0]) * scale); };
  auto Y = [&](double y) { return fmt(size - pad - (y - lo[1]) * scale); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << ' '
      << size << "\">\n";
  for (std::size_t c = 0; c < dg.strands.size(); ++c) {
    const auto& s = dg.strands[c];
    std::size_t count = dg.closed[c] ? s.size() : s.size() - 1;
    for (std::size_t i = 0; i < count; ++i) {
      double ax = to_double(s[i][0]), ay = to_double(s[i][1]);
      double bx = to_double(s[(i + 1) % s.size()][0]), by = to_double(s[(i + 1) % s.size()][1]);
      double len = std::hypot(bx - ax, by - ay);
      std::vector<double> cuts;
      for (const auto& cr : dg.crossings)
        if (cr.under.component == static_cast<int>(c) && cr.under.segment == static_cast<int>(i)) cuts.push_back(to_double(cr.under.param));
      std::sort(cuts.begin(), cuts.end());
      double g = len > 0 ? gap / len : 0, t0 = 0;
      std::vector<std::pair<double, double>> pieces;
      for (double t : cuts) {
        if (t - g > t0) pieces.push_back({t0, t - g});
        t0 = t + g;
      }
      if (t0 < 1) pieces.push_back({t0, 1});
      for (auto [p, q] : pieces) {
        out << "<path d=\"M " << X(ax + p * (bx - ax)) << ' ' << Y(ay + p * (by - ay)) << " L " << X(ax + q * (bx - ax)) << ' '
            << Y(ay + q * (by - ay)) << "\" stroke=\"" << palette[c % 8] << "\" stroke-width=\"2\" fill=\"none\"/>\n";
      }
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace cone_forge
