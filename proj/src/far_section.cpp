#include "cone_forge/far_section.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace cone_forge {

namespace {

Vec3Q unit(Axis a, int sign = 1) {
  Vec3Q v{0, 0, 0};
  v[a] = sign;
  return v;
}

using Dir2 = std::array<int, 2>;

Dir2 rot90(const Dir2& d) { return {-d[1], d[0]}; }

}  // namespace

AxisIsometry AxisIsometry::quarter_turn(Axis axis, const Vec3Q& point, const Vec3Q& from, const Vec3Q& to) {
  if (dot(from, to) != 0 || from[axis] != 0 || to[axis] != 0) {
    throw std::invalid_argument("quarter_turn: directions must be orthogonal to each other and to the axis");
  }
  const Vec3Q n = unit(axis);
  const Vec3Q third_from = cross(n, from), third_to = cross(n, to);
  AxisIsometry g;
  for (Axis c : kAxes) {
    Vec3Q e = unit(c), image;
    if (c == axis) image = n;
    else if (dot(e, from) != 0) image = dot(e, from) * to;
    else image = dot(e, third_from) * third_to;
    for (Axis r : kAxes) g.m[static_cast<std::size_t>(index(r))][static_cast<std::size_t>(index(c))] = static_cast<int>(image[r]);
  }
  g.t = point - g.apply_linear(point);
  return g;
}

Vec3Q AxisIsometry::apply_linear(const Vec3Q& v) const {
  Vec3Q out{0, 0, 0};
  for (Axis r : kAxes)
    for (Axis c : kAxes) {
      int coef = m[static_cast<std::size_t>(index(r))][static_cast<std::size_t>(index(c))];
      if (coef) out[r] += coef * v[c];
    }
  return out;
}

Vec3Q AxisIsometry::apply(const Vec3Q& p) const { return apply_linear(p) + t; }

AxisIsometry AxisIsometry::inverse() const {
  AxisIsometry g;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) g.m[r][c] = m[c][r];
  g.t = Rational(-1) * g.apply_linear(t);
  return g;
}

AxisIsometry compose(const AxisIsometry& a, const AxisIsometry& b) {
  AxisIsometry g;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      int s = 0;
      for (std::size_t k = 0; k < 3; ++k) s += a.m[r][k] * b.m[k][c];
      g.m[r][c] = s;
    }
  g.t = a.apply(b.t);
  return g;
}

Vec3Q FarDirection::vector() const { return unit(axis, sign); }

std::string FarDirection::name() const { return std::string(sign > 0 ? "+" : "-") + axis_name(axis); }

FarDirection FarDirection::from_plane(int plane) {
  if (plane < 0 || plane >= 6) throw std::invalid_argument("far plane index out of range");
  return {kAxes[static_cast<std::size_t>(plane / 2)], plane % 2 ? -1 : 1};
}

FarDirection FarDirection::from_vector(const Vec3Q& v) {
  for (Axis a : kAxes) {
    if (v[a] == 1 || v[a] == -1) {
      Vec3Q rest = v;
      rest[a] = 0;
      if (rest == Vec3Q{0, 0, 0}) return {a, v[a] > 0 ? 1 : -1};
    }
  }
  throw std::invalid_argument("not a signed coordinate direction");
}

std::array<Axis, 2> far_plane_axes(int plane) {
  FarDirection d = FarDirection::from_plane(plane);
  auto c = cyclic_transverse_axes(d.axis);
  return d.sign > 0 ? c : std::array<Axis, 2>{c[1], c[0]};
}

namespace {

Vec3Q to3(int plane, const std::array<Rational, 2>& x) {
  auto ax = far_plane_axes(plane);
  Vec3Q p{0, 0, 0};
  p[ax[0]] = x[0];
  p[ax[1]] = x[1];
  return p;
}

std::array<Rational, 2> from3(int plane, const Vec3Q& p) {
  auto ax = far_plane_axes(plane);
  return {p[ax[0]], p[ax[1]]};
}

Vec3Q dir3(int plane, const Dir2& d) {
  auto ax = far_plane_axes(plane);
  return Rational(d[0]) * unit(ax[0]) + Rational(d[1]) * unit(ax[1]);
}

Dir2 dir2(int plane, const Vec3Q& v) {
  auto ax = far_plane_axes(plane);
  return {static_cast<int>(v[ax[0]]), static_cast<int>(v[ax[1]])};
}

// Closed axis-aligned region of a cross-section plane.
struct Region {
  std::array<std::optional<Rational>, 2> lo, hi;
  int sector = 0;

  bool contains(const std::array<Rational, 2>& x) const {
    for (std::size_t k = 0; k < 2; ++k) {
      if (lo[k] && x[k] < *lo[k]) return false;
      if (hi[k] && x[k] > *hi[k]) return false;
    }
    return true;
  }
};

// Cross-section far out along `d` of the sector of an edge, if the sector
// reaches that far.
std::optional<Region> cross_section(const SectorSpec& s, const FarDirection& d) {
  auto t = transverse_axes(s.axis);
  auto ax = far_plane_axes(d.plane());
  Region r;
  r.sector = s.edge;
  auto half_line = [&](std::size_t k, std::size_t j) {
    if (s.quadrant[j] > 0) r.lo[k] = s.apex[j];
    else r.hi[k] = s.apex[j];
  };
  if (s.axis == d.axis) {
    if (d.sign > 0 ? s.longitudinal.upper.has_value() : s.longitudinal.lower.has_value()) return std::nullopt;
    for (std::size_t k = 0; k < 2; ++k) half_line(k, ax[k] == t[0] ? 0 : 1);
    return r;
  }
  std::size_t far = d.axis == t[0] ? 0 : 1;
  if (s.quadrant[far] != d.sign) return std::nullopt;
  for (std::size_t k = 0; k < 2; ++k) {
    if (ax[k] == s.axis) {
      r.lo[k] = s.longitudinal.lower;
      r.hi[k] = s.longitudinal.upper;
    } else {
      half_line(k, 1 - far);
    }
  }
  return r;
}

// Quarter turn folding face F0 = {t0 = apex0} onto F1 = {t1 = apex1}.
AxisIsometry fold(const SectorSpec& s) {
  auto t = transverse_axes(s.axis);
  Vec3Q apex{0, 0, 0};
  apex[t[0]] = s.apex[0];
  apex[t[1]] = s.apex[1];
  return AxisIsometry::quarter_turn(s.axis, apex, unit(t[1], s.quadrant[1]), unit(t[0], s.quadrant[0]));
}

struct PlaneGrid {
  std::array<std::vector<Rational>, 2> breaks;
  std::vector<int> cell_id;  // (nq+1) * i + j, -1 when removed

  int count(std::size_t k) const { return static_cast<int>(breaks[k].size()) + 1; }
  int& at(int i, int j) { return cell_id[static_cast<std::size_t>(i * count(1) + j)]; }
  int at(int i, int j) const { return cell_id[static_cast<std::size_t>(i * count(1) + j)]; }
  std::optional<Rational> lower(std::size_t k, int i) const {
    if (i == 0) return std::nullopt;
    return breaks[k][static_cast<std::size_t>(i - 1)];
  }
  std::optional<Rational> upper(std::size_t k, int i) const {
    if (i == count(k) - 1) return std::nullopt;
    return breaks[k][static_cast<std::size_t>(i)];
  }
  Rational sample(std::size_t k, int i) const {
    auto l = lower(k, i), u = upper(k, i);
    if (l && u) return (*l + *u) / 2;
    if (l) return *l + 1;
    if (u) return *u - 1;
    return 0;
  }
  int index_above(std::size_t k, const Rational& v) const {  // interval starting at v
    auto it = std::lower_bound(breaks[k].begin(), breaks[k].end(), v);
    if (it == breaks[k].end() || *it != v) return -1;
    return static_cast<int>(it - breaks[k].begin()) + 1;
  }
};

struct Builder {
  const RealizedPattern& rp;
  SectorReport sectors;
  FarSection fs;
  std::array<PlaneGrid, 6> grids;
  std::array<std::vector<Region>, 6> regions;
  std::vector<std::array<int, 2>> grid_pos;  // cell -> (i, j)

  explicit Builder(const RealizedPattern& r) : rp(r), sectors(compute_sectors(r)) {}

  void build_grids() {
    for (int plane = 0; plane < 6; ++plane) {
      FarDirection d = FarDirection::from_plane(plane);
      auto& regs = regions[static_cast<std::size_t>(plane)];
      for (const auto& s : sectors.sectors) {
        if (auto r = cross_section(s, d)) regs.push_back(*r);
      }
      auto& g = grids[static_cast<std::size_t>(plane)];
      for (std::size_t k = 0; k < 2; ++k) {
        for (const auto& r : regs) {
          if (r.lo[k]) g.breaks[k].push_back(*r.lo[k]);
          if (r.hi[k]) g.breaks[k].push_back(*r.hi[k]);
        }
        std::sort(g.breaks[k].begin(), g.breaks[k].end());
        g.breaks[k].erase(std::unique(g.breaks[k].begin(), g.breaks[k].end()), g.breaks[k].end());
      }
      g.cell_id.assign(static_cast<std::size_t>(g.count(0) * g.count(1)), -1);
      for (int i = 0; i < g.count(0); ++i) {
        for (int j = 0; j < g.count(1); ++j) {
          std::array<Rational, 2> x{g.sample(0, i), g.sample(1, j)};
          bool removed = std::any_of(regs.begin(), regs.end(), [&](const Region& r) { return r.contains(x); });
          if (removed) continue;
          auto l0 = g.lower(0, i), u0 = g.upper(0, i), l1 = g.lower(1, j), u1 = g.upper(1, j);
          if (!l0 || !u0 || !l1 || !u1) {
            throw std::domain_error("far cross-section " + d.name() + " is unbounded");
          }
          g.at(i, j) = static_cast<int>(fs.cells.size());
          fs.cells.push_back({plane, {*l0, *l1}, {*u0, *u1}});
          grid_pos.push_back({i, j});
        }
      }
    }
    fs.links_of_cell.resize(fs.cells.size());
  }

  void add_link(FarLink link) {
    fs.links_of_cell[static_cast<std::size_t>(link.cell)].push_back(static_cast<int>(fs.links.size()));
    fs.links.push_back(std::move(link));
  }

  void build_links() {
    for (int c = 0; c < static_cast<int>(fs.cells.size()); ++c) {
      const FarCell& cell = fs.cells[static_cast<std::size_t>(c)];
      const auto& g = grids[static_cast<std::size_t>(cell.plane)];
      auto [i, j] = grid_pos[static_cast<std::size_t>(c)];
      for (int side = 0; side < 4; ++side) {
        const std::size_t nc = static_cast<std::size_t>(side / 2), tc = 1 - nc;
        const int out = side % 2 ? 1 : -1;
        int ni = nc == 0 ? i + out : i, nj = nc == 1 ? j + out : j;
        int neighbour = g.at(ni, nj);
        if (neighbour >= 0) {
          add_link({c, side, cell.lo[tc], cell.hi[tc], neighbour, side ^ 1, -1, AxisIsometry::identity()});
          continue;
        }
        fold_side(c, side, {g.sample(0, ni), g.sample(1, nj)});
      }
    }
  }

  void fold_side(int c, int side, const std::array<Rational, 2>& beyond) {
    const FarCell& cell = fs.cells[static_cast<std::size_t>(c)];
    const std::size_t nc = static_cast<std::size_t>(side / 2), tc = 1 - nc;
    const int out = side % 2 ? 1 : -1;
    const Rational level = out > 0 ? cell.hi[nc] : cell.lo[nc];
    const Axis normal_axis = far_plane_axes(cell.plane)[nc];
    FarDirection d = FarDirection::from_plane(cell.plane);

    std::vector<std::pair<const SectorSpec*, int>> faces;
    std::vector<int> caps;
    for (const auto& r : regions[static_cast<std::size_t>(cell.plane)]) {
      if (!r.contains(beyond)) continue;
      const auto& bound = out > 0 ? r.lo[nc] : r.hi[nc];
      if (!bound || *bound != level) throw std::logic_error("far section: region does not border its cell");
      const SectorSpec& s = sectors.sectors[static_cast<std::size_t>(r.sector)];
      if (normal_axis == s.axis) {
        caps.push_back(s.edge);
      } else {
        faces.emplace_back(&s, transverse_axes(s.axis)[0] == normal_axis ? 0 : 1);
      }
    }
    if (faces.empty()) {
      throw std::domain_error("far cross-section " + d.name() + " has boundary at the end of the sector of edge " +
                              std::to_string(caps.empty() ? -1 : caps.front()));
    }
    if (faces.size() > 1) {
      throw std::domain_error("far cross-section " + d.name() + ": sectors of edges " + std::to_string(faces[0].first->edge) +
                              " and " + std::to_string(faces[1].first->edge) + " fold along the same line");
    }
    const SectorSpec& s = *faces.front().first;
    AxisIsometry rs = fold(s);
    AxisIsometry T = faces.front().second == 0 ? rs : rs.inverse();

    const int other_plane = FarDirection::from_vector(T.apply_linear(d.vector())).plane();
    std::array<Rational, 2> a = cell.lo, b = cell.lo;
    a[nc] = b[nc] = level;
    b[tc] = cell.hi[tc];
    auto ia = from3(other_plane, T.apply(to3(cell.plane, a)));
    auto ib = from3(other_plane, T.apply(to3(cell.plane, b)));
    Dir2 n{0, 0};
    n[nc] = out;
    Dir2 into = dir2(other_plane, T.apply_linear(dir3(cell.plane, n)));
    const std::size_t nf = into[0] != 0 ? 0 : 1, tf = 1 - nf;
    if (ia[nf] != ib[nf]) throw std::logic_error("far section: folded side is not axis-parallel");
    const Rational lo_t = std::min(ia[tf], ib[tf]), hi_t = std::max(ia[tf], ib[tf]);

    const auto& g = grids[static_cast<std::size_t>(other_plane)];
    int idx = into[nf] > 0 ? g.index_above(nf, ia[nf]) : g.index_above(nf, ia[nf]) - 1;
    if (g.index_above(nf, ia[nf]) < 0) throw std::logic_error("far section: fold image is not on a grid line");
    AxisIsometry back = T.inverse();
    Rational covered = lo_t;
    for (int k = 0; k < g.count(tf); ++k) {
      auto l = g.lower(tf, k), u = g.upper(tf, k);
      if ((u && *u <= lo_t) || (l && *l >= hi_t)) continue;
      int other = nf == 0 ? g.at(idx, k) : g.at(k, idx);
      if (other < 0) {
        throw std::domain_error("far cross-section " + d.name() + ": the fold of edge " + std::to_string(s.edge) +
                                " lands on a removed region");
      }
      Rational from = std::max(lo_t, *l), to = std::min(hi_t, *u);
      if (from != covered) throw std::logic_error("far section: fold image has a gap");
      covered = to;
      std::array<Rational, 2> pa = ia, pb = ia;
      pa[tf] = from;
      pb[tf] = to;
      auto qa = from3(cell.plane, back.apply(to3(other_plane, pa)));
      auto qb = from3(cell.plane, back.apply(to3(other_plane, pb)));
      int other_side = 2 * static_cast<int>(nf) + (into[nf] > 0 ? 0 : 1);
      add_link({c, side, std::min(qa[tc], qb[tc]), std::max(qa[tc], qb[tc]), other, other_side, s.edge, T});
    }
    if (covered != hi_t) throw std::logic_error("far section: fold image is not covered");
  }

  void find_rays() {
    for (int e = 0; e < kEdgeCount; ++e) {
      const auto& line = rp.edges[static_cast<std::size_t>(e)].line;
      for (int end = 0; end < 2; ++end) {
        if (end == 0 ? line.extent.lower.has_value() : line.extent.upper.has_value()) continue;
        FarRay ray;
        ray.edge = e;
        ray.vertex = box::edge_endpoint(e, end);
        ray.direction = {line.axis, end ? 1 : -1};
        int plane = ray.direction.plane();
        auto ax = far_plane_axes(plane);
        ray.apex = {line.coordinate(ax[0]), line.coordinate(ax[1])};
        for (int c = 0; c < static_cast<int>(fs.cells.size()) && ray.cell < 0; ++c) {
          const FarCell& cell = fs.cells[static_cast<std::size_t>(c)];
          if (cell.plane != plane) continue;
          bool corner = (ray.apex[0] == cell.lo[0] || ray.apex[0] == cell.hi[0]) &&
                        (ray.apex[1] == cell.lo[1] || ray.apex[1] == cell.hi[1]);
          if (corner) ray.cell = c;
        }
        if (ray.cell < 0) throw std::domain_error("singular ray of edge " + std::to_string(e) + " does not reach the far section");
        fs.rays.push_back(ray);
      }
    }
  }
};

int corner_of(const FarCell& cell, const std::array<Rational, 2>& x) {
  bool p_lo = x[0] == cell.lo[0], p_hi = x[0] == cell.hi[0];
  bool q_lo = x[1] == cell.lo[1], q_hi = x[1] == cell.hi[1];
  if (p_lo && q_lo) return 0;
  if (p_hi && q_lo) return 1;
  if (p_hi && q_hi) return 2;
  if (p_lo && q_hi) return 3;
  return -1;
}

Dir2 corner_start(int corner) {
  static const std::array<Dir2, 4> w{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
  return w[static_cast<std::size_t>(corner)];
}

// Side of `cell` through x along direction u.
int side_along(const FarCell& cell, const std::array<Rational, 2>& x, const Dir2& u) {
  std::size_t n = u[0] != 0 ? 1 : 0;  // coordinate that is constant along u
  if (x[n] == cell.lo[n]) return 2 * static_cast<int>(n);
  if (x[n] == cell.hi[n]) return 2 * static_cast<int>(n) + 1;
  return -1;
}

const FarLink* link_from(const FarSection& fs, int cell, int side, const Rational& t, int direction) {
  for (int li : fs.links_of_cell[static_cast<std::size_t>(cell)]) {
    const FarLink& l = fs.links[static_cast<std::size_t>(li)];
    if (l.side != side) continue;
    if (direction > 0 ? (l.from <= t && t < l.to) : (l.from < t && t <= l.to)) return &l;
  }
  return nullptr;
}

const FarLink* link_through(const FarSection& fs, int cell, int side, const Rational& t) {
  for (int li : fs.links_of_cell[static_cast<std::size_t>(cell)]) {
    const FarLink& l = fs.links[static_cast<std::size_t>(li)];
    if (l.side == side && l.from < t && t < l.to) return &l;
  }
  return nullptr;
}

struct Visit {
  int cell;
  std::array<Rational, 2> x;
  friend bool operator<(const Visit& a, const Visit& b) {
    if (a.cell != b.cell) return a.cell < b.cell;
    return a.x < b.x;
  }
};

// Total angle around a point of the surface, in quarter turns, walking
// counterclockwise from a cell having it as a corner.
int quarters_around(const FarSection& fs, int start_cell, const std::array<Rational, 2>& start_x, std::set<Visit>* seen) {
  int cell = start_cell;
  std::array<Rational, 2> x = start_x;
  Dir2 w = corner_start(corner_of(fs.cells[static_cast<std::size_t>(cell)], x));
  const Dir2 w0 = w;
  int total = 0;
  for (int step = 0; step < 256; ++step) {
    const FarCell& c = fs.cells[static_cast<std::size_t>(cell)];
    if (seen) seen->insert({cell, x});
    int q = corner_of(c, x) >= 0 ? 1 : 2;
    total += q;
    Dir2 u = q == 1 ? rot90(w) : rot90(rot90(w));
    int side = side_along(c, x, u);
    std::size_t tc = static_cast<std::size_t>(1 - side / 2);
    const FarLink* l = link_from(fs, cell, side, x[tc], u[tc]);
    if (!l) throw std::logic_error("far section: no link around a vertex");
    int next_plane = fs.cells[static_cast<std::size_t>(l->other)].plane;
    x = from3(next_plane, l->transition.apply(to3(c.plane, x)));
    u = dir2(next_plane, l->transition.apply_linear(dir3(c.plane, u)));
    cell = l->other;
    w = u;
    if (cell == start_cell && x == start_x && w == w0) return total;
  }
  throw std::logic_error("far section: vertex walk does not close");
}

Rational side_image(const FarSection& fs, const FarLink& l, const Rational& t) {
  const int plane = fs.cells[static_cast<std::size_t>(l.cell)].plane;
  const int other_plane = fs.cells[static_cast<std::size_t>(l.other)].plane;
  const std::size_t tc = static_cast<std::size_t>(1 - l.side / 2), nc = 1 - tc;
  const std::size_t otc = static_cast<std::size_t>(1 - l.other_side / 2);
  const FarCell& c = fs.cells[static_cast<std::size_t>(l.cell)];
  std::array<Rational, 2> x;
  x[nc] = l.side % 2 ? c.hi[nc] : c.lo[nc];
  x[tc] = t;
  return from3(other_plane, l.transition.apply(to3(plane, x)))[otc];
}

}  // namespace

FarSection build_far_section(const RealizedPattern& realized) {
  Builder b(realized);
  b.build_grids();
  b.build_links();
  b.find_rays();
  FarSection fs = std::move(b.fs);
  for (auto& l : fs.links) {
    l.image_from = side_image(fs, l, l.from);
    l.image_to = side_image(fs, l, l.to);
  }

  // Connectivity.
  std::vector<bool> reached(fs.cells.size(), false);
  std::deque<int> queue{0};
  if (!fs.cells.empty()) reached[0] = true;
  while (!queue.empty()) {
    int c = queue.front();
    queue.pop_front();
    for (int li : fs.links_of_cell[static_cast<std::size_t>(c)]) {
      int o = fs.links[static_cast<std::size_t>(li)].other;
      if (!reached[static_cast<std::size_t>(o)]) {
        reached[static_cast<std::size_t>(o)] = true;
        queue.push_back(o);
      }
    }
  }
  if (std::find(reached.begin(), reached.end(), false) != reached.end()) {
    throw std::domain_error("far section is not connected");
  }

  std::set<Visit> seen;
  for (auto& ray : fs.rays) {
    ray.cone_quarters = quarters_around(fs, ray.cell, ray.apex, &seen);
  }
  for (int c = 0; c < static_cast<int>(fs.cells.size()); ++c) {
    const FarCell& cell = fs.cells[static_cast<std::size_t>(c)];
    for (int k = 0; k < 4; ++k) {
      std::array<Rational, 2> x{k == 1 || k == 2 ? cell.hi[0] : cell.lo[0], k >= 2 ? cell.hi[1] : cell.lo[1]};
      if (seen.count({c, x})) continue;
      int q = quarters_around(fs, c, x, &seen);
      if (q != 4) {
        fs.singular_points.push_back(FarDirection::from_plane(cell.plane).name() + " (" + format_rational(x[0]) + ", " +
                                     format_rational(x[1]) + "): " + std::to_string(q) + " quarter turns");
      }
    }
  }
  return fs;
}

namespace {

struct Segment {
  int cell;
  std::size_t fixed;  // plane coordinate that is constant along the segment
  Rational value;
};

std::optional<std::vector<Segment>> trace_geodesic(const FarSection& fs, int start_cell, const Dir2& start_u,
                                                   const Rational& fraction) {
  const FarCell& c0 = fs.cells[static_cast<std::size_t>(start_cell)];
  const std::size_t along = start_u[0] != 0 ? 0 : 1, fixed = 1 - along;
  std::array<Rational, 2> x;
  x[along] = start_u[along] > 0 ? c0.lo[along] : c0.hi[along];
  x[fixed] = c0.lo[fixed] + (c0.hi[fixed] - c0.lo[fixed]) * fraction;

  std::vector<Segment> path;
  int cell = start_cell;
  Dir2 u = start_u;
  const std::array<Rational, 2> x0 = x;
  for (int step = 0; step < 20000; ++step) {
    const FarCell& c = fs.cells[static_cast<std::size_t>(cell)];
    const std::size_t a = u[0] != 0 ? 0 : 1, f = 1 - a;
    if (x[f] == c.lo[f] || x[f] == c.hi[f]) return std::nullopt;
    path.push_back({cell, f, x[f]});
    std::array<Rational, 2> y = x;
    y[a] = u[a] > 0 ? c.hi[a] : c.lo[a];
    int side = 2 * static_cast<int>(a) + (u[a] > 0 ? 1 : 0);
    const FarLink* l = link_through(fs, cell, side, y[f]);
    if (!l) return std::nullopt;
    int next_plane = fs.cells[static_cast<std::size_t>(l->other)].plane;
    x = from3(next_plane, l->transition.apply(to3(c.plane, y)));
    u = dir2(next_plane, l->transition.apply_linear(dir3(c.plane, u)));
    cell = l->other;
    if (cell == start_cell && u == start_u && x == x0) return path;
  }
  return std::nullopt;
}

struct Pieces {
  std::vector<int> first;                  // first piece id of each cell
  std::vector<int> cut_axis;               // -1 when uncut
  std::vector<std::vector<Rational>> cuts;  // sorted cut values
  int total = 0;

  int count(int cell) const { return static_cast<int>(cuts[static_cast<std::size_t>(cell)].size()) + 1; }
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
    return a;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

// Pieces of `cell` meeting the part [from, to] of `side`, with the part of
// the side each one meets.
std::vector<std::tuple<int, Rational, Rational>> pieces_on_side(const FarSection& fs, const Pieces& pc, int cell, int side,
                                                                const Rational& from, const Rational& to) {
  std::vector<std::tuple<int, Rational, Rational>> out;
  const FarCell& c = fs.cells[static_cast<std::size_t>(cell)];
  const auto& cuts = pc.cuts[static_cast<std::size_t>(cell)];
  const int base = pc.first[static_cast<std::size_t>(cell)];
  const int k = pc.cut_axis[static_cast<std::size_t>(cell)];
  const int tc = 1 - side / 2;
  if (k < 0) {
    out.emplace_back(base, from, to);
  } else if (k == tc) {
    for (int p = 0; p < pc.count(cell); ++p) {
      Rational lo = p == 0 ? c.lo[static_cast<std::size_t>(k)] : cuts[static_cast<std::size_t>(p - 1)];
      Rational hi = p + 1 == pc.count(cell) ? c.hi[static_cast<std::size_t>(k)] : cuts[static_cast<std::size_t>(p)];
      lo = std::max(lo, from);
      hi = std::min(hi, to);
      if (lo < hi) out.emplace_back(base + p, lo, hi);
    }
  } else {
    out.emplace_back(base + (side % 2 ? pc.count(cell) - 1 : 0), from, to);
  }
  return out;
}

std::optional<std::vector<int>> split_by(const FarSection& fs, const std::vector<Segment>& path, std::vector<int>* piece_side,
                                         Pieces* pieces_out) {
  const std::size_t n = fs.cells.size();
  Pieces pc;
  pc.cut_axis.assign(n, -1);
  pc.cuts.assign(n, {});
  for (const auto& s : path) {
    auto& axis = pc.cut_axis[static_cast<std::size_t>(s.cell)];
    if (axis >= 0 && axis != static_cast<int>(s.fixed)) return std::nullopt;
    axis = static_cast<int>(s.fixed);
    pc.cuts[static_cast<std::size_t>(s.cell)].push_back(s.value);
  }
  pc.first.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    auto& cuts = pc.cuts[c];
    std::sort(cuts.begin(), cuts.end());
    if (std::adjacent_find(cuts.begin(), cuts.end()) != cuts.end()) return std::nullopt;
    pc.first[c] = pc.total;
    pc.total += pc.count(static_cast<int>(c));
  }

  UnionFind uf(pc.total);
  for (const FarLink& l : fs.links) {
    auto mine = pieces_on_side(fs, pc, l.cell, l.side, l.from, l.to);
    const Rational& a = l.image_from;
    const Rational& b = l.image_to;
    bool reversed = a > b;
    auto theirs = pieces_on_side(fs, pc, l.other, l.other_side, std::min(a, b), std::max(a, b));
    // Transitions are isometries, so the side map has slope +1 or -1.
    for (const auto& [p, lo, hi] : mine) {
      Rational ilo = lo - l.from, ihi = hi - l.from;
      if (reversed) {
        ilo = a - ilo;
        ihi = a - ihi;
      } else {
        ilo += a;
        ihi += a;
      }
      if (reversed) std::swap(ilo, ihi);
      for (const auto& [q, qlo, qhi] : theirs) {
        if (std::max(ilo, qlo) < std::min(ihi, qhi)) uf.unite(p, q);
      }
    }
  }

  std::map<int, int> label;
  std::vector<int> side(static_cast<std::size_t>(pc.total));
  for (int p = 0; p < pc.total; ++p) {
    int r = uf.find(p);
    auto it = label.find(r);
    if (it == label.end()) it = label.emplace(r, static_cast<int>(label.size())).first;
    side[static_cast<std::size_t>(p)] = it->second;
  }
  if (label.size() != 2) return std::nullopt;

  std::vector<int> ray_side;
  for (const FarRay& ray : fs.rays) {
    const FarCell& c = fs.cells[static_cast<std::size_t>(ray.cell)];
    int k = pc.cut_axis[static_cast<std::size_t>(ray.cell)];
    int p = pc.first[static_cast<std::size_t>(ray.cell)];
    if (k >= 0 && ray.apex[static_cast<std::size_t>(k)] == c.hi[static_cast<std::size_t>(k)]) p += pc.count(ray.cell) - 1;
    ray_side.push_back(side[static_cast<std::size_t>(p)]);
  }
  if (piece_side) *piece_side = std::move(side);
  if (pieces_out) *pieces_out = std::move(pc);
  return ray_side;
}

EndSplit make_split(const FarSection& fs, const std::vector<int>& ray_side) {
  EndSplit s;
  for (int r = 0; r < static_cast<int>(ray_side.size()); ++r) {
    s.groups[ray_side[static_cast<std::size_t>(r)] == ray_side[0] ? 0 : 1].push_back(r);
  }
  for (const auto& g : s.groups)
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i + 1; j < g.size(); ++j)
        if (fs.rays[static_cast<std::size_t>(g[i])].direction == fs.rays[static_cast<std::size_t>(g[j])].direction) ++s.score;
  return s;
}

struct Traced {
  EndSplit split;
  std::vector<Segment> path;
};

std::vector<Traced> all_splits(const FarSection& fs) {
  std::vector<Traced> found;
  std::set<std::vector<int>> keys;
  const std::array<Rational, 3> fractions{Rational(1, 2), Rational(1, 3), Rational(2, 7)};
  std::set<std::tuple<int, std::size_t, Rational>> traced;
  for (int c = 0; c < static_cast<int>(fs.cells.size()); ++c) {
    const FarCell& cell = fs.cells[static_cast<std::size_t>(c)];
    for (const Dir2& u : {Dir2{1, 0}, Dir2{0, 1}}) {
      const std::size_t fixed = u[0] != 0 ? 1 : 0;
      for (const auto& f : fractions) {
        if (traced.count({c, fixed, cell.lo[fixed] + (cell.hi[fixed] - cell.lo[fixed]) * f})) break;
        auto path = trace_geodesic(fs, c, u, f);
        if (path)
          for (const auto& seg : *path) traced.insert({seg.cell, seg.fixed, seg.value});
        if (!path) continue;
        auto sides = split_by(fs, *path, nullptr, nullptr);
        if (!sides) break;
        EndSplit s = make_split(fs, *sides);
        if (keys.insert(s.groups[0]).second) found.push_back({s, *path});
        break;
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const Traced& a, const Traced& b) {
    if (a.split.score != b.split.score) return a.split.score > b.split.score;
    return a.split.groups[0] < b.split.groups[0];
  });
  return found;
}

}  // namespace

std::vector<EndSplit> end_splits(const FarSection& section) {
  std::vector<EndSplit> out;
  for (auto& t : all_splits(section)) out.push_back(std::move(t.split));
  return out;
}

namespace {

std::array<DiscEnd, 2> develop_ends(const FarSection& fs, const EndSplit& split, const std::vector<Traced>& traced);

}  // namespace

std::array<DiscEnd, 2> disc_ends(const FarSection& section) {
  auto traced = all_splits(section);
  if (traced.empty()) throw std::domain_error("no closed geodesic separates the far section");
  return develop_ends(section, traced.front().split, traced);
}

std::array<DiscEnd, 2> disc_ends(const FarSection& fs, const EndSplit& split) { return develop_ends(fs, split, all_splits(fs)); }

namespace {

std::array<DiscEnd, 2> develop_ends(const FarSection& fs, const EndSplit& split, const std::vector<Traced>& traced) {
  // Re-run a geodesic realizing the split to recover the side of every piece.
  std::vector<int> piece_side;
  Pieces pc;
  bool ok = false;
  for (const auto& t : traced) {
    if (t.split.groups != split.groups) continue;
    auto sides = split_by(fs, t.path, &piece_side, &pc);
    ok = sides.has_value();
    break;
  }
  if (!ok) throw std::invalid_argument("disc_ends: split is not realized by a closed geodesic");

  std::array<DiscEnd, 2> ends;
  for (std::size_t e = 0; e < 2; ++e) {
    const auto& group = split.groups[e];
    if (group.size() != 4) {
      throw std::invalid_argument("disc end with " + std::to_string(group.size()) + " escaping rays");
    }
    const int label = [&] {
      const FarRay& r = fs.rays[static_cast<std::size_t>(group.front())];
      const FarCell& c = fs.cells[static_cast<std::size_t>(r.cell)];
      int k = pc.cut_axis[static_cast<std::size_t>(r.cell)];
      int p = pc.first[static_cast<std::size_t>(r.cell)];
      if (k >= 0 && r.apex[static_cast<std::size_t>(k)] == c.hi[static_cast<std::size_t>(k)]) p += pc.count(r.cell) - 1;
      return piece_side[static_cast<std::size_t>(p)];
    }();
    auto in_end = [&](int cell) {
      for (int p = 0; p < pc.count(cell); ++p)
        if (piece_side[static_cast<std::size_t>(pc.first[static_cast<std::size_t>(cell)] + p)] == label) return true;
      return false;
    };

    // Charts by breadth-first development from the first ray's cell.
    const int base = fs.rays[static_cast<std::size_t>(group.front())].cell;
    std::vector<std::optional<AxisIsometry>> chart(fs.cells.size());
    chart[static_cast<std::size_t>(base)] = AxisIsometry::identity();
    std::deque<int> queue{base};
    while (!queue.empty()) {
      int c = queue.front();
      queue.pop_front();
      for (int li : fs.links_of_cell[static_cast<std::size_t>(c)]) {
        const FarLink& l = fs.links[static_cast<std::size_t>(li)];
        if (chart[static_cast<std::size_t>(l.other)] || !in_end(l.other)) continue;
        chart[static_cast<std::size_t>(l.other)] = compose(*chart[static_cast<std::size_t>(c)], l.transition.inverse());
        queue.push_back(l.other);
      }
    }

    DiscEnd& end = ends[e];
    end.base_cell = base;
    for (int r : group) {
      const FarRay& ray = fs.rays[static_cast<std::size_t>(r)];
      const auto& g = chart[static_cast<std::size_t>(ray.cell)];
      if (!g) throw std::logic_error("disc end: ray cell not reached by the development");
      DevelopedRay dr;
      dr.ray = r;
      dr.edge = ray.edge;
      dr.point = g->apply(to3(ray.direction.plane(), ray.apex));
      dr.direction = g->apply_linear(ray.direction.vector());
      end.rays.push_back(dr);
    }
    end.direction = end.rays.front().direction;
    for (const auto& dr : end.rays) {
      if (!(dr.direction == end.direction)) throw std::logic_error("disc end: developed rays are not parallel");
    }
  }
  return ends;
}

}  // namespace

}  // namespace cone_forge
