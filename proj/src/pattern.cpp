#include "cone_forge/pattern.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <thread>

namespace cone_forge {

namespace box {

int vertex_bit(int vertex, Axis a) { return (vertex >> index(a)) & 1; }

int vertex_from_bits(int x, int y, int z) { return x | (y << 1) | (z << 2); }

Axis edge_axis(int edge) {
  if (edge < 0 || edge >= kEdgeCount) throw std::invalid_argument("edge id out of range: " + std::to_string(edge));
  return kAxes[static_cast<std::size_t>(edge / 4)];
}

int edge_transverse_bit(int edge, Axis a) {
  Axis axis = edge_axis(edge);
  auto t = transverse_axes(axis);
  int local = edge % 4;
  if (a == t[0]) return local & 1;
  if (a == t[1]) return (local >> 1) & 1;
  throw std::invalid_argument("edge_transverse_bit: axis is the edge direction");
}

int edge_endpoint(int edge, int end) {
  Axis axis = edge_axis(edge);
  auto t = transverse_axes(axis);
  int v = end << index(axis);
  v |= edge_transverse_bit(edge, t[0]) << index(t[0]);
  v |= edge_transverse_bit(edge, t[1]) << index(t[1]);
  return v;
}

int edge_at(int vertex, Axis a) {
  if (vertex < 0 || vertex >= kVertexCount) throw std::invalid_argument("vertex id out of range: " + std::to_string(vertex));
  auto t = transverse_axes(a);
  return 4 * index(a) + vertex_bit(vertex, t[0]) + 2 * vertex_bit(vertex, t[1]);
}

bool edges_share_vertex(int e1, int e2) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (edge_endpoint(e1, i) == edge_endpoint(e2, j)) return true;
  return false;
}

}  // namespace box

EdgePattern EdgePattern::from_free_edges(const std::array<int, kVertexCount>& free_edges) {
  std::array<Axis, kVertexCount> axes{};
  for (int v = 0; v < kVertexCount; ++v) {
    int e = free_edges[static_cast<std::size_t>(v)];
    Axis a = box::edge_axis(e);
    if (box::edge_at(v, a) != e) {
      throw std::invalid_argument("edge " + std::to_string(e) + " is not incident to vertex " + std::to_string(v));
    }
    axes[static_cast<std::size_t>(v)] = a;
  }
  return EdgePattern(axes);
}

EdgePattern EdgePattern::from_index(int idx) {
  if (idx < 0 || idx >= kAssignmentCount) throw std::invalid_argument("pattern index out of range");
  std::array<Axis, kVertexCount> axes{};
  for (int v = kVertexCount - 1; v >= 0; --v) {
    axes[static_cast<std::size_t>(v)] = kAxes[static_cast<std::size_t>(idx % 3)];
    idx /= 3;
  }
  return EdgePattern(axes);
}

int EdgePattern::index() const {
  int idx = 0;
  for (Axis a : free_axes_) idx = 3 * idx + cone_forge::index(a);
  return idx;
}

std::array<int, kVertexCount> EdgePattern::free_edges() const {
  std::array<int, kVertexCount> out{};
  for (int v = 0; v < kVertexCount; ++v) out[static_cast<std::size_t>(v)] = free_edge(v);
  return out;
}

std::array<int, 2> EdgePattern::joined_edges(int vertex) const {
  std::array<int, 2> out{};
  std::size_t n = 0;
  for (Axis a : kAxes) {
    if (a != free_axis(vertex)) out[n++] = box::edge_at(vertex, a);
  }
  return out;
}

bool EdgePattern::is_free_at(int edge, int end) const {
  return free_edge(box::edge_endpoint(edge, end)) == edge;
}

std::size_t ComponentDecomposition::circle_count() const {
  return static_cast<std::size_t>(std::count_if(components.begin(), components.end(),
                                                [](const Component& c) { return c.kind == ComponentKind::Circle; }));
}

std::size_t ComponentDecomposition::interval_count() const { return components.size() - circle_count(); }

namespace {

int other_joined(const EdgePattern& p, int vertex, int edge) {
  auto j = p.joined_edges(vertex);
  return j[0] == edge ? j[1] : j[0];
}

int end_at(int edge, int vertex) { return box::edge_endpoint(edge, 0) == vertex ? 0 : 1; }

}  // namespace

ComponentDecomposition decompose(const EdgePattern& pattern) {
  ComponentDecomposition out;
  out.component_of_edge.fill(-1);
  std::array<bool, kEdgeCount> visited{};

  auto walk = [&](Component& comp, int edge, int in_end, int stop_edge) {
    while (true) {
      visited[static_cast<std::size_t>(edge)] = true;
      out.component_of_edge[static_cast<std::size_t>(edge)] = static_cast<int>(out.components.size());
      comp.edges.push_back(edge);
      int w = box::edge_endpoint(edge, 1 - in_end);
      if (pattern.free_edge(w) == edge) {
        comp.end_vertices[1] = w;
        return;
      }
      int next = other_joined(pattern, w, edge);
      comp.joints.push_back(w);
      if (next == stop_edge) return;
      in_end = end_at(next, w);
      edge = next;
    }
  };

  for (int e = 0; e < kEdgeCount; ++e) {
    for (int end = 0; end < 2; ++end) {
      if (visited[static_cast<std::size_t>(e)] || !pattern.is_free_at(e, end)) continue;
      Component comp;
      comp.kind = ComponentKind::Interval;
      comp.end_vertices[0] = box::edge_endpoint(e, end);
      walk(comp, e, end, -1);
      out.components.push_back(std::move(comp));
    }
  }
  for (int e = 0; e < kEdgeCount; ++e) {
    if (visited[static_cast<std::size_t>(e)]) continue;
    Component comp;
    comp.kind = ComponentKind::Circle;
    walk(comp, e, 0, e);
    out.components.push_back(std::move(comp));
  }
  return out;
}

ValidityReport validate(const EdgePattern& pattern) {
  ValidityReport report;
  auto dec = decompose(pattern);
  for (const auto& c : dec.components) {
    (c.kind == ComponentKind::Circle ? report.circle_lengths : report.interval_lengths).push_back(c.edges.size());
  }
  std::sort(report.circle_lengths.begin(), report.circle_lengths.end());
  std::sort(report.interval_lengths.begin(), report.interval_lengths.end());
  report.circle_count = report.circle_lengths.size();
  report.interval_count = report.interval_lengths.size();
  if (report.interval_count != 4) {
    report.reason = "interval count " + std::to_string(report.interval_count);
  } else if (report.circle_count < 1 || report.circle_count > 2) {
    report.reason = "circle count " + std::to_string(report.circle_count);
  }
  report.valid = report.reason.empty();
  return report;
}

int BoxSymmetry::apply_vertex(int vertex) const {
  int out = 0;
  for (Axis a : kAxes) {
    int bit = box::vertex_bit(vertex, a) ^ (flip[static_cast<std::size_t>(index(a))] ? 1 : 0);
    out |= bit << index(permutation[static_cast<std::size_t>(index(a))]);
  }
  return out;
}

int BoxSymmetry::apply_edge(int edge) const {
  Axis image_axis = permutation[static_cast<std::size_t>(index(box::edge_axis(edge)))];
  return box::edge_at(apply_vertex(box::edge_endpoint(edge, 0)), image_axis);
}

EdgePattern BoxSymmetry::apply(const EdgePattern& pattern) const {
  std::array<Axis, kVertexCount> axes{};
  for (int v = 0; v < kVertexCount; ++v) {
    axes[static_cast<std::size_t>(apply_vertex(v))] = permutation[static_cast<std::size_t>(index(pattern.free_axis(v)))];
  }
  return EdgePattern(axes);
}

bool BoxSymmetry::preserves_orientation() const {
  int inversions = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (index(permutation[static_cast<std::size_t>(i)]) > index(permutation[static_cast<std::size_t>(j)])) ++inversions;
  int flips = static_cast<int>(std::count(flip.begin(), flip.end(), true));
  return (inversions + flips) % 2 == 0;
}

const std::vector<BoxSymmetry>& box_symmetries() {
  static const std::vector<BoxSymmetry> group = [] {
    std::vector<BoxSymmetry> out;
    std::array<Axis, 3> perm{Axis::X, Axis::Y, Axis::Z};
    do {
      for (int mask = 0; mask < 8; ++mask) {
        out.push_back({perm, {(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0}});
      }
    } while (std::next_permutation(perm.begin(), perm.end(), [](Axis a, Axis b) { return index(a) < index(b); }));
    return out;
  }();
  return group;
}

namespace {

EdgePattern min_image(const EdgePattern& pattern, bool oriented_only) {
  EdgePattern best = pattern;
  for (const auto& g : box_symmetries()) {
    if (oriented_only && !g.preserves_orientation()) continue;
    EdgePattern image = g.apply(pattern);
    if (image < best) best = image;
  }
  return best;
}

std::vector<EdgePattern> valid_in_range(int lo, int hi) {
  std::vector<EdgePattern> out;
  for (int idx = lo; idx < hi; ++idx) {
    EdgePattern p = EdgePattern::from_index(idx);
    if (validate(p).valid) out.push_back(p);
  }
  return out;
}

}  // namespace

EdgePattern canonical_form(const EdgePattern& pattern) { return min_image(pattern, false); }

EdgePattern oriented_canonical_form(const EdgePattern& pattern) { return min_image(pattern, true); }

bool is_chiral(const EdgePattern& pattern) {
  BoxSymmetry mirror{{Axis::X, Axis::Y, Axis::Z}, {true, false, false}};
  return oriented_canonical_form(pattern) != oriented_canonical_form(mirror.apply(pattern));
}

std::vector<EdgePattern> enumerate_patterns(bool up_to_symmetry, int jobs) {
  jobs = std::clamp(jobs, 1, 64);
  std::vector<std::vector<EdgePattern>> chunks(static_cast<std::size_t>(jobs));
  {
    std::vector<std::jthread> workers;
    for (int t = 0; t < jobs; ++t) {
      int lo = kAssignmentCount * t / jobs, hi = kAssignmentCount * (t + 1) / jobs;
      workers.emplace_back([&chunks, t, lo, hi] { chunks[static_cast<std::size_t>(t)] = valid_in_range(lo, hi); });
    }
  }
  std::vector<EdgePattern> all;
  for (auto& c : chunks) all.insert(all.end(), c.begin(), c.end());
  if (!up_to_symmetry) return all;

  std::set<EdgePattern> reps;
  for (const auto& p : all) reps.insert(canonical_form(p));
  return {reps.begin(), reps.end()};
}

EnumerationSummary enumeration_summary(int jobs) {
  EnumerationSummary s;
  s.raw = kAssignmentCount;
  s.valid = enumerate_patterns(false, jobs).size();
  s.orbits = enumerate_patterns(true, jobs).size();
  return s;
}

std::string describe(const EdgePattern& pattern) {
  std::ostringstream out;
  out << "free edges [";
  auto fe = pattern.free_edges();
  for (std::size_t v = 0; v < fe.size(); ++v) out << (v ? "," : "") << fe[v];
  out << "]";
  return out.str();
}

}  // namespace cone_forge
