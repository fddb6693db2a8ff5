#include "cone_forge/report.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <optional>
#include <thread>

namespace cone_forge {

namespace {

void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
  int workers = std::clamp(jobs, 1, std::max(n, 1));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) {
        try {
          body(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

Rational default_clip_radius(const RealizedPattern& rp) {
  Rational big(1);
  for (const auto& e : rp.edges)
    for (const auto& o : e.line.offset) big += abs(o);
  for (const auto& d : rp.box.dims) big += d;
  auto probe = extract_link(rp, 4 * big);
  Rational side = std::max({rp.box.dims[0], rp.box.dims[1], rp.box.dims[2]});
  return bounding_radius(probe) + side;
}

std::vector<std::vector<std::vector<int>>> linking_matrices(const PolylineLink& link, std::uint64_t seed, int count, int jobs) {
  std::vector<std::vector<std::vector<int>>> out(static_cast<std::size_t>(count));
  parallel_for(count, jobs, [&](int i) {
    out[static_cast<std::size_t>(i)] = project_generic(link, seed + static_cast<std::uint64_t>(i)).diagram.linking_matrix;
  });
  return out;
}

io::Json build_report(const RealizedPattern& rp, const ReportConfig& config, int jobs, const std::vector<std::string>& input_problems) {
  using io::Json;
  bool passed = true;
  Json out{{"schema", io::schema_tag("report")}};
  out["tool"] = Json{{"name", "cone-forge"}, {"version", io::kToolVersion}};

  Rational clip = config.clip_radius ? *config.clip_radius : default_clip_radius(rp);
  Json cfg{{"box", io::box_json(rp.box)},
           {"margin", io::rational_json(rp.margin)},
           {"projection_seed", config.projection_seed},
           {"projection_count", config.projection_count},
           {"tolerance", config.tolerance},
           {"clip_radius", io::rational_json(clip)}};
  out["config"] = cfg;
  out["pattern"] = io::validity_json(rp.pattern);
  if (!out["pattern"]["valid"].get<bool>()) passed = false;

  auto violations = input_problems;
  for (auto& v : verify_realization(rp)) violations.push_back(std::move(v));
  out["verification"] = Json{{"sound", violations.empty()}, {"violations", violations}};
  if (!violations.empty()) passed = false;

  out["sectors"] = io::sectors_json(compute_sectors(rp));

  std::size_t closed = 0, open = 0;
  Json link_section;
  try {
    auto link = extract_link(rp, clip);
    for (const auto& c : link.components) (c.closed ? closed : open)++;
    int n = std::max(config.projection_count, 1);
    std::vector<GenericProjection> projections(static_cast<std::size_t>(n));
    parallel_for(n, jobs, [&](int i) {
      projections[static_cast<std::size_t>(i)] = project_generic(link, config.projection_seed + static_cast<std::uint64_t>(i));
    });
    Json diagrams = Json::array();
    bool invariant = true;
    for (const auto& p : projections) {
      Json d = io::diagram_json(p.diagram);
      d.erase("schema");
      d["attempts"] = p.attempts;
      diagrams.push_back(d);
      invariant = invariant && p.diagram.linking_matrix == projections.front().diagram.linking_matrix;
    }
    Json lj = io::link_json(link);
    lj.erase("schema");
    link_section = Json{{"closed_components", closed},
                        {"open_components", open},
                        {"link", lj},
                        {"linking_matrix", diagrams.front()["linking_matrix"]},
                        {"projection_invariant", invariant},
                        {"diagrams", diagrams},
                        {"svg", diagram_svg(projections.front().diagram)}};
    if (!invariant) passed = false;
  } catch (const std::exception& e) {
    link_section = Json{{"error", e.what()}};
    passed = false;
  }
  out["link"] = link_section;

  std::array<Json, 2> ends;
  std::optional<std::array<DiscEnd, 2>> developed;
  std::string develop_error;
  try {
    developed = disc_ends(build_far_section(rp));
  } catch (const std::exception& e) {
    develop_error = e.what();
  }
  parallel_for(2, jobs, [&](int end) {
    try {
      if (!developed) throw std::domain_error(develop_error);
      ends[static_cast<std::size_t>(end)] =
          io::end_report_json(end_product_check((*developed)[static_cast<std::size_t>(end)], end, config.tolerance));
    } catch (const std::exception& e) {
      ends[static_cast<std::size_t>(end)] = Json{{"end", end}, {"error", e.what()}, {"passed", false}};
    }
  });
  for (const auto& e : ends) passed = passed && e["passed"].get<bool>();
  out["holonomy"] = Json::array({ends[0], ends[1]});

  ConeManifoldDescription desc = EdgePatternType{rp.pattern, rp.box};
  try {
    auto budget = validate_description(desc, pi_times(3, 2));
    out["budget"] = io::budget_json(budget);
    passed = passed && budget.passed;
  } catch (const std::exception& e) {
    out["budget"] = Json{{"passed", false}, {"error", e.what()}};
    passed = false;
  }
  auto cls = classify(desc);
  out["classification"] = io::classification_json(cls);
  passed = passed && cls.classified;
  out["passed"] = passed;
  return out;
}

}  // namespace cone_forge
