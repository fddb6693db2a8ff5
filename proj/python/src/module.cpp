#include <pybind11/pybind11.h>

#include "cone_forge/io.hpp"
#include "cone_forge/report.hpp"

namespace py = pybind11;
using namespace cone_forge;
using io::Json;

namespace {

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(e.what());
  }
}

std::string enumerate_json(bool up_to_symmetry, int jobs) {
  Json out = Json::array();
  for (const auto& p : enumerate_patterns(up_to_symmetry, jobs)) out.push_back(io::pattern_json(p)["free_edge_at_vertex"]);
  return out.dump();
}

std::string validate_json(const std::string& pattern) { return io::validity_json(io::pattern_from(parse(pattern))).dump(); }

std::string realize_json(const std::string& pattern, const std::string& box, const std::string& margin) {
  EdgePattern p = io::pattern_from(parse(pattern));
  BoxSpec b = io::box_from(parse(box));
  Rational m = margin.empty() ? b.default_margin() : parse_rational(margin);
  if (m <= 0) throw std::invalid_argument("margin must be positive");
  auto r = solve_realization(p, b, m);
  if (r.feasible) return io::realization_json(*r.realized).dump();
  return io::certificate_json(p, b, m, r).dump();
}

std::string report_json(const std::string& realization, std::uint64_t seed, int count, int jobs) {
  std::vector<std::string> mismatches;
  auto rp = io::realization_from(parse(realization), &mismatches);
  ReportConfig config;
  config.projection_seed = seed;
  config.projection_count = count;
  return build_report(rp, config, jobs, mismatches).dump();
}

std::string holonomy_json(const std::string& realization) {
  auto rp = io::realization_from(parse(realization));
  auto ends = disc_ends(build_far_section(rp));
  Json out = Json::array();
  bool passed = true;
  for (int e = 0; e < 2; ++e) {
    auto rep = end_product_check(ends[static_cast<std::size_t>(e)], e);
    passed = passed && rep.passed;
    out.push_back(io::end_report_json(rep));
  }
  return Json{{"ends", out}, {"passed", passed}}.dump();
}

std::string doubled_disc_json(const std::string& angles) {
  return io::doubled_disc_json(build_doubled_disc(io::pi_list_from(parse(angles)))).dump();
}

std::string budget_json(const std::string& description, const std::string& cap) {
  return io::budget_json(validate_description(io::description_from(parse(description)), parse_pi_multiple(cap))).dump();
}

std::string classify_json(const std::string& description) {
  return io::classification_json(classify(io::description_from(parse(description)))).dump();
}

std::string explore_json(int depth) {
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
  return io::exploration_json(explore(depth)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = io::kToolVersion;
  m.def("enumerate_patterns", &enumerate_json, py::arg("up_to_symmetry"), py::arg("jobs") = 1);
  m.def("validate", &validate_json, py::arg("pattern"));
  m.def("realize", &realize_json, py::arg("pattern"), py::arg("box"), py::arg("margin"));
  m.def("report", &report_json, py::arg("realization"), py::arg("seed"), py::arg("count"), py::arg("jobs"),
        py::call_guard<py::gil_scoped_release>());
  m.def("holonomy", &holonomy_json, py::arg("realization"));
  m.def("doubled_disc", &doubled_disc_json, py::arg("angles"));
  m.def("validate_description", &budget_json, py::arg("description"), py::arg("cap"));
  m.def("classify", &classify_json, py::arg("description"));
  m.def("explore", &explore_json, py::arg("depth"));
}
