#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "cone_forge/io.hpp"
#include "cone_forge/report.hpp"

using namespace cone_forge;
using io::Json;

namespace {

constexpr int kPass = 0, kRejected = 1, kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string out;
  std::string svg;
  std::string box = "1,1,1";
  std::string margin;
  std::string angles;
  std::string cap = "3/2pi";
  std::uint64_t seed = 1;
  bool up_to_symmetry = false;
  int jobs = 1;
  int depth = 16;
  double tolerance = kDefaultTolerance;
};

BoxSpec parse_box(const std::string& text) {
  BoxSpec b;
  std::stringstream in(text);
  std::string part;
  std::size_t i = 0;
  while (std::getline(in, part, ',')) {
    if (i == 3) throw UsageError("--box takes three comma-separated dimensions");
    try {
      b.dims[i++] = parse_rational(part);
    } catch (const std::exception& e) {
      throw UsageError(std::string("--box: ") + e.what());
    }
  }
  if (i != 3) throw UsageError("--box takes three comma-separated dimensions");
  try {
    b.check();
  } catch (const std::exception& e) {
    throw UsageError(std::string("--box: ") + e.what());
  }
  return b;
}

Rational parse_margin(const Options& o, const BoxSpec& box) {
  if (o.margin.empty()) return box.default_margin();
  Rational m;
  try {
    m = parse_rational(o.margin);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--margin: ") + e.what());
  }
  if (m <= 0) throw UsageError("--margin must be positive");
  return m;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw UsageError("cannot write " + path);
}

Json config_json(const Options& o) {
  return Json{{"projection_seed", o.seed}, {"tolerance", o.tolerance}, {"tool_version", io::kToolVersion}};
}

// Reading an input document; malformed content is a usage error.
template <class F>
auto parse_input(const std::string& what, F f) {
  try {
    return f();
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(what + ": " + e.what());
  }
}

std::vector<EdgePattern> patterns_in(const Json& doc) {
  return parse_input("pattern input", [&] {
    std::vector<EdgePattern> out;
    if (doc.is_object() && doc.contains("patterns")) {
      io::expect_schema(doc, "pattern-list");
      for (const auto& p : doc["patterns"]) out.push_back(io::pattern_from(p));
    } else {
      out.push_back(io::pattern_from(doc));
    }
    return out;
  });
}

// A realization document, or a pattern document realized with the box and
// margin options.
RealizedPattern realized_input(const Options& o, std::vector<std::string>& problems) {
  Json doc = read_json(o.input);
  if (doc.is_object() && doc.contains("schema") && doc["schema"] == io::schema_tag("realization")) {
    return parse_input(o.input, [&] { return io::realization_from(doc, &problems); });
  }
  auto pattern = parse_input(o.input, [&] { return io::pattern_from(doc); });
  BoxSpec box = parse_box(o.box);
  Rational margin = parse_margin(o, box);
  auto r = solve_realization(pattern, box, margin);
  if (!r.feasible) {
    std::cerr << "pattern is not realizable with margin " << format_rational(margin) << "\n";
    throw std::domain_error("not realizable");
  }
  return *r.realized;
}

int cmd_enumerate(const Options& o) {
  auto summary = enumeration_summary(o.jobs);
  Json list = Json::array();
  for (const auto& p : enumerate_patterns(o.up_to_symmetry, o.jobs)) {
    Json j = io::pattern_json(p);
    j["index"] = p.index();
    list.push_back(j);
  }
  Json out{{"schema", io::schema_tag("pattern-list")},
           {"up_to_symmetry", o.up_to_symmetry},
           {"summary", Json{{"raw", summary.raw}, {"valid", summary.valid}, {"orbits", summary.orbits}}},
           {"patterns", list}};
  write_text(o.out, io::dump(out));
  std::cerr << "raw " << summary.raw << ", valid " << summary.valid << ", orbits " << summary.orbits << "\n";
  return kPass;
}

int cmd_validate(const Options& o) {
  auto patterns = patterns_in(read_json(o.input));
  Json results = Json::array();
  bool all_valid = true;
  for (const auto& p : patterns) {
    results.push_back(io::validity_json(p));
    all_valid = all_valid && results.back()["valid"].get<bool>();
  }
  Json out{{"schema", io::schema_tag("validation")}, {"all_valid", all_valid}, {"results", results}};
  write_text(o.out, io::dump(out));
  return all_valid ? kPass : kRejected;
}

int cmd_realize(const Options& o) {
  BoxSpec box = parse_box(o.box);
  Rational margin = parse_margin(o, box);
  auto patterns = patterns_in(read_json(o.input));
  if (patterns.size() != 1) throw UsageError("realize takes a single pattern");
  const auto& p = patterns.front();
  if (!validate(p).valid) {
    std::cerr << "invalid pattern: " << validate(p).reason << "\n";
    write_text(o.out, io::dump(io::validity_json(p)));
    return kRejected;
  }
  auto r = solve_realization(p, box, margin);
  if (r.feasible) {
    write_text(o.out, io::dump(io::realization_json(*r.realized)));
    return kPass;
  }
  write_text(o.out, io::dump(io::certificate_json(p, box, margin, r)));
  std::cerr << "infeasible: certificate with " << r.certificate->indices.size() << " constraints\n";
  return kRejected;
}

int cmd_link(const Options& o) {
  std::vector<std::string> problems;
  auto rp = realized_input(o, problems);
  auto link = extract_link(rp, default_clip_radius(rp));
  auto proj = project_generic(link, o.seed);
  Json out{{"schema", io::schema_tag("link-report")}, {"config", config_json(o)}};
  out["link"] = io::link_json(link);
  out["diagram"] = io::diagram_json(proj.diagram);
  out["diagram"]["attempts"] = proj.attempts;
  if (!o.svg.empty()) write_text(o.svg, diagram_svg(proj.diagram));
  write_text(o.out, io::dump(out));
  return problems.empty() ? kPass : kRejected;
}

int cmd_holonomy(const Options& o) {
  std::vector<std::string> problems;
  auto rp = realized_input(o, problems);
  Json ends = Json::array();
  bool passed = problems.empty();
  std::optional<std::array<DiscEnd, 2>> developed;
  std::string develop_error;
  try {
    developed = disc_ends(build_far_section(rp));
  } catch (const std::exception& e) {
    develop_error = e.what();
  }
  for (int end = 0; end < 2; ++end) {
    try {
      if (!developed) throw std::domain_error(develop_error);
      ends.push_back(io::end_report_json(end_product_check((*developed)[static_cast<std::size_t>(end)], end, o.tolerance)));
    } catch (const std::exception& e) {
      ends.push_back(Json{{"end", end}, {"error", e.what()}, {"passed", false}});
    }
    passed = passed && ends.back()["passed"].get<bool>();
  }
  Json out{{"schema", io::schema_tag("holonomy")}, {"config", config_json(o)}, {"ends", ends}, {"passed", passed}};
  write_text(o.out, io::dump(out));
  return passed ? kPass : kRejected;
}

int cmd_surface(const Options& o) {
  std::vector<PiMultiple> thetas;
  if (!o.angles.empty()) {
    std::stringstream in(o.angles);
    std::string part;
    while (std::getline(in, part, ',')) {
      try {
        thetas.push_back(parse_pi_multiple(part));
      } catch (const std::exception& e) {
        throw UsageError(std::string("--angles: ") + e.what());
      }
    }
  } else if (!o.input.empty()) {
    Json doc = read_json(o.input);
    thetas = parse_input(o.input, [&] { return io::pi_list_from(doc.at("corner_angles")); });
  } else {
    throw UsageError("surface needs --angles or an input file with \"corner_angles\"");
  }
  DoubledDisc disc;
  try {
    disc = build_doubled_disc(thetas);
  } catch (const std::invalid_argument& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return kRejected;
  }
  Json out = io::doubled_disc_json(disc);
  out["corner_angles"] = io::pi_list_json(thetas);
  write_text(o.out, io::dump(out));
  return out["gauss_bonnet"]["residual"].get<double>() <= o.tolerance ? kPass : kRejected;
}

int cmd_classify(const Options& o) {
  Json doc = read_json(o.input);
  auto desc = parse_input(o.input, [&] { return io::description_from(doc); });
  PiMultiple cap;
  try {
    cap = parse_pi_multiple(o.cap);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--cap: ") + e.what());
  }
  Json out{{"schema", io::schema_tag("classification")}, {"description", io::description_json(desc)}, {"cap", format_pi_multiple(cap)}};
  out["description"].erase("schema");
  bool passed = false;
  try {
    auto budget = validate_description(desc, cap);
    out["budget"] = io::budget_json(budget);
    passed = budget.passed;
  } catch (const std::invalid_argument& e) {
    out["budget"] = Json{{"passed", false}, {"error", e.what()}};
  }
  auto cls = classify(desc);
  out["classification"] = io::classification_json(cls);
  passed = passed && cls.classified;
  out["passed"] = passed;
  write_text(o.out, io::dump(out));
  return passed ? kPass : kRejected;
}

int cmd_shrink(const Options& o) {
  if (o.depth < 0) throw UsageError("--depth must be non-negative");
  auto ex = explore(o.depth);
  write_text(o.out, io::dump(io::exploration_json(ex)));
  for (std::size_t i = 0; i < ex.states.size(); ++i) {
    const auto& s = ex.states[i];
    if (legal_moves(s).empty()) {
      for (const auto& h : s.history) std::cerr << "  " << h << "\n";
      std::cerr << "terminal: " << terminal_kind_name(classify_terminal(s)) << "\n";
    }
  }
  return ex.violations.empty() && ex.quiescent ? kPass : kRejected;
}

int cmd_report(const Options& o) {
  std::vector<std::string> problems;
  auto rp = realized_input(o, problems);
  ReportConfig cfg;
  cfg.projection_seed = o.seed;
  cfg.tolerance = o.tolerance;
  auto report = build_report(rp, cfg, o.jobs, problems);
  if (!o.svg.empty() && report["link"].contains("svg")) write_text(o.svg, report["link"]["svg"].get<std::string>());
  write_text(o.out, io::dump(report));
  return report["passed"].get<bool>() ? kPass : kRejected;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  if (const char* tol = std::getenv("CONE_FORGE_TOL")) {
    char* end = nullptr;
    o.tolerance = std::strtod(tol, &end);
    if (end == tol || *end != '\0' || !(o.tolerance > 0)) {
      std::cerr << "CONE_FORGE_TOL must be a positive number\n";
      return kUsage;
    }
  }

  CLI::App app{"Edge patterns, realizations and cone-manifold checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", io::kToolVersion);
  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--out", o.out, "Output path (default: stdout)");
    return sub;
  };
  auto input = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("input", o.input, "Input JSON file");
    if (required) opt->required()->check(CLI::ExistingFile);
  };
  auto realizing = [&](CLI::App* sub) {
    sub->add_option("--box", o.box, "Box dimensions a,b,c");
    sub->add_option("--margin", o.margin, "Realization margin p/q (default: min side / 8)");
  };

  auto* enumerate = add("enumerate", "List valid edge patterns");
  enumerate->add_flag("--up-to-symmetry", o.up_to_symmetry, "One representative per symmetry orbit");
  enumerate->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* validate_cmd = add("validate", "Check pattern files combinatorially");
  input(validate_cmd);

  auto* realize = add("realize", "Solve the realizability system for a pattern");
  input(realize);
  realizing(realize);

  auto* link = add("link", "Singular link and a generic diagram");
  input(link);
  realizing(link);
  link->add_option("--projection-seed", o.seed, "Seed for projection directions");
  link->add_option("--svg", o.svg, "Write the diagram as SVG");

  auto* holonomy = add("holonomy", "Spin criterion at both disc ends");
  input(holonomy);
  realizing(holonomy);

  auto* surface = add("surface", "Doubled disc with given corner angles");
  input(surface, false);
  surface->add_option("--angles", o.angles, "Comma-separated corner angles, e.g. 1/2pi,1/2pi");

  auto* classify_cmd = add("classify", "Budget check and structure type of a description");
  input(classify_cmd);
  classify_cmd->add_option("--cap", o.cap, "Upper bound on cone angles, below 2pi");

  auto* shrink = add("shrink-explore", "Explore the shrinking boundary machine");
  shrink->add_option("--depth", o.depth, "Maximum number of moves");

  auto* report = add("report", "Combined report on a realization");
  input(report);
  realizing(report);
  report->add_option("--projection-seed", o.seed, "Seed for projection directions");
  report->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  report->add_option("--svg", o.svg, "Write the first diagram as SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*enumerate) return cmd_enumerate(o);
    if (*validate_cmd) return cmd_validate(o);
    if (*realize) return cmd_realize(o);
    if (*link) return cmd_link(o);
    if (*holonomy) return cmd_holonomy(o);
    if (*surface) return cmd_surface(o);
    if (*classify_cmd) return cmd_classify(o);
    if (*shrink) return cmd_shrink(o);
    if (*report) return cmd_report(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return kRejected;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRejected;
  }
  return kUsage;
}
