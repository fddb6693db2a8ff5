#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "cone_forge/far_section.hpp"
#include "cone_forge/holonomy.hpp"
#include "cone_forge/io.hpp"
#include "cone_forge/realize.hpp"
#include "cone_forge/shrink.hpp"
#include "cone_forge/singular_link.hpp"
#include "cone_forge/surfaces.hpp"

using namespace cone_forge;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0) {
    std::ostringstream s;
    s << "took " << secs << " s, limit " << limit_seconds << " s";
    o.require(secs < limit_seconds, s.str());
  }
  if (!o.ok) ++failures;
  std::printf("%s %d %s (%.3f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, name.c_str(), secs, o.ok ? "" : ": ", o.detail.c_str());
}

EdgePattern pat(std::array<int, 8> e) { return EdgePattern::from_free_edges(e); }

std::vector<MeridianDatum> end_meridians(const RealizedPattern& rp, int end) {
  auto ends = disc_ends(build_far_section(rp));
  const auto& de = ends[static_cast<std::size_t>(end)];
  std::vector<MeridianDatum> ms;
  for (const auto& r : de.rays) ms.push_back({to_vec3(r.point), to_vec3(de.direction), kPi / 2, 1});
  auto order = cyclic_order(ms);
  std::vector<MeridianDatum> out;
  for (int i : order) out.push_back(ms[static_cast<std::size_t>(i)]);
  return out;
}

std::string run_capture(const std::string& cmd, int& code) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    code = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

}  // namespace

int main() {
  criterion(1, "exhaustive pattern law", 1.0, [](Outcome& o) {
    for (int i = 0; i < kAssignmentCount; ++i) {
      auto r = validate(EdgePattern::from_index(i));
      o.require(r.interval_count == 4, "assignment " + std::to_string(i) + " has " + std::to_string(r.interval_count) + " intervals");
      if (!r.valid) continue;
      for (auto len : r.circle_lengths) o.require(len == 4 || len == 6 || len == 8, "circle of length " + std::to_string(len));
      if (r.circle_count == 2)
        for (auto len : r.interval_lengths) o.require(len == 1, "two-circle pattern with a long interval");
    }
  });

  criterion(2, "figure goldens", 1.0, [](Outcome& o) {
    BoxSpec box;
    Rational m(1, 8);
    for (auto p : {pat({0, 0, 1, 1, 2, 2, 3, 3}), pat({0, 0, 1, 1, 6, 7, 6, 7}), pat({0, 0, 4, 5, 8, 9, 3, 3}), pat({0, 0, 4, 11, 8, 7, 3, 3})}) {
      o.require(validate(p).valid, describe(p) + " is invalid");
      auto r = solve_realization(p, box, m);
      o.require(r.feasible, describe(p) + " is not realizable");
      if (r.feasible) o.require(verify_realization(*r.realized).empty(), describe(p) + " realization does not verify");
    }
    auto pin = pat({0, 5, 1, 11, 2, 9, 3, 7});
    o.require(validate(pin).valid, "pinwheel is invalid");
    auto r = solve_realization(pin, box, m);
    o.require(!r.feasible && r.certificate.has_value(), "pinwheel realized or no certificate");
    if (r.certificate) {
      auto rs = build_constraints(pin, box, m);
      LinearSystem sub;
      sub.variable_names = rs.system.variable_names;
      for (int idx : r.certificate->indices) sub.add(rs.system.constraints[static_cast<std::size_t>(idx)]);
      o.require(!solve_fourier_motzkin(sub).feasible, "certificate subset is satisfiable");
    }
  });

  criterion(3, "spin criterion at the disc ends", 1.0, [](Outcome& o) {
    int realized = 0;
    for (const auto& p : enumerate_patterns(true)) {
      auto r = solve_realization(p, BoxSpec{}, Rational(1, 64));
      if (!r.feasible) continue;
      ++realized;
      auto ends = disc_ends(build_far_section(*r.realized));
      for (int end = 0; end < 2; ++end) {
        auto rep = end_product_check(ends[static_cast<std::size_t>(end)], end);
        std::string where = describe(p) + " end " + std::to_string(end);
        o.require(rep.rotation_identity, where + ": rotation is not the identity");
        o.require(rep.spin == -1, where + ": spin lift is not -1");
        o.require(std::abs(rep.path_length - kPi) <= 1e-9, where + ": path length is not pi");
        o.require(rep.deviation <= 1e-9, where + ": path is not geodesic");
      }
    }
    o.require(realized > 0, "no realized pattern");
    auto r = solve_realization(pat({0, 0, 1, 1, 2, 2, 3, 3}), BoxSpec{}, Rational(1, 8));
    auto ms = end_meridians(*r.realized, 0);
    Vec3 d = ms[0].direction;
    Vec3 helper = std::abs(d.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 perp = cross(d, helper);
    perp = (1 / norm(perp)) * perp;
    ms[0].direction = std::cos(0.3) * d + std::sin(0.3) * perp;
    o.require(product_report(ms).deviation > 1e-3, "tilted axis keeps the path geodesic");
  });

  criterion(4, "Gauss-Bonnet on doubled discs", 5.0, [](Outcome& o) {
    std::mt19937 gen(4);
    for (int trial = 0; trial < 120; ++trial) {
      int n = std::uniform_int_distribution<int>(2, 8)(gen);
      std::vector<long> w(static_cast<std::size_t>(n));
      long total = 0;
      for (auto& x : w) total += (x = std::uniform_int_distribution<long>(1, 16)(gen));
      std::vector<PiMultiple> thetas;
      for (long x : w) thetas.push_back(pi_times(1) - pi_times(Rational(x, total)));
      auto disc = build_doubled_disc(thetas);
      auto gb = gauss_bonnet(disc.surface);
      double lhs = gb.interior_defect_sum + gb.boundary_turning_sum;
      o.require(std::abs(lhs - 2 * kPi * gb.euler_characteristic) <= 1e-9, "Gauss-Bonnet residual too large");
      o.require(sum(disc.defects) == pi_times(2), "defects do not sum to exactly 2pi");
    }
  });

  criterion(5, "budget validator truth table", 1.0, [](Outcome& o) {
    PiMultiple cap = pi_times(19, 10);
    std::vector<PiMultiple> vals = {pi_times(1, 4), pi_times(1, 2), pi_times(3, 4), pi_times(1)};
    for (auto a : vals)
      for (auto b : vals)
        for (auto c : vals)
          for (auto x : vals) {
            bool e1 = (a + b + c) == pi_times(2) && x <= pi_times(1);
            o.require(validate_description(Example1{{a, b, c}, {x}}, cap).passed == e1, "Example 1 row");
            o.require(validate_description(Example1{{a, b}, {x, c}}, cap).passed == ((a + b) == pi_times(2) && (x + c) <= pi_times(1)),
                      "Example 1 row");
            for (int n = 1; n <= 4; ++n)
              o.require(validate_description(Example2{n, {x, c}}, cap).passed == ((x + c) <= pi_times(1, n)), "Example 2 row");
            std::vector<PiMultiple> d{a, b, c, x};
            o.require(validate_description(SoulDim2Sphere{d}, cap).passed == (sum(d) == pi_times(4)), "sphere row");
            o.require(validate_description(SoulDim0Lines{d}, cap).passed == (sum(d) <= pi_times(2)), "lines row");
          }
    for (long num = 1; num < 40; ++num) {
      PiMultiple c = pi_times(num, 20);
      for (PiMultiple budget : {pi_times(1), pi_times(2), pi_times(4)}) {
        Rational ratio = budget.coeff / (Rational(2) - c.coeff);
        long expect = static_cast<long>(BigInt(numerator(ratio) / denominator(ratio)));
        o.require(component_cap(budget, c) == expect, "component cap at c = " + format_pi_multiple(c));
      }
    }
  });

  criterion(6, "linking numbers agree across projections", 10.0, [](Outcome& o) {
    int realized = 0;
    for (const auto& p : enumerate_patterns(true)) {
      auto r = solve_realization(p, BoxSpec{}, Rational(1, 64));
      if (!r.feasible) continue;
      ++realized;
      auto link = extract_link(*r.realized, Rational(4));
      std::vector<std::vector<int>> first;
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto m = project_generic(link, seed).diagram.linking_matrix;
        if (seed == 1) first = m;
        o.require(m == first, describe(p) + ": linking matrix depends on the projection");
      }
    }
    o.require(realized > 0, "no realized pattern");
  });

  criterion(7, "shrink machine", 1.0, [](Outcome& o) {
    auto ex = explore(64);
    o.require(ex.quiescent, "exploration did not reach quiescence");
    o.require(ex.violations.empty(), ex.violations.empty() ? "" : ex.violations.front());
    for (const auto& s : ex.states) {
      o.require(s.cone_total() + s.global_corner_count == 8, "global law broken in " + s.key());
      for (const auto& f : s.faces) o.require(f.cone_count + f.corner_count == 4, "face law broken in " + s.key());
    }
    o.require(classify_terminal(cube_state()) == TerminalKind::SmoothPoint_Cube, "cube is not case (a)");
    o.require(classify_terminal(prism_state()) == TerminalKind::SingularPoint_Prism, "prism is not case (b)");
  });

  criterion(8, "report determinism", 0, [](Outcome& o) {
    auto dir = fs::temp_directory_path() / ("cone_forge_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto real = (dir / "real.json").string();
    std::string cli = CONE_FORGE_CLI;
    int code = 0;
    run_capture(cli + " realize " + CONE_FORGE_GOLDENS + "/two_circles.json --out " + real + " 2>/dev/null", code);
    o.require(code == 0, "realize failed");
    std::vector<std::string> outputs;
    for (const char* jobs : {"1", "1", "8", "8"}) {
      outputs.push_back(run_capture(cli + " report " + real + " --jobs " + jobs + " 2>/dev/null", code));
      o.require(code == 0, std::string("report failed with --jobs ") + jobs);
    }
    o.require(!outputs[0].empty(), "empty report");
    for (const auto& out : outputs) o.require(out == outputs[0], "report output differs between runs");
    fs::remove_all(dir);
  });

  return failures == 0 ? 0 : 1;
}
