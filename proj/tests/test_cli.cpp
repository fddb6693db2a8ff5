#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cone_forge/io.hpp"

using cone_forge::io::Json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(CONE_FORGE_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string golden(const std::string& name) { return std::string(CONE_FORGE_GOLDENS) + "/" + name + ".json"; }

fs::path scratch() {
  auto dir = fs::temp_directory_path() / ("cone_forge_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const char* kFigures[] = {"two_circles", "one_circle_x_y_lines", "one_circle_three_directions", "rays_three_directions"};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("enumerate and re-validate") {
    auto dir = scratch();
    auto r = run("enumerate --out " + (dir / "all.json").string());
    CHECK(r.code == 0);
    std::ifstream in(dir / "all.json");
    auto doc = Json::parse(in);
    CHECK(doc["summary"]["raw"] == 6561);
    CHECK(doc["summary"]["orbits"].get<int>() <= doc["summary"]["valid"].get<int>());
    CHECK(doc["patterns"].size() == doc["summary"]["valid"].get<std::size_t>());
    auto v = run("validate " + (dir / "all.json").string());
    CHECK(v.code == 0);
    auto vd = Json::parse(v.out);
    CHECK(vd["all_valid"] == true);
    for (std::size_t i = 0; i < vd["results"].size(); ++i)
      CHECK(vd["results"][i]["free_edge_at_vertex"] == doc["patterns"][i]["free_edge_at_vertex"]);
    auto sym = Json::parse(run("enumerate --up-to-symmetry --jobs 3").out);
    CHECK(sym["patterns"].size() == sym["summary"]["orbits"].get<std::size_t>());
    fs::remove_all(dir);
  }

  TEST_CASE("figure goldens realize") {
    for (const char* name : kFigures) {
      auto r = run("realize " + golden(name));
      CHECK(r.code == 0);
      CHECK(Json::parse(r.out)["schema"] == "cone-forge/realization/1");
    }
    auto pin = run("realize " + golden("pinwheel_unrealizable"));
    CHECK(pin.code == 1);
    auto cert = Json::parse(pin.out);
    CHECK(cert["feasible"] == false);
    CHECK_FALSE(cert["constraints"].empty());
    CHECK(run("validate " + golden("pinwheel_unrealizable")).code == 0);
  }

  TEST_CASE("usage errors") {
    CHECK(run("realize " + golden("two_circles") + " --margin 0").code == 2);
    CHECK(run("realize " + golden("two_circles") + " --box 1,1").code == 2);
    CHECK(run("realize /nonexistent.json").code == 2);
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("surface --angles x").code == 2);
    CHECK(run("shrink-explore --out /nonexistent/dir/out.json").code == 2);
  }

  TEST_CASE("report on the two-circle pattern") {
    auto dir = scratch();
    auto real = dir / "real.json";
    write(real, run("realize " + golden("two_circles")).out);
    auto r = run("report " + real.string());
    CHECK(r.code == 0);
    auto rep = Json::parse(r.out);
    CHECK(rep["link"]["closed_components"] == 2);
    CHECK(rep["link"]["open_components"] == 4);
    for (const auto& e : rep["holonomy"]) CHECK(e["spin"] == -1);
    CHECK(rep["verification"]["sound"] == true);
    CHECK(rep["config"]["box"] == Json::array({"1/1", "1/1", "1/1"}));
    CHECK(rep["tool"]["version"] == cone_forge::io::kToolVersion);

    // One offset sign flipped.
    std::ifstream in(real);
    auto doc = Json::parse(in);
    for (auto& e : doc["edges"]) {
      if (e["on_circle"].get<bool>()) continue;
      std::string s = e["offset"][0];
      e["offset"][0] = s[0] == '-' ? s.substr(1) : "-" + s;
      break;
    }
    auto bad = dir / "tampered.json";
    write(bad, doc.dump(2));
    auto t = run("report " + bad.string());
    CHECK(t.code == 1);
    auto trep = Json::parse(t.out);
    CHECK(trep["verification"]["sound"] == false);
    bool corner = false;
    for (const auto& v : trep["verification"]["violations"]) corner = corner || v.get<std::string>().rfind("corner", 0) == 0;
    CHECK(corner);
    fs::remove_all(dir);
  }

  TEST_CASE("other subcommands") {
    auto dir = scratch();
    auto real = dir / "real.json";
    write(real, run("realize " + golden("one_circle_x_y_lines")).out);
    auto h = run("holonomy " + real.string());
    CHECK(h.code == 0);
    CHECK(Json::parse(h.out)["passed"] == true);
    auto svg = dir / "d.svg";
    auto l = run("link " + real.string() + " --svg " + svg.string());
    CHECK(l.code == 0);
    CHECK(fs::file_size(svg) > 0);
    CHECK(run("holonomy " + golden("pinwheel_unrealizable")).code == 1);

    auto s = run("surface --angles 3/4pi,3/4pi,3/4pi,3/4pi");
    CHECK(s.code == 0);
    CHECK(Json::parse(s.out)["defect_sum"] == "2/1pi");
    CHECK(run("surface --angles 1/2pi,1/2pi,1/2pi").code == 1);

    auto desc = dir / "d.json";
    write(desc, R"({"schema":"cone-forge/description/1","variant":"example2","n":3,"closed_defects":["1/2pi"]})");
    CHECK(run("classify " + desc.string()).code == 1);
    write(desc, R"({"schema":"cone-forge/description/1","variant":"soul_dim2_sphere","defects":["pi","pi","pi","pi"]})");
    auto c = run("classify " + desc.string());
    CHECK(c.code == 0);
    CHECK(Json::parse(c.out)["classification"]["soul_dimension"] == 2);

    auto sh = run("shrink-explore");
    CHECK(sh.code == 0);
    CHECK(Json::parse(sh.out)["violations"].empty());
    fs::remove_all(dir);
  }

  TEST_CASE("tolerance from the environment") {
    CHECK(run("holonomy " + golden("two_circles")).code == 0);
    auto bad = std::string("CONE_FORGE_TOL=abc ") + CONE_FORGE_CLI + " shrink-explore >/dev/null 2>&1";
    int status = std::system(bad.c_str());
    CHECK(WEXITSTATUS(status) == 2);
  }
}
