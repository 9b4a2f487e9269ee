#include "catch_amalgamated.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "polyco/cli.hpp"

using namespace polyco;
using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("polyco-cli-" + name);
  fs::remove_all(p);
  return p;
}

Run run(RunConfig cfg, const fs::path& dir) {
  cfg.out = dir.string();
  std::ostringstream out, err;
  const int code = run_command(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig cmd(const std::string& command, const std::string& instance) {
  RunConfig c;
  c.command = command;
  c.instance = instance;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  auto p = fs::temp_directory_path() / ("polyco-cli-" + name + ".cfg");
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("cli: grid and mu parsing") {
  CHECK(parse_grid("201x101") == std::pair{201, 101});
  CHECK(parse_grid("8X8") == std::pair{8, 8});
  for (const char* bad : {"201", "x8", "8x", "8x8x8", "ax8", "8 x 8"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_grid(bad), UsageError);
  }
  CHECK(parse_mu("1.0,0.5") == std::vector<double>{1.0, 0.5});
  CHECK_THROWS_AS(parse_mu(""), UsageError);
  CHECK_THROWS_AS(parse_mu("1,b"), UsageError);
}

TEST_CASE("cli: list prints the catalog") {
  auto r = run(cmd("list", ""), scratch("list"));
  CHECK(r.code == kExitPass);
  CHECK_THAT(r.out, ContainsSubstring("coupled-strings"));
  CHECK_THAT(r.out, ContainsSubstring("cosymplectic-darboux"));
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
}

TEST_CASE("cli: verify exit codes") {
  auto dir = scratch("verify");
  auto c = cmd("verify", "coupled-strings");
  c.mu = std::vector<double>{1.0, 0.5};
  auto ok = run(c, dir);
  CHECK(ok.code == kExitPass);
  CHECK_THAT(ok.out, ContainsSubstring("verify: PASS"));
  CHECK(fs::exists(dir / "verify_report.txt"));
  CHECK_THAT(slurp(dir / "verify_report.txt"), ContainsSubstring("overall.pass"));

  c.samples = 0;
  auto zero = run(c, dir);
  CHECK(zero.code == kExitUsage);
  CHECK_THAT(zero.err, ContainsSubstring("sample count"));

  auto wrong_mu = cmd("verify", "coupled-strings");
  wrong_mu.mu = std::vector<double>{1.0, 0.5, 2.0};
  CHECK(run(wrong_mu, dir).code == kExitUsage);
  auto no_mu = cmd("verify", "cosymplectic-darboux");
  no_mu.mu = std::vector<double>{1.0};
  CHECK_THAT(run(no_mu, dir).err, ContainsSubstring("expects 0"));
  auto phase = cmd("verify", "");
  phase.config_path = write_config("phase", "[instance]\nname = cosymplectic-darboux\nvariant = phase-translations\n").string();
  phase.mu = std::vector<double>{0.5, -0.25};
  CHECK(run(phase, dir).code == kExitPass);
  auto membrane_mu = cmd("verify", "membrane-polar");
  membrane_mu.mu = std::vector<double>{1.0};
  CHECK(run(membrane_mu, dir).code == kExitUsage);
  auto tol = cmd("verify", "coupled-strings");
  tol.tol = -1.0;
  CHECK(run(tol, dir).code == kExitUsage);
  auto gauge = cmd("verify", "coupled-strings");
  gauge.gauge = "smallest";
  CHECK(run(gauge, dir).code == kExitUsage);
  CHECK(run(cmd("verify", "no-such-thing"), dir).code == kExitUsage);
  CHECK(run(cmd("verify", ""), dir).code == kExitUsage);
  CHECK(run(cmd("frobnicate", "coupled-strings"), dir).code == kExitUsage);
  for (const char* name : {"product-cosymplectic", "membrane-polar", "cosymplectic-darboux"}) {
    INFO(name);
    CHECK(run(cmd("verify", name), dir).code == kExitPass);
  }
}

TEST_CASE("cli: the R^4 config fails verification with a rank message") {
  auto c = cmd("verify", "");
  c.config_path = POLYCO_CONFIG_DIR "/r4-broken.cfg";
  auto r = run(c, scratch("r4"));
  CHECK(r.code == kExitFail);
  CHECK_THAT(r.out, ContainsSubstring("first failed check: structure.kernel_rank (rank found 0, expected 2)"));
}

TEST_CASE("cli: shipped configs") {
  auto dir = scratch("shipped");
  auto c = cmd("verify", "");
  c.config_path = POLYCO_CONFIG_DIR "/oscillator.cfg";
  CHECK(run(c, dir).code == kExitPass);
  c.command = "reduce";
  CHECK(run(c, dir).code == kExitUsage);
  c.config_path = POLYCO_CONFIG_DIR "/strings-custom.cfg";
  c.command = "compare";
  CHECK(run(c, dir).code == kExitPass);
  c.config_path = POLYCO_CONFIG_DIR "/membrane-unit.cfg";
  c.command = "solve";
  auto m = run(c, dir);
  CHECK(m.code == kExitPass);
  CHECK(fs::exists(dir / "solution.svg"));
}

TEST_CASE("cli: grid bounds and the CFL condition") {
  auto dir = scratch("grid");
  auto c = cmd("solve", "coupled-strings");
  c.grid = std::pair{4, 4};
  CHECK(run(c, dir).code == kExitUsage);
  c.grid = std::pair{8, 8};
  CHECK(run(c, dir).code == kExitPass);
  c.grid = std::pair{8, 7};
  CHECK(run(c, dir).code == kExitUsage);
  c.grid = std::pair{8, 201};
  auto cfl = run(c, dir);
  CHECK(cfl.code == kExitFail);
  CHECK_THAT(cfl.out, ContainsSubstring("first failed check: cfl"));
  CHECK(run(cmd("solve", "product-cosymplectic"), dir).code == kExitUsage);
}

TEST_CASE("cli: strings solve writes the grid and the travelling-wave error") {
  auto dir = scratch("solve-strings");
  auto c = cmd("solve", "");
  c.config_path = POLYCO_CONFIG_DIR "/strings-free.cfg";
  c.svg = true;
  auto r = run(c, dir);
  CHECK(r.code == kExitPass);
  const auto pos = r.out.find("linf error vs sin(x-t): ");
  REQUIRE(pos != std::string::npos);
  const double err = std::stod(r.out.substr(pos + 24));
  CHECK(err > 0.0);
  CHECK(err < 2e-4);
  const auto csv = slurp(dir / "solution.csv");
  CHECK_THAT(csv, ContainsSubstring("\nt,x,q1,q2,p1t,p1x,p2t,p2x\n"));
  CHECK(csv.rfind("# scheme", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') > 201 * 201);
  CHECK(slurp(dir / "solution.svg").rfind("<svg", 0) == 0);

  c.tol = 1e-8;
  auto strict = run(c, dir);
  CHECK(strict.code == kExitFail);
  CHECK_THAT(strict.out, ContainsSubstring("first failed check: hdw."));
}

TEST_CASE("cli: membrane solve prints zeta(2)") {
  auto r = run(cmd("solve", "membrane-polar"), scratch("solve-membrane"));
  CHECK(r.code == kExitPass);
  CHECK_THAT(r.out, ContainsSubstring("zeta(2) = -1\n"));
  CHECK_THAT(r.out, ContainsSubstring("closed form zeta(2) = -1"));
}

TEST_CASE("cli: reduce exports the reduced structures") {
  auto dir = scratch("reduce");
  auto s = run(cmd("reduce", "coupled-strings"), dir);
  CHECK(s.code == kExitPass);
  auto cfg = slurp(dir / "reduced.cfg");
  CHECK_THAT(cfg, ContainsSubstring("coords = t, x, q, pt, px"));
  CHECK_THAT(cfg, ContainsSubstring("1.t = 1\n2.x = 1\n"));
  CHECK_THAT(cfg, ContainsSubstring("1.q^pt = 0.5\n2.q^px = 0.5\n"));

  auto m = run(cmd("reduce", "membrane-polar"), dir);
  CHECK(m.code == kExitPass);
  cfg = slurp(dir / "reduced.cfg");
  CHECK_THAT(cfg, ContainsSubstring("coords = r, zeta, pr"));
  CHECK_THAT(cfg, ContainsSubstring("[tau]\n1.r = 1\n"));
  CHECK_THAT(cfg, ContainsSubstring("[omega]\n1.zeta^pr = 1\n"));

  // trivial group: the export is the original structure
  auto t = run(cmd("reduce", "cosymplectic-darboux"), dir);
  CHECK(t.code == kExitPass);
  cfg = slurp(dir / "reduced.cfg");
  CHECK_THAT(cfg, ContainsSubstring("[tau]\n1.t = 1\n"));
  CHECK_THAT(cfg, ContainsSubstring("[omega]\n1.q^p = 1\n"));

  auto p = cmd("reduce", "coupled-strings");
  p.gauge = "minimal";
  CHECK(run(p, dir).code == kExitPass);
  CHECK(run(cmd("reduce", "product-cosymplectic"), dir).code == kExitPass);
}

TEST_CASE("cli: compare") {
  auto dir = scratch("compare");
  auto c = cmd("compare", "coupled-strings");
  auto r = run(c, dir);
  CHECK(r.code == kExitPass);
  CHECK_THAT(r.out, ContainsSubstring("refinement ratio"));
  c.mu = std::vector<double>{1.0, 0.5};
  CHECK(run(c, dir).code == kExitUsage);
  c.mu = std::vector<double>{1.0, 0.0};
  c.tol = 1e-6;
  auto strict = run(c, dir);
  CHECK(strict.code == kExitFail);
  CHECK_THAT(strict.out, ContainsSubstring("first failed check: gap.linf (max residual"));
  auto m = run(cmd("compare", "membrane-polar"), dir);
  CHECK(m.code == kExitPass);
  CHECK_THAT(m.out, ContainsSubstring("zeta_t defect"));
  CHECK(run(cmd("compare", "cosymplectic-darboux"), dir).code == kExitUsage);
}

TEST_CASE("cli: config [run] values and flag precedence") {
  auto dir = scratch("run-section");
  auto small = write_config("small", "[instance]\nname = coupled-strings\n[run]\ngrid = 4x4\n");
  auto c = cmd("solve", "");
  c.config_path = small.string();
  CHECK(run(c, dir).code == kExitUsage);
  c.grid = std::pair{16, 16};
  auto r = run(c, dir);
  CHECK(r.code == kExitPass);
  CHECK_THAT(r.out, ContainsSubstring("grid 16x16"));
  auto unknown = write_config("unknown", "[instance]\nname = coupled-strings\n[run]\ncolour = red\n");
  c.config_path = unknown.string();
  CHECK(run(c, dir).code == kExitUsage);
  auto conflict = cmd("verify", "membrane-polar");
  conflict.config_path = small.string();
  CHECK(run(conflict, dir).code == kExitUsage);
  auto broken = cmd("verify", "");
  broken.config_path = write_config("broken", "[instance\n").string();
  CHECK(run(broken, dir).code == kExitUsage);
}

TEST_CASE("cli: outputs are byte-identical across runs") {
  for (const char* command : {"verify", "solve", "reduce", "compare"}) {
    INFO(command);
    auto a = scratch(std::string("det-a-") + command), b = scratch(std::string("det-b-") + command);
    auto c = cmd(command, "coupled-strings");
    c.grid = std::pair{33, 33};
    c.seed = 7;
    c.samples = 40;
    auto ra = run(c, a), rb = run(c, b);
    CHECK(ra.code == rb.code);
    for (const auto& entry : fs::directory_iterator(a)) {
      const auto name = entry.path().filename();
      CHECK(slurp(a / name) == slurp(b / name));
    }
  }
}
