// End-to-end checks of the command-line binary: output pins, the 0/1/2 exit
// contract, and byte-identical reports. The binary path arrives as the last
// process argument (wired up by ctest).

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

std::string g_bin;

struct RunResult {
  int exit_code = -1;
  std::string out;  // stdout and stderr combined
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = "\"" + g_bin + "\" " + args + " 2>&1";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("presets pins the closed-form coefficients") {
  const auto r5 = run_cli("presets --n 5");
  CHECK(r5.exit_code == 0);
  CHECK(contains(r5.out,
                 "| conformal | 1 | -0.333333333333 | 0.333333333333 | 0 | -0.333333333333 | "
                 "0.333333333333 | 0 | 0.0833333333333 |"));
  const auto r4 = run_cli("presets --n 4");
  CHECK(r4.exit_code == 0);
  CHECK(contains(r4.out, "| concircular | 1 | 0 | 0 | 0 | 0 | 0 | 0 | -0.0833333333333 |"));
  const auto r3 = run_cli("presets --n 3");
  CHECK(r3.exit_code == 0);
  CHECK(contains(r3.out, "| projective | 1 | -0.5 | 0.5 | 0 | 0 | 0 | 0 | 0 |"));
}

TEST_CASE("verify passes on builtin entries and reports tagged rows") {
  const auto r = run_cli("verify --manifold kenmotsu-warped-3d --points 3");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "eq-curvature"));
  CHECK(contains(r.out, "eq-str-9"));
  CHECK(contains(r.out, "overall: pass"));

  const auto flat = run_cli("verify --manifold flat-4d --points 3");
  CHECK(flat.exit_code == 0);
}

TEST_CASE("exit contract: pass 0, injected residual failure 1, config error 2") {
  CHECK(run_cli("verify --manifold h3 --points 2").exit_code == 0);
  const auto fail = run_cli("verify --manifold h3 --points 2 --tol 1e-20");
  CHECK(fail.exit_code == 1);
  CHECK(contains(fail.out, "FAIL"));

  const auto bad = run_cli("verify --manifold no-such-manifold");
  CHECK(bad.exit_code == 2);
  CHECK(contains(bad.out, "unknown manifold"));

  const auto path = write_temp("nf_cli_bad.json", R"({
    "name": "broken", "dimension": 3,
    "metric": {"0,0": "1", "1,1": "cos(x0", "2,2": "1"},
    "chart_box": [[0, 1], [0, 1], [0, 1]]
  })");
  const auto cfg = run_cli("verify --manifold " + path);
  CHECK(cfg.exit_code == 2);
  CHECK(contains(cfg.out, "at byte"));

  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("verify --manifold h3 --no-such-flag").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("fit reproduces the pinned condition fits") {
  const auto km = run_cli("fit --manifold kenmotsu-warped-3d --ta r --tb r --sigma g --points 5");
  CHECK(km.exit_code == 0);
  CHECK(contains(km.out, "mean L = -1.000000"));

  const auto deg = run_cli("fit --manifold s5 --ta r --tb r --sigma g");
  CHECK(deg.exit_code == 0);
  CHECK(contains(deg.out, "degenerate: 20/20 points"));

  const auto rnd = run_cli("fit --manifold random-3d --ta r --tb r --sigma s --ell 1 --points 5");
  CHECK(rnd.exit_code == 0);
  CHECK(contains(rnd.out, "mean L = 1.000000"));

  const auto ric =
      run_cli("fit --manifold kenmotsu-warped-5d --ta r --tb ric --sigma g --points 4");
  CHECK(ric.exit_code == 0);
  CHECK(contains(ric.out, "mean L = -1.000000"));

  const auto dich =
      run_cli("fit --manifold kenmotsu-warped-3d --ta r --tb w4 --sigma g --dichotomy --points 4");
  CHECK(dich.exit_code == 0);
  CHECK(contains(dich.out, "l-branch 4"));
  CHECK(contains(dich.out, "violation 0"));

  CHECK(run_cli("fit --manifold s5 --ta nope --tb r --sigma g").exit_code == 2);
  CHECK(run_cli("fit --manifold s5 --ta w4 --tb r --sigma g --dichotomy").exit_code == 2);
}

TEST_CASE("table renders predictions with witnesses") {
  const auto tps = run_cli("table --name tps --n 5");
  CHECK(tps.exit_code == 0);
  CHECK(contains(tps.out, "| kenmotsu | -1 | -4 g | witnessed |"));
  CHECK(contains(tps.out, "| n(k)-contact | k | k (n-1) g | unwitnessed |"));
  CHECK(contains(tps.out, "de-sitter-4d"));

  const auto w2 = run_cli("table --name w2 --n 5");
  CHECK(w2.exit_code == 0);
  CHECK(contains(w2.out, "(r/n) g"));

  const auto rr = run_cli("table --name rr-sl --ell 2 --n 3");
  CHECK(rr.exit_code == 0);
  CHECK(contains(rr.out, "| kenmotsu | -0.25 | S^2 = 4 g | unwitnessed |"));

  const auto unknown = run_cli("table --name nope --n 5");
  CHECK(unknown.exit_code == 2);
  CHECK(contains(unknown.out, "tps, w2, rr-sl"));
}

TEST_CASE("JSON reports are byte-identical across runs") {
  const std::string cmds[] = {
      "verify --manifold kenmotsu-warped-3d --points 3 --format json",
      "fit --manifold kenmotsu-warped-3d --ta r --tb r --sigma g --points 4 --dichotomy "
      "--format json",
      "table --name tps --n 4 --points 2 --format json",
      "fit --manifold random-3d --seed 9 --ta r --tb r --sigma s --ell 1 --points 3 "
      "--format json",
  };
  for (const auto& c : cmds) {
    const auto a = run_cli(c);
    const auto b = run_cli(c);
    CHECK(a.exit_code == 0);
    REQUIRE(a.out == b.out);
  }
  const auto j = run_cli("verify --manifold s3 --points 2 --format json");
  CHECK(contains(j.out, "\"suites\""));
  CHECK(contains(j.out, "\"paper_tag\""));
  CHECK(contains(j.out, "\"manifold\": \"s3\""));
}

int main(int argc, char** argv) {
  if (argc > 1 && argv[argc - 1][0] != '-') {
    g_bin = argv[argc - 1];
    --argc;
  }
  if (g_bin.empty()) {
    std::fprintf(stderr, "usage: test_cli [doctest options] <path-to-binary>\n");
    return 2;
  }
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
