#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "kfreelat/json_io.hpp"

using namespace kfreelat;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

// Runs the tool through the shell, capturing stdout. The binary path comes
// from the build system.
CliResult run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += std::string(KFREELAT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0)
    result.output.append(buf, got);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path scratch_dir() {
  fs::path dir =
      fs::temp_directory_path() / ("kfreelat-cli-" + std::to_string(getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("generate emits the library configuration") {
  CliResult r = run_cli("generate -n 2 -k 1 -r 2.3");
  REQUIRE(r.exit_code == 0);
  Configuration cfg = configuration_from_json(r.output);
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  Configuration expected = generate(params, z2, 2.3);
  CHECK(cfg.window_radius == expected.window_radius);
  CHECK(cfg.points == expected.points);
  CHECK(cfg.points.size() == 16);
}

TEST_CASE("certificates round trip through verify") {
  fs::path dir = scratch_dir();
  fs::path hole = dir / "hole.json";
  CliResult made =
      run_cli("holes -n 1 -k 2 -r 1 -o " + hole.string());
  REQUIRE(made.exit_code == 0);

  CliResult verified = run_cli("verify -i " + hole.string());
  CHECK(verified.exit_code == 0);
  CHECK(verified.output.find("\"valid\": true") != std::string::npos);

  fs::path witness = dir / "witness.json";
  CliResult wit = run_cli("proximality -n 2 -k 1 --shift 1,0 --rho 1 -o " +
                          witness.string());
  REQUIRE(wit.exit_code == 0);
  CliResult wit_verified = run_cli("verify -i " + witness.string());
  CHECK(wit_verified.exit_code == 0);
  CHECK(wit_verified.output.find("\"valid\": true") != std::string::npos);
}

TEST_CASE("verify rejects a doctored certificate") {
  fs::path dir = scratch_dir();
  fs::path hole = dir / "tamper.json";
  REQUIRE(run_cli("holes -n 1 -k 2 -r 1 -o " + hole.string()).exit_code == 0);
  std::string text = slurp(hole);
  std::size_t at = text.find("\"549\"");
  REQUIRE(at != std::string::npos);
  text.replace(at, 5, "\"550\"");
  std::ofstream(hole, std::ios::binary) << text;

  CliResult verified = run_cli("verify -i " + hole.string());
  CHECK(verified.exit_code == 2);
  CHECK(verified.output.find("\"valid\": false") != std::string::npos);
}

TEST_CASE("identical runs produce identical bytes") {
  fs::path dir = scratch_dir();
  fs::path a = dir / "a.json";
  fs::path b = dir / "b.json";
  REQUIRE(run_cli("holes -n 2 -k 1 -r 1 -o " + a.string()).exit_code == 0);
  REQUIRE(run_cli("holes -n 2 -k 1 -r 1 -o " + b.string()).exit_code == 0);
  CHECK(slurp(a) == slurp(b));

  CliResult f1 = run_cli("freq -n 2 -k 1 --rho 1.1 --scan 40");
  CliResult f2 = run_cli("freq -n 2 -k 1 --rho 1.1 --scan 40 --threads 3");
  CHECK(f1.exit_code == 0);
  CHECK(f1.output == f2.output);
  CHECK(f1.output.rfind("patch,empirical,exact,truncation_error\n", 0) == 0);
}

TEST_CASE("output directory override") {
  fs::path dir = scratch_dir() / "override";
  fs::create_directories(dir);
  CliResult r = run_cli("density -n 1 -k 2 -r 100 -o dens.json",
                        "KFREELAT_OUT_DIR=" + dir.string());
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(dir / "dens.json"));
  std::string text = slurp(dir / "dens.json");
  CHECK(text.find("\"estimate\"") != std::string::npos);
}

TEST_CASE("spectrum emits plot ready rows") {
  CliResult r = run_cli("spectrum -n 2 -k 1 --box 0:1,0:1 --threshold 0.05");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.rfind("y1,y2,q,intensity,ratio\n", 0) == 0);
  CHECK(r.output.find("1/2") != std::string::npos);
  CHECK(r.output.find(",2,") != std::string::npos);
}

TEST_CASE("exit codes separate failure classes") {
  // n = k = 1 is rejected up front.
  CHECK(run_cli("density -n 1 -k 1 -r 10").exit_code == 2);
  // A 20 ball hole needs far more than 64 bits of modulus.
  CHECK(run_cli("holes -n 2 -k 1 -r 20 --max-bits 64").exit_code == 3);
  // Unreadable input.
  CHECK(run_cli("verify -i /nonexistent/cert.json").exit_code == 2);
  // Unknown flags come back nonzero from the parser.
  CHECK(run_cli("generate --nonsense 3").exit_code != 0);
  CHECK(run_cli("--version").exit_code == 0);
}

}  // TEST_SUITE
