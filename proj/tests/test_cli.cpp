#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  const std::string out_path = "/tmp/cmo_cli_test_out.txt";
  const std::string cmd = std::string("\"") + CMO_CLI_PATH + "\" " + args +
                          " > " + out_path + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WEXITSTATUS(raw);
  std::ifstream in(out_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  res.stdout_text = ss.str();
  return res;
}

}  // namespace

TEST_CASE("norm subcommand prints the indicator central norm") {
  const auto res = run_cli("norm --f \"chi:t=1\" --phi \"power:p=2\" --lambda 0 --n 1");
  CHECK(res.exit_code == 0);
  CHECK(res.stdout_text.substr(0, 7) == "1.41421");
}

TEST_CASE("grammar rejections exit with code 2") {
  CHECK(run_cli("norm --f \"blob:t=1\" --phi \"power:p=2\" --lambda 0 --n 1").exit_code == 2);
  CHECK(run_cli("norm --f \"chi:t=1\" --phi \"power:p=0.3\" --lambda 0 --n 1").exit_code == 2);
  // preset constraint violations name the rule and also exit 2
  CHECK(run_cli("check --example 1 --n 1 --alpha 0.5 --lambda 0 --p 2 --a 0").exit_code == 2);
}

TEST_CASE("strict mode turns divergence flags into exit 3") {
  const std::string preset =
      "check --example 2 --n 1 --alpha 0.25 --lambda 0.5 --p1 1.3333 --p2 1.6 "
      "--grid-count 24";
  CHECK(run_cli(preset).exit_code == 0);
  CHECK(run_cli(preset + " --strict").exit_code == 3);
}

TEST_CASE("csv export carries the margin-curve header") {
  const auto res = run_cli(
      "check --example 2 --n 1 --alpha 0.25 --lambda 0.5 --p1 1.3333 --p2 1.6 "
      "--grid-count 16 --format csv");
  CHECK(res.exit_code == 0);
  CHECK(res.stdout_text.find("# condition 1") != std::string::npos);
  CHECK(res.stdout_text.find("u,r,lhs,rhs,ratio") != std::string::npos);
  CHECK(res.stdout_text.find("# condition 3") != std::string::npos);
}

TEST_CASE("constants subcommand reports the ledger in json") {
  const auto res = run_cli(
      "constants --n 1 --alpha 0.5 --lambda 0 --mu 0.5 --c0 2 --c1 4 --c2 5");
  CHECK(res.exit_code == 0);
  CHECK(res.stdout_text.find("\"C6\": 16.0") != std::string::npos);
  CHECK(res.stdout_text.find("\"command\": \"constants\"") != std::string::npos);
}

TEST_CASE("witness subcommand emits the growth sequence") {
  const auto res = run_cli(
      "witness --phi \"power:p=2\" --lambda 0.5 --n 1 --R 2 4 --alpha 0.5 "
      "--psi \"power:p=2\"");
  CHECK(res.exit_code == 0);
  CHECK(res.stdout_text.find("\"ratio_sequence\"") != std::string::npos);
  CHECK(res.stdout_text.find("\"nontrivial\": true") != std::string::npos);
}
