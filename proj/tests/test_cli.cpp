// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

using std::string;

namespace {

struct RunResult {
  int exit_code;
  string out;
};

RunResult run_cli(const string& args) {
  string cmd = string(NFC_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), n);
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, out};
}

string data(const string& f) { return string(NFC_TEST_DATA_DIR) + "/" + f; }

string slurp(const string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return string(std::istreambuf_iterator<char>(in),
                std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("net subcommands") {
  auto v = run_cli("net validate --net " + data("butterfly_sum.net"));
  CHECK(v.exit_code == 0);
  CHECK(v.out.find("12 edges") != string::npos);

  auto c = run_cli("net mincut --net " + data("butterfly_sum.net") +
                   " --from s1");
  CHECK(c.exit_code == 0);
  CHECK(c.out == "3\n");

  auto b = run_cli("net bounds --net " + data("butterfly_sum.net") +
                   " --target sum --tau 1 --q 5 --seed 3");
  CHECK(b.exit_code == 0);
  CHECK(b.out.find("\"lower\": \"1\"") != string::npos);
  CHECK(b.out.find("\"upper\": \"1\"") != string::npos);
}

TEST_CASE("distance and robustness golden values") {
  for (auto code : {"butterfly_sum_gf5.code", "butterfly_sum_gf4.code"}) {
    auto d = run_cli("code distance --net " + data("butterfly_sum.net") +
                     " --code " + data(code) + " --target sum --k 1");
    CHECK(d.exit_code == 0);
    CHECK(d.out == "3\n");
  }
  auto r1 = run_cli("code robust --net " + data("butterfly_sum.net") +
                    " --code " + data("butterfly_sum_gf5.code") +
                    " --target sum --k 1 --tau 1");
  CHECK(r1.out == "true\n");
  auto r2 = run_cli("code robust --net " + data("butterfly_sum.net") +
                    " --code " + data("butterfly_sum_gf5.code") +
                    " --target sum --k 1 --tau 2");
  CHECK(r2.out == "false\n");
}

TEST_CASE("decode transcripts") {
  auto ok = run_cli("decode --net " + data("butterfly_sum.net") + " --code " +
                    data("butterfly_sum_gf7.code") +
                    " --target sum --k 1 --tau 1 --received " +
                    data("received_gf7_ok.txt"));
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("\"status\": \"ok\"") != string::npos);
  CHECK(ok.out.find("3") != string::npos);

  auto far = run_cli("decode --net " + data("butterfly_sum.net") + " --code " +
                     data("butterfly_sum_gf7.code") +
                     " --target sum --k 1 --tau 1 --received " +
                     data("received_gf7_far.txt"));
  CHECK(far.exit_code == 1);
  CHECK(far.out.find("detected-failure") != string::npos);

  auto stars = run_cli("decode --net " + data("butterfly_sum.net") +
                       " --code " + data("butterfly_sum_gf5.code") +
                       " --target sum --k 1 --received " +
                       data("received_gf5_stars.txt"));
  CHECK(stars.exit_code == 0);
  CHECK(stars.out.find("\"erasure\"") != string::npos);

  auto outage = run_cli("decode --net " + data("butterfly_sum.net") +
                        " --code " + data("butterfly_sum_gf5.code") +
                        " --target sum --k 1 --outages e10,e12 --received " +
                        data("received_gf5_stars.txt"));
  CHECK(outage.exit_code == 0);
  CHECK(outage.out.find("\"outage\"") != string::npos);
}

TEST_CASE("transmit") {
  auto t = run_cli("code simulate --net " + data("butterfly_sum.net") +
                   " --code " + data("butterfly_sum_gf5.code") + " --x 1,1");
  CHECK(t.exit_code == 0);
  CHECK(t.out == "2 2 4\n");
}

TEST_CASE("construction determinism: same seed, same bytes") {
  string out1 = "/tmp/nfc_cli_det1.code";
  string out2 = "/tmp/nfc_cli_det2.code";
  string base = "code construct-sum --net " + data("butterfly_sum.net") +
                " --k 1 --q 5 --seed 99 --out ";
  auto r1 = run_cli(base + out1);
  auto r2 = run_cli(base + out2);
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(r1.out == r2.out);
  CHECK(slurp(out1) == slurp(out2));

  auto r3 = run_cli("code construct-sum --net " + data("butterfly_sum.net") +
                    " --k 1 --q 5 --seed 100 --out /tmp/nfc_cli_det3.code");
  CHECK(r3.exit_code == 0);
  CHECK(slurp("/tmp/nfc_cli_det3.code") != slurp(out1));

  // the produced code checks out at distance 3
  auto d = run_cli("code distance --net " + data("butterfly_sum.net") +
                   " --code " + out1 + " --target sum --k 1");
  CHECK(d.out == "3\n");
}

TEST_CASE("identity construction through the CLI") {
  auto r = run_cli("code construct-identity --net " +
                   data("butterfly_sum.net") +
                   " --k 1 --q 13 --seed 7 --out /tmp/nfc_cli_id.code");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"d_min\": 2") != string::npos);
  auto d = run_cli("code distance --net " + data("butterfly_sum.net") +
                   " --code /tmp/nfc_cli_id.code --target identity --k 1");
  CHECK(d.out == "2\n");
}

TEST_CASE("gradient pipeline") {
  auto plan = run_cli("grad plan --r 1,1,1 --s 1,1,2 --tau-s 1 --m 1 --out "
                      "/tmp/nfc_cli_assign.json");
  CHECK(plan.exit_code == 0);
  CHECK(plan.out == "1/2,1/2,1\n");

  auto build = run_cli(
      "grad build --assignment /tmp/nfc_cli_assign.json --tau-s 1 --m 1 "
      "--p 2 --q 7 --seed 5 --out /tmp/nfc_cli_scheme.json");
  CHECK(build.exit_code == 0);

  std::ofstream g("/tmp/nfc_cli_grads.json");
  g << "[[1,2],[3,4]]\n";
  g.close();
  auto sim = run_cli(
      "grad simulate --scheme /tmp/nfc_cli_scheme.json --gradients "
      "/tmp/nfc_cli_grads.json --stragglers 1 --seed 3");
  CHECK(sim.exit_code == 0);
  CHECK(sim.out.find("\"success\": true") != string::npos);
}

TEST_CASE("exit codes: domain errors 1, usage errors 2") {
  auto missing = run_cli("net mincut --net /does/not/exist --from s1");
  CHECK(missing.exit_code == 1);
  auto usage = run_cli("net mincut");
  CHECK(usage.exit_code == 2);
  auto badsub = run_cli("frobnicate");
  CHECK(badsub.exit_code == 2);
  auto tau_big = run_cli("net bounds --net " + data("butterfly_sum.net") +
                         " --target sum --tau 5 --q 5 --seed 1");
  CHECK(tau_big.exit_code == 1);
}
