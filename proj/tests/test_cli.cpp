#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(WALKDIV_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("plain exact probability") {
  auto r = run("prob --d 2 --n 2 --method exact --output plain");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "1/2\n");
}

TEST_CASE("rho json shape") {
  auto r = run("rho --k 6 --D 36 --output json");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["k"] == 6);
  CHECK(j["D"] == 36);
  CHECK(j["rho"] == 6);
  CHECK(j["method"] == "closed");
  CHECK(j["verified_brute"] == true);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("prob --d 0 --n 2").exit_code == 2);
  CHECK(run("prob --n 2").exit_code == 2);          // missing required flag
  CHECK(run("prob --d 2 --n 2 --bogus 1").exit_code == 2);
  CHECK(run("nosuchcommand").exit_code == 2);
}

TEST_CASE("resource refusal exits 1") {
  CHECK(run("prob --d 2 --n 25000 --method exact").exit_code == 1);
}

TEST_CASE("joint, corr, product, theta, weyl, subseq respond") {
  CHECK(run("joint --d 2 --n 2 --delta 3 --m 3 --output plain").out == "1/2^2\n");
  CHECK(run("corr --d 2 --n 2 --delta 3 --m 3 --output plain").out == "1/2^3\n");
  CHECK(run("product --D 2 --n 1 --m 2 --output plain").out == "3/2^2\n");
  auto theta = run("theta --d 2 --n 100 --output plain");
  CHECK(theta.out.substr(0, 3) == "0.5");
  auto weyl = run("weyl --mode sarkozy --a 1 --q 5 --k 2 --M 100 --output json");
  CHECK(nlohmann::json::parse(weyl.out)["pass"] == true);
  auto sub = run("subseq --subseq geom:1,2 --limit 64 --rho-claim 1 --output json");
  auto js = nlohmann::json::parse(sub.out);
  CHECK(js["sequence"].size() == 7);
  CHECK(js["growth_check"]["pass"] == true);
}

TEST_CASE("simulate determinism across thread counts, byte identical") {
  std::string base = "simulate --n 4000 --seed 31 --walks 4 --theta 0.4 --output csv";
  auto a = run(base + " --threads 1");
  auto b = run(base + " --threads 8");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("n,S_n,M_n,error\n", 0) == 0);

  auto c = run("simulate --n 4000 --seed 32 --walks 4 --theta 0.4 --output csv --threads 1");
  CHECK(c.out != a.out);  // the seed owns the bytes
}

TEST_CASE("simulate json feeds increments --from-report") {
  auto j = run("simulate --n 2000 --seed 7 --walks 2 --theta 0.5 --output json --out /tmp/wd_report.json");
  CHECK(j.exit_code == 0);
  auto echoed = run("increments --from-report /tmp/wd_report.json");
  CHECK(echoed.exit_code == 0);

  // identical checkpoint values as in the stored report
  std::ifstream f("/tmp/wd_report.json");
  auto rep = nlohmann::json::parse(f);
  std::string expect = "n,S_n,M_n,error\n";
  for (const auto& walk : rep["reports"])
    for (const auto& cp : walk["checkpoints"])
      expect += cp["n"].dump() + "," + cp["S_n"].dump() + "," + cp["M_n"].dump() + "," +
                cp["error"].dump() + "\n";
  CHECK(echoed.out == expect);
  std::remove("/tmp/wd_report.json");
}

TEST_CASE("simulate --walks 0 reports the deterministic mean") {
  auto r = run("simulate --n 4 --walks 0 --theta 0.5 --method exact --output plain");
  CHECK(r.out == "9/2\n");
  auto m = run("simulate --n 4 --walks 0 --theta 0.5 --method main --output plain");
  CHECK(m.out.substr(0, 3) == "4.5");
}

TEST_CASE("increments exact and Monte Carlo") {
  auto r = run("increments --n 4 --m 4 --theta 0.5 --output json");
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["exact"] == "1/2^2");
  auto r2 = run("increments --n 4 --m 8 --theta 0.5 --walks 2000 --seed 5 --output json");
  auto j2 = nlohmann::json::parse(r2.out);
  CHECK(j2.contains("mc_estimate"));
  CHECK(std::abs(j2["mc_estimate"].get<double>() - j2["exact_decimal"].get<double>()) <=
        4.0 * j2["mc_stderr"].get<double>() + 1e-9);
}

TEST_CASE("bounds subcommand emits a record") {
  auto r = run("bounds --id RHO_BOUND --grid '{\"D_max\":100,\"k_max\":5}' --output json");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["id"] == "RHO_BOUND");
  CHECK(j["pass"] == true);
}

TEST_CASE("csv output for scalar commands") {
  auto r = run("prob --d 2 --n 2 --method exact --output csv");
  CHECK(r.out == "d,n,method,value,decimal\n2,2,exact,1/2,0.5\n");
}
