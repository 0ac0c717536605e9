#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

std::string tool() {
  const char* p = std::getenv("KCDICT");
  REQUIRE_MESSAGE(p != nullptr, "KCDICT env var must point at the kcdict binary");
  return p;
}

RunResult run(const std::string& args) {
  const std::string cmd = tool() + " " + args + " 2>&1";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  RunResult r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string tmp(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::vector<char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("build then info echoes the trunc class structure") {
  const std::string dict = tmp("kc_cli_trunc.kdt");
  const auto b = run("build --cipher trunc --param 2 --n 8 --m 8 --seed 1 --out " + dict);
  REQUIRE_MESSAGE(b.code == 0, b.out);
  const auto i = run("info --dict " + dict);
  REQUIRE(i.code == 0);
  CHECK(i.out.find("entry_count=64") != std::string::npos);
  CHECK(i.out.find("total_keys=256") != std::string::npos);
  CHECK(i.out.find("cipher=trunc") != std::string::npos);
  std::filesystem::remove(dict);
}

TEST_CASE("identical argv reproduces byte-identical dictionaries") {
  const std::string d1 = tmp("kc_cli_r1.kdt"), d2 = tmp("kc_cli_r2.kdt");
  const std::string args = "build --cipher ideal --n 18 --m 10 --keys sample --seed 42 --out ";
  REQUIRE(run(args + d1).code == 0);
  REQUIRE(run(args + d2 + " --workers 3").code == 0);
  CHECK(slurp(d1) == slurp(d2));
  std::filesystem::remove(d1);
  std::filesystem::remove(d2);
}

TEST_CASE("build + capture from dictionary + attack recovers everything uniquely") {
  const std::string dict = tmp("kc_cli_atk.kdt"), targets = tmp("kc_cli_atk.txt");
  REQUIRE(run("build --cipher ideal --n 20 --m 10 --keys sample --seed 5 --out " + dict)
              .code == 0);
  REQUIRE(run("capture --n 20 --t 10 --seed 6 --dict " + dict + " --truth --out " + targets)
              .code == 0);
  const auto a = run("attack --dict " + dict + " --targets " + targets);
  REQUIRE_MESSAGE(a.code == 0, a.out);
  CHECK(a.out.find("hits_unique=1024") != std::string::npos);
  CHECK(a.out.find("misses=0") != std::string::npos);
  CHECK(a.out.find("false_positives=0") != std::string::npos);
  std::filesystem::remove(dict);
  std::filesystem::remove(targets);
}

TEST_CASE("verify prop2 prints the 1 - e^-4 bound") {
  const auto r = run("verify prop2 --n 20 --m 10 --t 12");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("p_hat_exp_bound=0.981684") != std::string::npos);
}

TEST_CASE("verify prop1 reports the chain") {
  const auto r = run("verify prop1 --n 4 --m 4");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("p_final_bound=0.937500") != std::string::npos);
  CHECK(r.out.find("exact_rational=1") != std::string::npos);
}

TEST_CASE("verify mc dispatches on --t: distinctness without, hit rate with") {
  const auto d = run("verify mc --n 4 --m 6 --trials 500 --seed 2");
  REQUIRE(d.code == 0);
  CHECK(d.out.find("mc_distinctness") != std::string::npos);
  const auto h = run("verify mc --n 12 --m 8 --t 5 --trials 50 --seed 2");
  REQUIRE(h.code == 0);
  CHECK(h.out.find("mc_hit_rate") != std::string::npos);
}

TEST_CASE("exit codes: usage errors are 1, data errors are 2") {
  CHECK(run("frobnicate").code == 1);                         // unknown subcommand
  CHECK(run("build --n 8").code == 1);                        // missing required flags
  CHECK(run("verify prop1 --n 4 --m 9").code == 1);           // range violation
  CHECK(run("build --cipher ideal --n 8 --m 4 --keys sample --out /tmp/kc_x.kdt").code ==
        1);  // sampling without --seed

  const std::string dict = tmp("kc_cli_corrupt.kdt");
  REQUIRE(run("build --cipher ideal --n 8 --m 4 --out " + dict).code == 0);
  {
    std::fstream f(dict, std::ios::in | std::ios::out | std::ios::binary);
    f.put('X');  // clobber the magic
  }
  const auto r = run("info --dict " + dict);
  CHECK(r.code == 2);
  CHECK(r.out.find("bad magic") != std::string::npos);
  std::filesystem::remove(dict);
}

TEST_CASE("x0 override is honored and validated") {
  const std::string dict = tmp("kc_cli_x0.kdt");
  REQUIRE(run("build --cipher ideal --n 8 --m 4 --x0 a1b2c3 --out " + dict).code == 0);
  const auto i = run("info --dict " + dict);
  CHECK(i.out.find("x0=a1b2c3") != std::string::npos);
  CHECK(run("build --cipher ideal --n 8 --m 4 --x0 a1b2 --out " + dict).code == 1);
  std::filesystem::remove(dict);
}
