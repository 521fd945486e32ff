#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace {

struct Output {
  int code;
  std::string out;
};

Output run(const std::string& args, const std::string& input = "") {
  std::string cmd = std::string(TAYLORLAB_CLI) + " " + args + " 2>/dev/null";
  if (!input.empty()) cmd = "printf '%s' '" + input + "' | " + cmd;
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST(Cli, BohmOfYStar) {
  Output r = run("bohm 'let rec F = f F in \\f. F' --depth 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "\\f. f (f (f ◻))\n");
}

TEST(Cli, CommutationJson) {
  Output r = run("check commutation '(\\x.x) (\\x.x)' --size 6 --json");
  EXPECT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["verdict"], "Pass");
  EXPECT_EQ(j["theorem"], "commutation");
  EXPECT_FALSE(j.contains("seconds"));
}

TEST(Cli, TaylorSliceInCanonicalOrder) {
  Output r = run("taylor '(\\x.x) (\\x.x)' --size 6");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "<\\x. x>1\n<\\x. x>[\\x. x]\n");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("check head '(\\x. x x) (\\x. x x)' --size 8").code, 2);
  EXPECT_EQ(run("check equal '\\x. x' '\\x. \\y. y'").code, 1);
  EXPECT_EQ(run("check norm '\\x. x' --dmax 3").code, 0);
  EXPECT_EQ(run("parse '(x'").code, 3);
  EXPECT_EQ(run("frobnicate").code, 3);
  EXPECT_EQ(run("taylor").code, 3);
  EXPECT_EQ(run("reduce 'x y' --at root").code, 3);
}

TEST(Cli, StdinInput) {
  Output r = run("parse - --json", "(\\x. x) y");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["term"], "(\\x. x) y");
}

TEST(Cli, ReduceAndRnf) {
  Output a = run("reduce '(\\x. \\y. y) ((\\x. x x) (\\x. x x))' --json");
  auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["normal"], true);
  EXPECT_EQ(j["steps"].back()["term"], "\\y. y");
  Output b = run("rnf '<\\x. x>[<\\y. y>[z]]' --json");
  auto k = nlohmann::json::parse(b.out);
  EXPECT_EQ(k["normal_form"], nlohmann::json::array({"z"}));
  EXPECT_EQ(k["trace"].size(), 2u);
  EXPECT_EQ(k["trace"][0]["site"], "root");
  Output c = run("rsubst '<x>[x]' x '[\\y. y, z]'");
  EXPECT_EQ(c.out, "<z>[\\y. y] + <\\y. y>[z]\n");
}

TEST(Cli, DotOutput) {
  Output r = run("bohm '\\f. (\\x. f (x x)) (\\x. f (x x))' --depth 2 --dot");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("digraph bohm {", 0), 0u);
  EXPECT_NE(r.out.find("n0 -> n1"), std::string::npos);
}

TEST(Cli, SelftestDeterministic) {
  Output a = run("selftest --seed 42 --json --scale 1");
  Output b = run("selftest --seed 42 --json --scale 1");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}
