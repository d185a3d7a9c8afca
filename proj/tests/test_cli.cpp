#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "flagalg/io.hpp"
#include "flagalg/poset.hpp"

using namespace flagalg;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" FLAGALG_CLI "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return "\"" FLAGALG_DATA_DIR "/" + name + "\""; }

std::string temp(const std::string& name) { return std::string(FLAGALG_TMP_DIR) + "/" + name; }

}  // namespace

TEST(Cli, CheckAllUpToThree) {
  auto r = run("check --all-up-to 3 --ring Q");
  ASSERT_EQ(r.code, 0);
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["posets"].size(), 8u);
  EXPECT_EQ(j["summary"]["fail"], 0);
  EXPECT_EQ(j["summary"]["unsupported"], 0);
  for (const auto& p : j["posets"]) {
    for (const auto& t : p["theorems"]) EXPECT_EQ(t["status"], "pass") << t.dump();
  }
}

TEST(Cli, CheckDecomposableRing) {
  auto r = run("check " + data("twochain.poset") + " --ring Zm:6");
  EXPECT_EQ(r.code, 2);
  auto j = Json::parse(r.out);
  for (const auto& t : j["posets"][0]["theorems"]) {
    if (t["id"].get<std::string>().starts_with("flag.") && t["id"] != "flag.no_one_sided_identity") {
      EXPECT_EQ(t["status"], "pass");
    }
    EXPECT_NE(t["status"], "fail");
  }
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(run("check " + data("cycle.poset")).code, 2);
  EXPECT_EQ(run("check " + data("missing.poset")).code, 2);
  EXPECT_EQ(run("check").code, 2);
  EXPECT_EQ(run("check " + data("twochain.poset") + " --all-up-to 2").code, 2);
  EXPECT_EQ(run("check --all-up-to 6").code, 2);
  EXPECT_EQ(run("check --all-up-to 2 --ring Fp:4").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("enumerate-posets --size 7").code, 2);
  EXPECT_EQ(run("check --all-up-to 2", "FLAGALG_THREADS=zero").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, Reconstruct) {
  const auto table = temp("threechain_table.json");
  ASSERT_EQ(run("structure-constants " + data("threechain.poset") + " --n 3 --out \"" + table + "\"").code, 0);
  auto r = run("reconstruct \"" + table + "\"");
  ASSERT_EQ(r.code, 0);
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["covers"], Json::parse("[[0, 1], [1, 2]]"));
  EXPECT_EQ(j["ranks"]["dim"], 10);
  EXPECT_EQ(j["ranks"]["c3"], 3);

  const auto scrambled = temp("threechain_scrambled.json");
  ASSERT_EQ(run("structure-constants " + data("threechain.poset") + " --n 3 --scramble-seed 9 --out \"" + scrambled + "\"").code, 0);
  auto s = run("reconstruct \"" + scrambled + "\" --seed 4");
  ASSERT_EQ(s.code, 0);
  auto k = Json::parse(s.out);
  std::vector<Cover> covers;
  for (const auto& c : k["covers"]) covers.emplace_back(c[0].get<Element>(), c[1].get<Element>());
  auto recovered = Poset::from_covers(Poset::default_names(k["elements"].get<std::size_t>()), covers);
  EXPECT_TRUE(find_isomorphism(recovered, Poset::chain(3)));
}

TEST(Cli, ReconstructFailures) {
  auto r = run("reconstruct " + data("not_flag.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(Json::parse(r.out)["status"], "fail");
  EXPECT_EQ(run("reconstruct " + data("integer_table.json")).code, 2);
  EXPECT_EQ(run("reconstruct " + data("not_flag.json") + " --ring Fp:2").code, 2);
  EXPECT_EQ(run("reconstruct " + data("twochain.poset")).code, 2);
}

TEST(Cli, Derivations) {
  auto three = run("derivations " + data("twochain.poset") + " --n 3 --ring Q");
  ASSERT_EQ(three.code, 0);
  EXPECT_EQ(Json::parse(three.out)["rank"], 0);
  EXPECT_EQ(Json::parse(three.out)["status"], "pass");
  auto two = run("derivations " + data("twochain.poset") + " --n 2 --ring Q");
  ASSERT_EQ(two.code, 0);
  auto j = Json::parse(two.out);
  EXPECT_EQ(j["rank"], 2);
  EXPECT_EQ(j["basis"].size(), 2u);
  EXPECT_EQ(Json::parse(run("derivations " + data("point.poset") + " --n 2").out)["rank"], 0);
  auto four = run("derivations " + data("twochain.poset") + " --n 4 --ring Fp:3");
  ASSERT_EQ(four.code, 0);
  EXPECT_EQ(Json::parse(four.out)["regime"], "unverified");
  EXPECT_EQ(run("derivations " + data("twochain.poset") + " --n 3 --ring Zm:6").code, 2);
  EXPECT_EQ(run("derivations " + data("twochain.poset") + " --n 3 --ring Z").code, 0);
}

TEST(Cli, Multiply) {
  auto r = run("multiply " + data("twochain.poset") + " --n 3 --left '[[[\"a\",\"a\",\"b\"], \"1\"]]' --right '[[[\"a\",\"b\",\"b\"], \"1\"]]'");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out)["product"], Json::parse(R"([[["a","a","b"],"1"],[["a","b","b"],"1"]])"));
  const auto left = temp("left.json");
  std::ofstream(left) << R"([[["a","a","a"], "2"], [["a","a","b"], "1"]])";
  auto s = run("multiply " + data("twochain.poset") + " --n 3 --ring Fp:3 --left @\"" + left + "\" --right @\"" + left + "\"");
  ASSERT_EQ(s.code, 0);
  // (2e_aaa + e_aab)^2 = 4e_aaa + 2e_aab = e_aaa + 2e_aab over F_3
  EXPECT_EQ(Json::parse(s.out)["product"], Json::parse(R"([[["a","a","a"],"1 mod 3"],[["a","a","b"],"2 mod 3"]])"));
  EXPECT_EQ(run("multiply " + data("twochain.poset") + " --left '[[[\"b\",\"a\",\"a\"], \"1\"]]' --right '[]'").code, 2);
  EXPECT_EQ(run("multiply " + data("twochain.poset") + " --left 'nope' --right '[]'").code, 2);
}

TEST(Cli, EnumeratePosets) {
  auto r = run("enumerate-posets --size 4");
  ASSERT_EQ(r.code, 0);
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["count"], 16);
  EXPECT_EQ(j["posets"].size(), 16u);
}

TEST(Cli, DeterministicReports) {
  auto a = run("check --all-up-to 3 --ring Q --seed 7", "FLAGALG_THREADS=1");
  auto b = run("check --all-up-to 3 --ring Q --seed 7", "FLAGALG_THREADS=3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto out = temp("report.json");
  ASSERT_EQ(run("check --all-up-to 3 --ring Q --seed 7 --out \"" + out + "\"").code, 0);
  std::ifstream in(out);
  std::string file((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(file, a.out);
}
