// End-to-end checks of the command-line tool: output, exit codes and the
// stability of the machine-readable schema against golden files.

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr interleaved
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(FCOMP_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) {
    res.output.append(buf.data(), n);
    if (n < buf.size()) break;
  }
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string golden(const std::string& name) {
  std::ifstream in(std::string(FCOMP_GOLDEN_DIR) + "/" + name);
  EXPECT_TRUE(in.good()) << name;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(Cli, BoundTextOutput) {
  RunResult r = run_cli("bound --instance n1");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("min-cut(n1, product-plus-mod2) = 2.000000"),
            std::string::npos)
      << r.output;
  EXPECT_NE(r.output.find("|C| = 2, classes = 2"), std::string::npos);
}

TEST(Cli, BoundN2PrimeNotesTheKnownGap) {
  RunResult r = run_cli("bound --instance n2-prime");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("= 1.000000"), std::string::npos);
  EXPECT_NE(r.output.find("{e2, e4}"), std::string::npos);
  EXPECT_NE(r.output.find("log_6(4)"), std::string::npos) << r.output;
}

TEST(Cli, VerifyReportsAllInputs) {
  RunResult r = run_cli("verify --instance n1");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("64/64 inputs correct"), std::string::npos) << r.output;
}

TEST(Cli, VerifyFailureExitsOne) {
  // A deliberately wrong code: constant zero on e7.
  std::string dir = testing::TempDir();
  ASSERT_EQ(run_cli("instance n1 --emit --dir " + dir).exit_code, 0);
  std::string path = dir + "/n1.code";
  {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    auto at = text.find("enc e7");
    ASSERT_NE(at, std::string::npos);
    auto end = text.find('\n', at);
    std::string broken = text.substr(0, at) + "enc e7 0 0 0 0 0 0 0 0" + text.substr(end);
    std::ofstream out(path);
    out << broken;
  }
  RunResult r = run_cli("verify --network " + dir + "/n1.network --function " + dir +
                        "/n1.function --code " + path);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("counterexample"), std::string::npos) << r.output;
}

TEST(Cli, MalformedInputExitsTwo) {
  std::string path = testing::TempDir() + "/broken.network";
  {
    std::ofstream out(path);
    out << "source a\nsink t\nedgy x a t\n";
  }
  RunResult r = run_cli("bound --network " + path + " --function " + path);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("broken.network:3"), std::string::npos) << r.output;

  EXPECT_EQ(run_cli("bound --instance n2").exit_code, 2);  // invalid in standard form
  EXPECT_EQ(run_cli("instance no-such-instance").exit_code, 2);
}

TEST(Cli, BudgetRefusalExitsThree) {
  RunResult r = run_cli("search --instance n1 --n 1 --k 2 --budget 1024");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.output.find("budget"), std::string::npos) << r.output;
}

TEST(Cli, SimulateMatchesWorkedExample) {
  RunResult r = run_cli("simulate --instance n1 --input \"1 1 0; 0 1 1\"");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("e7 = 1"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("psi = (1,1)"), std::string::npos) << r.output;
}

TEST(Cli, SplitSourcesRoundTrip) {
  std::string dir = testing::TempDir();
  std::string out_path = dir + "/split.network";
  RunResult r = run_cli("split-sources --instance n2 --output " + out_path);
  EXPECT_EQ(r.exit_code, 0);
  std::ifstream in(out_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  EXPECT_NE(buf.str().find("edge b1 1 1' inf"), std::string::npos) << buf.str();

  // split-sources needs only a network file, and its output is a valid
  // network the bound subcommand accepts.
  ASSERT_EQ(run_cli("instance n2 --emit --dir " + dir).exit_code, 0);
  RunResult from_file = run_cli("split-sources --network " + dir + "/n2.network --output " +
                                dir + "/n2split.network");
  EXPECT_EQ(from_file.exit_code, 0) << from_file.output;
  RunResult bound = run_cli("bound --network " + dir + "/n2split.network --function " +
                            dir + "/n2.function");
  EXPECT_EQ(bound.exit_code, 0) << bound.output;
  EXPECT_NE(bound.output.find("= 1.000000"), std::string::npos) << bound.output;
}

TEST(Cli, TreeEmitsVerifiableCode) {
  std::string dir = testing::TempDir();
  ASSERT_EQ(run_cli("instance xor-tree --emit --dir " + dir).exit_code, 0);
  std::string code_path = dir + "/xor.code";
  RunResult emit = run_cli("tree --instance xor-tree --n 1 --k 1 --emit-code " + code_path);
  EXPECT_EQ(emit.exit_code, 0);
  RunResult check = run_cli("verify --network " + dir + "/xor-tree.network --function " +
                            dir + "/xor-tree.function --code " + code_path);
  EXPECT_EQ(check.exit_code, 0);
  EXPECT_NE(check.output.find("inputs correct"), std::string::npos);
}

TEST(Cli, EmittedInstanceReproducesIdenticalAnalyses) {
  std::string dir = testing::TempDir();
  ASSERT_EQ(run_cli("instance n1 --emit --dir " + dir).exit_code, 0);
  RunResult from_files = run_cli("bound --json --network " + dir +
                                 "/n1.network --function " + dir + "/n1.function");
  RunResult builtin = run_cli("bound --json --instance n1");
  EXPECT_EQ(from_files.exit_code, 0);
  EXPECT_EQ(from_files.output, builtin.output);
}

TEST(Cli, BoundFlagsAreWired) {
  RunResult all_cuts = run_cli("bound --instance n1 --all-cuts");
  EXPECT_EQ(all_cuts.exit_code, 0);
  EXPECT_NE(all_cuts.output.find("cut {e6, e7}"), std::string::npos) << all_cuts.output;
  RunResult pruned = run_cli("bound --instance n1 --irreducible --json");
  EXPECT_EQ(pruned.exit_code, 0);
  EXPECT_NE(pruned.output.find("\"value\": \"2.000000\""), std::string::npos);
  RunResult kind = run_cli("bound --instance n1 --kind prop2");
  EXPECT_NE(kind.output.find("= 4.000000"), std::string::npos) << kind.output;
}

TEST(CliGolden, JsonSchemasAreStable) {
  EXPECT_EQ(run_cli("bound --instance n1 --json").output, golden("bound_n1.json"));
  EXPECT_EQ(run_cli("bound --instance n2-prime --json").output,
            golden("bound_n2_prime.json"));
  EXPECT_EQ(run_cli("compare --instance n1 --json").output, golden("compare_n1.json"));
  EXPECT_EQ(
      run_cli("classes --instance n1 --index-set 3 --context-set 1,2 --context 1,1 --json")
          .output,
      golden("classes_n1.json"));
  EXPECT_EQ(run_cli("verify --instance n1 --json").output, golden("verify_n1.json"));
  EXPECT_EQ(run_cli("search --instance xor-tree --n 1 --k 1 --json").output,
            golden("search_xor_tree.json"));
  EXPECT_EQ(run_cli("simulate --instance n1 --input \"1 1 0; 0 1 1\" --json").output,
            golden("simulate_n1.json"));
  EXPECT_EQ(run_cli("tree --instance sum-tree --n 2 --k 2 --json").output,
            golden("tree_sum_tree.json"));
}

}  // namespace
