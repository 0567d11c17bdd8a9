#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "diffprod/cli.hpp"

namespace diffprod::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string last_line(const std::string& s) {
  std::string t = s;
  while (!t.empty() && t.back() == '\n') t.pop_back();
  const auto nl = t.rfind('\n');
  return nl == std::string::npos ? t : t.substr(nl + 1);
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("diffprod_cli_test_" + name)).string();
}

TEST(CliTest, DiffsetExample) {
  const auto r = invoke({"diffset", "--mod", "7", "--set", "0,1,3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "# diffset mod=7 set=0,1,3\n0,1,2,3,4,5,6\n");
}

TEST(CliTest, BoundExample) {
  const auto r = invoke({"bound", "--alpha", "1/2", "--beta", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("N_B=2\nL=2\nn=5\nk0=240\ndigits=3\n"), std::string::npos) << r.out;
}

TEST(CliTest, BoundPrintsFullDecimalAndDivisor) {
  const auto r = invoke({"bound", "--alpha", "1/2", "--beta", "1/2", "--mod", "67"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("k0=4948590355249482400033902184071297751311755130807262495753273880633373464985600000000000000"
                       "0\n"),
            std::string::npos);
  EXPECT_NE(r.out.find("digits=92\n"), std::string::npos);
  EXPECT_NE(r.out.find("d=1\n"), std::string::npos);
}

TEST(CliTest, MindivAbsentIsNotAnError) {
  const auto r = invoke({"mindiv", "--mod", "6", "--set", "1,2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(last_line(r.out), "none");
  EXPECT_EQ(last_line(invoke({"mindiv", "--mod", "12", "--set", "0,4,8"}).out), "4");
}

TEST(CliTest, OtherSubcommands) {
  EXPECT_EQ(last_line(invoke({"prodset", "--mod", "10", "--set", "1,2", "--set2", "3"}).out), "3,6");
  EXPECT_EQ(last_line(invoke({"returnset", "--mod", "4", "--set", "0,1"}).out), "0,1,3");
  EXPECT_NE(invoke({"poincare", "--mod", "5", "--set", "0", "--b", "1"}).out.find("m=5\nbound=6\n"), std::string::npos);
  EXPECT_NE(invoke({"lemma1", "--mod", "4", "--set", "0,1", "--L", "2", "--b", "1"}).out.find("m=4\nbound=5\n"),
            std::string::npos);
  EXPECT_NE(invoke({"verify", "--mod", "4", "--set", "0,1", "--set2", "0,1"}).out.find("d=4\n"), std::string::npos);
  const auto w = invoke({"witness", "--mod", "4", "--set", "0,1", "--mod2", "2", "--set2", "0,1", "--b", "1"});
  EXPECT_EQ(w.code, 0) << w.err;
  EXPECT_NE(w.out.find("x=8\ny=30\nk0=240\n"), std::string::npos) << w.out;
  const auto neg = invoke({"witness", "--mod", "4", "--set", "0,1", "--mod2", "2", "--set2", "0,1", "--b", "-2"});
  EXPECT_EQ(neg.code, 0) << neg.err;
  const auto p = invoke({"primes", "--mod", "7", "--min-size", "2"});
  EXPECT_EQ(p.code, 0);
  EXPECT_NE(p.out.find("witness=0,1\n"), std::string::npos);
}

TEST(CliTest, MalformedInputExitsTwo) {
  for (const std::vector<std::string>& args : std::vector<std::vector<std::string>>{
           {"frobnicate"},
           {},
           {"diffset", "--mod", "0", "--set", "1"},
           {"diffset", "--set", "1"},
           {"diffset", "--mod", "7", "--set", "1,x"},
           {"bound", "--alpha", "0.5", "--beta", "1"},
           {"bound", "--alpha", "0", "--beta", "1"},
           {"bound", "--alpha", "1/2", "--beta", "1/4"},
           {"prodset", "--mod", "4", "--set", "1", "--mod2", "5", "--set2", "1"},
           {"primes", "--mod", "15"},
           {"sweep", "--mod", "6", "--mode", "annealing"},
           {"sweep", "--mod", "12", "--alpha", "1/4", "--beta", "1/4", "--budget", "3"},
           {"diffset", "--mod", "7", "--set", "1", "--format", "csv"},
           {"diffset", "--mod", "7", "--set", "@/nonexistent/file"},
       }) {
    const auto r = invoke(args);
    EXPECT_EQ(r.code, 2) << (args.empty() ? "<empty>" : args[0]);
    EXPECT_FALSE(r.err.empty());
  }
  EXPECT_NE(invoke({"frobnicate"}).err.find("diffset"), std::string::npos);
}

TEST(CliTest, PrintedSetsRoundTrip) {
  const auto first = invoke({"diffset", "--mod", "12", "--set", "0,1,5"});
  const std::string literal = last_line(first.out);
  const auto again = invoke({"mindiv", "--mod", "12", "--set", literal});
  EXPECT_EQ(again.code, 0);

  const std::string path = temp_path("roundtrip.txt");
  ASSERT_EQ(invoke({"diffset", "--mod", "12", "--set", "0,1,5", "--out", path}).code, 0);
  const auto from_file = invoke({"returnset", "--mod", "12", "--set", "@" + path});
  EXPECT_EQ(from_file.code, 0) << from_file.err;
  std::filesystem::remove(path);

  const std::string setfile = temp_path("setfile.txt");
  std::ofstream(setfile) << "# E\nmod 12\n0\n1\n5\n";
  const auto r = invoke({"diffset", "--set", "@" + setfile});
  EXPECT_EQ(r.out, first.out);
  EXPECT_EQ(invoke({"diffset", "--mod", "11", "--set", "@" + setfile}).code, 2);
  std::filesystem::remove(setfile);
}

TEST(CliTest, JsonReserializesIdentically) {
  for (const std::vector<std::string>& args : std::vector<std::vector<std::string>>{
           {"bound", "--alpha", "1/2", "--beta", "1/2", "--format", "json"},
           {"sweep", "--mod", "6", "--format", "json"},
           {"primes", "--mod", "11", "--format", "json"},
           {"mindiv", "--mod", "6", "--set", "1,2", "--format", "json"},
           {"witness", "--mod", "4", "--set", "0,1", "--set2", "0,1,2,3", "--format", "json"},
       }) {
    const auto r = invoke(args);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto parsed = nlohmann::ordered_json::parse(r.out);
    EXPECT_EQ(parsed.dump(2) + "\n", r.out);
    EXPECT_EQ(parsed["command"], args[0]);
  }
  const auto bound = nlohmann::ordered_json::parse(invoke({"bound", "--alpha", "1/2", "--beta", "1/2", "--format", "json"}).out);
  EXPECT_TRUE(bound["result"]["k0"].is_string());
}

TEST(CliTest, SweepOutputIndependentOfWorkersAndRepeatable) {
  const std::vector<std::string> base = {"sweep", "--mod", "24", "--mode", "hill_climb", "--seed", "17",
                                         "--iterations", "150", "--restarts", "5", "--format", "csv"};
  const auto first = invoke(base);
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_NE(first.out.find("N,alpha,beta,mode,seed,iterations,best_d,witness_E1,witness_E2,candidates,wall_time_s\n"),
            std::string::npos);
  EXPECT_EQ(invoke(base).out, first.out);
  for (const char* w : {"2", "8"}) {
    auto args = base;
    args.insert(args.end(), {"--workers", w});
    EXPECT_EQ(invoke(args).out, first.out) << w;
  }
}

TEST(CliTest, HelpExitsZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sweep"), std::string::npos);
}

int exit_code_of(const std::string& args) {
  const std::string cmd = std::string(DIFFPROD_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliBinaryTest, ExitCodes) {
  EXPECT_EQ(exit_code_of("diffset --mod 7 --set 0,1,3"), 0);
  EXPECT_EQ(exit_code_of("mindiv --mod 6 --set 1,2"), 0);
  EXPECT_EQ(exit_code_of("nosuchcommand"), 2);
  EXPECT_EQ(exit_code_of("bound --alpha 0.5 --beta 1"), 2);
}

}  // namespace
}  // namespace diffprod::cli
