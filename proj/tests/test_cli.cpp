// Runs the bellcc binary end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string command = std::string(BELLCC_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  std::string out;
  char buffer[4096];
  std::size_t got;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) out.append(buffer, got);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("bellcc_cli_" + name);
  std::ofstream(path) << content;
  return path;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, BoundJson) {
  const auto r = run("bound --family mermin --n 3");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["result"]["bound"], 8.0);
  EXPECT_EQ(j["result"]["classical_max"], 0.75);
  EXPECT_EQ(j["provenance"]["command"], "bound");
  EXPECT_EQ(j["provenance"]["flags"]["family"], "mermin");
  EXPECT_TRUE(j["provenance"].contains("version"));
}

TEST(Cli, SuccessCsvFullPrecision) {
  const auto r = run("success --family ardehali --n 2 --format csv");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("classical_max,quantum,advantage,bell_lhs,bound\n"
                       "0.75,0.8535533905932737"),
            std::string::npos)
      << r.out;
}

TEST(Cli, SimulateIsByteIdentical) {
  const std::string args = "simulate --family ardehali --n 2 --seed 42 --rounds 20000";
  const auto a = run(args);
  const auto b = run(args);
  const auto c = run(args + " --threads 4");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(nlohmann::json::parse(a.out)["result"], nlohmann::json::parse(c.out)["result"]);
  EXPECT_NE(a.out, run("simulate --family ardehali --n 2 --seed 43 --rounds 20000").out);
}

TEST(Cli, SimulateTraceAndClassicalProtocol) {
  const auto trace = std::filesystem::temp_directory_path() / "bellcc_cli_trace.txt";
  const auto r = run("simulate --family mermin --n 3 --protocol classical --seed 1 --rounds 50 --trace " +
                     trace.string());
  ASSERT_EQ(r.status, 0);
  const auto text = slurp(trace);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 50);
  EXPECT_EQ(text.rfind("round=0 x=", 0), 0u);
  EXPECT_EQ(nlohmann::json::parse(r.out)["result"]["analytic_rate"], 0.75);
}

TEST(Cli, GAndSignFiles) {
  const auto g = temp_file("g.json", R"({"n": 2, "values": [1, 1, 1, -1]})");
  const auto r = run("bound --g-file " + g.string());
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["result"]["bound"], 2.0);

  const auto sign = temp_file("sign.json", R"({"n": 2, "mask": "0x1"})");
  const auto s = run("bound --sign-file " + sign.string());
  ASSERT_EQ(s.status, 0);
  EXPECT_EQ(nlohmann::json::parse(s.out)["result"]["bound"], 4.0);
  const auto w = run("bound --family wwzb --n 2 --wwzb-index 1");
  EXPECT_EQ(nlohmann::json::parse(w.out)["result"], nlohmann::json::parse(s.out)["result"]);
}

TEST(Cli, ErrorsAndExitCodes) {
  EXPECT_EQ(run("bound --n 3").status, 2);  // no g source
  EXPECT_EQ(run("bound --family mermin --n 3 --g-file x.json").status, 2);
  EXPECT_EQ(run("simulate --family mermin --n 3").status, 2);  // missing seed
  EXPECT_EQ(run("bound --family mermin --n 9").status, 3);
  EXPECT_EQ(run("bound --family mermin --n 9 --lhv-cap 9").status, 0);
  EXPECT_EQ(run("continuum --n 5").status, 3);
  EXPECT_EQ(run("enumerate --n 5").status, 3);
  const auto bad = temp_file("bad.json", "{\"n\": 2,\n \"values\": [1,]}");
  EXPECT_EQ(run("bound --g-file " + bad.string()).status, 2);
  EXPECT_EQ(run("bound --family nope --n 2").status, 105);  // CLI11 validation failure
}

TEST(Cli, EnumerateAndContinuum) {
  const auto e = run("enumerate --n 2 --format csv");
  ASSERT_EQ(e.status, 0);
  EXPECT_EQ(std::count(e.out.begin(), e.out.end(), '\n'), 18);  // provenance, header, 16 rows
  int violated = 0;
  std::istringstream lines(e.out);
  for (std::string line; std::getline(lines, line);) violated += line.ends_with(",true");
  EXPECT_EQ(violated, 8);

  const auto c = run("continuum --n 2 --grid 64");
  ASSERT_EQ(c.status, 0);
  const auto j = nlohmann::json::parse(c.out)["result"];
  for (const char* key : {"n", "m", "lhs", "bound", "W", "classical_max", "quantum", "advantage"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["bound"], 16.0);
}
