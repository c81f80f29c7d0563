#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run_cli(const std::string& args) {
  const std::string cmd = std::string(EVOFORGE_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), int(buf.size()), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("evoforge_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, CounterexampleRunWritesAllOutputs) {
  const auto cfg = write_config("ce.cfg", "experiment = counterexample\n");
  const auto r = run_cli("run --config " + cfg.string() + " --out " + (dir_ / "out").string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "report.json"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "summary.txt"));
  const std::string csv = slurp(dir_ / "out" / "trace.csv");
  EXPECT_EQ(csv, "trial,generation,representation,emp_perf,exact_perf,n_beneficial,n_neutral,chose\n");
}

TEST_F(CliTest, RerunIsByteIdentical) {
  const auto cfg = write_config("c.cfg", "experiment = conjunction\nn = 8\ntrials = 3\ns = 3000\nseed = 11\n");
  ASSERT_EQ(run_cli("run --config " + cfg.string() + " --out " + (dir_ / "a").string()).code, 0);
  ASSERT_EQ(run_cli("run --config " + cfg.string() + " --out " + (dir_ / "b").string()).code, 0);
  for (const char* f : {"report.json", "trace.csv", "summary.txt"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
  const std::string csv = slurp(dir_ / "a" / "trace.csv");
  EXPECT_EQ(csv.rfind("trial,generation,representation,emp_perf,exact_perf,n_beneficial,n_neutral,chose\n", 0), 0u);
  EXPECT_GT(std::count(csv.begin(), csv.end(), '\n'), 1);
}

TEST_F(CliTest, CommandLineOverridesReplaceConfigValues) {
  const auto cfg = write_config("c.cfg", "experiment = conjunction\nn = 6\ntrials = 5\ns = 2000\n");
  ASSERT_EQ(run_cli("run --config " + cfg.string() + " --out " + (dir_ / "o").string() +
                    " --trials 2 --seed 3").code, 0);
  const std::string report = slurp(dir_ / "o" / "report.json");
  EXPECT_NE(report.find("\"master_seed\": 3"), std::string::npos);
  EXPECT_NE(report.find("trials = 2"), std::string::npos);
}

TEST_F(CliTest, ConfigurationErrorsExitWithTwo) {
  const auto bad = write_config("bad.cfg", "experiment = conjunction\nepsilon = 1.5\n");
  const auto r = run_cli("run --config " + bad.string() + " --out " + (dir_ / "o").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("epsilon"), std::string::npos);
  EXPECT_EQ(run_cli("run --config " + (dir_ / "missing.cfg").string()).code, 2);
}

TEST_F(CliTest, UnwritableOutputExitsWithTwo) {
  const auto cfg = write_config("ce.cfg", "experiment = counterexample\n");
  std::ofstream(dir_ / "file") << "x";
  const auto r = run_cli("run --config " + cfg.string() + " --out " + (dir_ / "file" / "sub").string());
  EXPECT_EQ(r.code, 2) << r.out;
}

TEST_F(CliTest, PerfQueries) {
  const std::string target = "\"x1&x4&x5 | x2&x4&x6 | x3&x7&x8\"";
  auto r = run_cli("perf --r \"x1|x2|x3\" --f " + target + " --n 8");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("perf = -0.1171875 ", 0), 0u) << r.out;
  r = run_cli("perf --r \"x1|x2|x3\" --f " + target + " --n 8 --conv binary --exact");
  EXPECT_EQ(r.out.rfind("perf = 0.31640625 ", 0), 0u) << r.out;
  r = run_cli("perf --r x1 --f x1 --n 5 --samples 1000 --seed 4");
  EXPECT_EQ(r.out.rfind("perf = 1 ", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("s=1000"), std::string::npos);
  EXPECT_NE(run_cli("perf --r x9 --f x1 --n 5").code, 0);
}

TEST_F(CliTest, ListShowsExperiments) {
  const auto r = run_cli("list");
  EXPECT_EQ(r.code, 0);
  for (const char* name : {"counterexample", "conjunction", "kdnf", "structural_vs_functional",
                           "parity", "redundancy_bias"}) {
    EXPECT_NE(r.out.find(name), std::string::npos) << name;
  }
}
