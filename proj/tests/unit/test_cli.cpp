#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("hexcmc_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string &name) const { return (dir_ / name).string(); }

  // Runs the tool with stdout to `stdout_file` (inside the temp dir).
  int run(const std::string &args, const std::string &stdout_file = "stdout.txt") const {
    const std::string cmd = std::string(HEXCMC_EXE) + ' ' + args + " > " + path(stdout_file) + " 2> " +
                            path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string &name) const {
    std::ifstream f(path(name), std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  }

  json read_json(const std::string &name) const { return json::parse(read(name)); }

  fs::path dir_;
};

int count_prefix(const std::string &text, const std::string &prefix) {
  std::istringstream in(text);
  int n = 0;
  for (std::string line; std::getline(in, line);) {
    n += line.rfind(prefix, 0) == 0;
  }
  return n;
}

} // namespace

TEST_F(Cli, SolveUnduloid) {
  ASSERT_EQ(run("solve --kind unduloid --r 0.05 --out " + path("u.json")), 0);
  const json j = read_json("u.json");
  EXPECT_EQ(j["kind"], "unduloid");
  EXPECT_LT(j["Q"].get<double>(), 2.0);
  EXPECT_LT(j["residual_norm"].get<double>(), 1e-9);
  for (const char *key : {"r", "Q", "R", "S", "q", "s", "residual_norm", "iterations"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST_F(Cli, SolveTrivial) {
  ASSERT_EQ(run("solve --kind unduloid --r 0"), 0);
  const json j = read_json("stdout.txt");
  EXPECT_EQ(j["Q"].get<double>(), 2.0);
  EXPECT_EQ(j["R"].get<double>(), 2.0 / std::sqrt(3.0));
  EXPECT_EQ(j["S"].get<double>(), 2.0 / std::sqrt(3.0));
  EXPECT_EQ(j["q"].get<double>(), 0.0);
  EXPECT_EQ(j["s"].get<double>(), 0.0);
}

TEST_F(Cli, SolveOutOfRange) {
  EXPECT_EQ(run("solve --kind nodoid --r 0.9 --out " + path("n.json")), 2);
  const json j = read_json("n.json");
  EXPECT_EQ(j["status"], "failed");
  EXPECT_TRUE(j.contains("error"));
}

TEST_F(Cli, MeshWulff) {
  ASSERT_EQ(run("mesh --kind wulff --out " + path("w.obj")), 0);
  const std::string obj = read("w.obj");
  EXPECT_EQ(count_prefix(obj, "v "), 12);
  EXPECT_EQ(count_prefix(obj, "f "), 8);
  const json side = read_json("w.obj.json");
  EXPECT_NEAR(side["E"].get<double>(), 12.0 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(side["V"].get<double>(), 4.0 * std::sqrt(3.0), 1e-12);
  EXPECT_LT(side["closure"].get<double>(), 1e-12);
}

TEST_F(Cli, MeshSolvedNodoid) {
  ASSERT_EQ(run("solve --kind nodoid --r 0.05 --out " + path("n.json")), 0);
  ASSERT_EQ(run("mesh --kind nodoid --params " + path("n.json") + " --out " + path("n.obj")), 0);
  const std::string obj = read("n.obj");
  // Two sheets: prism (2 caps, 4 plain sides, 2 holed sides as 4 quads
  // each) and tube (2 caps, 4 walls).
  EXPECT_EQ(count_prefix(obj, "o "), 2);
  EXPECT_EQ(count_prefix(obj, "f "), 14 + 6);
  EXPECT_EQ(read_json("n.json")["kind"], "nodoid"); // params file untouched
}

TEST_F(Cli, MeshAssemblyNeedsFit) {
  EXPECT_EQ(run("mesh --kind assembly --out " + path("a.obj")), 2);
  EXPECT_FALSE(fs::exists(path("a.obj")));
}

TEST_F(Cli, FitAndMeshAssembly) {
  ASSERT_EQ(run("fit --m-u 3 --out " + path("fit.json")), 0);
  const json fit = read_json("fit.json");
  EXPECT_LT(std::abs(fit["mismatch"].get<double>()), 1e-9);
  for (const char *key : {"r1", "r2", "Q0", "R1", "R2", "S"}) {
    EXPECT_TRUE(fit.contains(key)) << key;
  }
  ASSERT_EQ(run("mesh --kind assembly --params " + path("fit.json") + " --out " + path("a.obj")), 0);
  EXPECT_EQ(count_prefix(read("a.obj"), "o "), 15);
  EXPECT_LT(read_json("a.obj.json")["closure"].get<double>(), 1e-9);
  EXPECT_EQ(run("verify curvature --surface " + path("fit.json")), 0);
}

TEST_F(Cli, VerifyLemma) {
  EXPECT_EQ(run("verify lemma --x1 1 --y1 1 --hole 0.05 --trials 10000 --seed 7"), 0);
  EXPECT_TRUE(read_json("stdout.txt")["pass"].get<bool>());
  EXPECT_EQ(run("verify lemma --x1 10 --y1 1.001 --hole 1"), 1);
  const json j = read_json("stdout.txt");
  EXPECT_FALSE(j["pass"].get<bool>());
  EXPECT_EQ(j["witness"]["source"], "family ii");
}

TEST_F(Cli, VerifyVariation) {
  EXPECT_EQ(run("verify variation --samples 50 --out " + path("v.json")), 0);
  EXPECT_EQ(read("v.json"), read("stdout.txt"));
  EXPECT_EQ(read_json("v.json")["I_constant"].get<double>(), 0.0);
}

TEST_F(Cli, VerifyCurvature) {
  ASSERT_EQ(run("solve --kind unduloid --r 0.05 --out " + path("u.json")), 0);
  EXPECT_EQ(run("verify curvature --surface " + path("u.json")), 0);
  EXPECT_LT(read_json("stdout.txt")["max_abs"].get<double>(), 1e-9);
  EXPECT_EQ(run("verify curvature --kind wulff"), 0);
}

TEST_F(Cli, Sweep) {
  ASSERT_EQ(run("sweep --kind unduloid --r 0.01:0.05:0.01 --out " + path("s.csv")), 0);
  std::istringstream csv(read("s.csv"));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "r,Q,R,S,q,s,residual,period_length");
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(csv, line);) {
    std::vector<double> row;
    std::istringstream cells(line);
    for (std::string c; std::getline(cells, c, ',');) {
      row.push_back(std::stod(c));
    }
    rows.push_back(row);
  }
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_LT(std::abs(rows.front()[1] - 2.0), std::abs(rows.back()[1] - 2.0));
  EXPECT_LT(rows.front()[4], rows.back()[4]);
}

TEST_F(Cli, SweepEmptyRange) {
  EXPECT_EQ(run("sweep --kind unduloid --r 0.05:0.01:0.01 --out " + path("e.csv")), 1);
  EXPECT_FALSE(fs::exists(path("e.csv")));
}

TEST_F(Cli, SweepFailedRowsAreFlagged) {
  EXPECT_EQ(run("sweep --kind unduloid --r 0.05,0.5 --out " + path("f.csv")), 2);
  EXPECT_NE(read("f.csv").find("0.5,nan"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run(""), 64);
  EXPECT_EQ(run("solve --kind unduloid"), 64);
  EXPECT_EQ(run("solve --kind torus --r 0.1"), 64);
  EXPECT_EQ(run("solve --kind unduloid --r 0.1 --bogus"), 64);
  EXPECT_EQ(run("verify lemma --x1 1 --y1 1 --hole 2"), 64);
  EXPECT_EQ(run("sweep --kind unduloid --r 1:2"), 64);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, IoFailure) {
  EXPECT_EQ(run("solve --kind unduloid --r 0.01 --out " + path("missing/dir/u.json")), 3);
  EXPECT_EQ(run("mesh --kind nodoid --params " + path("absent.json") + " --out " + path("n.obj")), 3);
}

TEST_F(Cli, RepeatRunsAreByteIdentical) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"solve --kind nodoid --r 0.07 --out ", "a.json"},
      {"sweep --kind nodoid --r 0.01,0.03 --out ", "a.csv"},
      {"mesh --kind unduloid --r 0.05 --out ", "a.obj"},
  };
  for (const auto &[args, file] : cases) {
    ASSERT_EQ(run(args + path("1_" + file)), 0) << args;
    ASSERT_EQ(run(args + path("2_" + file)), 0) << args;
    EXPECT_EQ(read("1_" + file), read("2_" + file)) << args;
  }
  EXPECT_EQ(read("1_a.obj.json"), read("2_a.obj.json"));
  ASSERT_EQ(run("verify lemma --trials 2000 --seed 5", "l1.json"), 0);
  ASSERT_EQ(run("verify lemma --trials 2000 --seed 5", "l2.json"), 0);
  EXPECT_EQ(read("l1.json"), read("l2.json"));
}
