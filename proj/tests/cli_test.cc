#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "support/test_support.h"

#ifndef ATTRINFER_CLI_PATH
#error "ATTRINFER_CLI_PATH must be defined"
#endif

namespace attrinfer {
namespace {

struct Output {
  int code = -1;
  std::string text;
};

// Runs the installed binary through the shell, capturing stdout and stderr.
Output Exec(const std::string& args) {
  const std::string cmd = std::string(ATTRINFER_CLI_PATH) + " " + args + " 2>&1";
  Output out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.text.append(buf.data(), n);
  const int status = pclose(pipe);
  out.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::string Data(const std::string& name) { return testing::TestDataPath(name); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("attrinfer_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string Slurp(const std::string& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, VersionAndHelp) {
  const Output v = Exec("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.text.find("attrinfer 0."), std::string::npos) << v.text;
  const Output h = Exec("--help");
  EXPECT_EQ(h.code, 0);
  for (const char* sub : {"generate", "entitlements", "cluster", "features", "predict",
                          "evaluate"}) {
    EXPECT_NE(h.text.find(sub), std::string::npos) << sub;
  }
}

TEST_F(CliTest, PredictExample) {
  const Output o = Exec("predict --policy " + Data("university_example.json") +
                        " --entitlements " + Data("university_example.csv"));
  ASSERT_EQ(o.code, 0) << o.text;
  EXPECT_NE(o.text.find("\"cs101\""), std::string::npos);
  EXPECT_NE(o.text.find("\"NEI\""), std::string::npos);
}

TEST_F(CliTest, GenerateIsReproducible) {
  const std::string args = "--seed 5 generate --template projmgmt --scale 1 ";
  ASSERT_EQ(Exec(args + "-o " + Path("a.json") + " --entitlements " + Path("a.csv")).code, 0);
  ASSERT_EQ(Exec(args + "-o " + Path("b.json") + " --entitlements " + Path("b.csv")).code, 0);
  EXPECT_FALSE(Slurp(Path("a.json")).empty());
  EXPECT_EQ(Slurp(Path("a.json")), Slurp(Path("b.json")));
  EXPECT_EQ(Slurp(Path("a.csv")), Slurp(Path("b.csv")));

  const Output e = Exec("entitlements --policy " + Path("a.json"));
  ASSERT_EQ(e.code, 0) << e.text;
  EXPECT_EQ(e.text, Slurp(Path("a.csv")));
}

TEST_F(CliTest, MalformedPolicy) {
  {
    std::ofstream out(Path("bad.json"));
    out << "{\n  \"schema\": [\n    {\"name\": \"a\",,}\n  ]\n}\n";
  }
  const Output o = Exec("cluster --policy " + Path("bad.json"));
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.text.find("line 3"), std::string::npos) << o.text;
  EXPECT_NE(o.text.find("column"), std::string::npos) << o.text;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Exec("").code, 1);
  EXPECT_EQ(Exec("evaluate --template nowhere").code, 1);
  EXPECT_EQ(Exec("--ntcf 5,2 cluster --policy " + Data("university_example.json")).code, 1);
  EXPECT_EQ(Exec("predict --policy " + Data("university_example.json")).code, 1);
}

TEST_F(CliTest, ClusterAndFeatures) {
  const Output c = Exec("cluster --policy " + Data("university_example.json"));
  ASSERT_EQ(c.code, 0) << c.text;
  EXPECT_NE(c.text.find("\"memberMeanSimilarity\""), std::string::npos);
  const Output f = Exec("features --policy " + Data("university_example.json") +
                        " --entitlements " + Data("university_example.csv") +
                        " --user csFac2 --resource cs101gb --action modify");
  ASSERT_EQ(f.code, 0) << f.text;
  EXPECT_NE(f.text.find("constraint: coursesTaught contains course"), std::string::npos);
}

TEST_F(CliTest, EvaluateWritesCsvAndJson) {
  const Output o = Exec("--runs 1 --percents 3 evaluate --template university --scale 1 "
                        "--no-timing --csv " + Path("r.csv") + " --json " + Path("r.json"));
  ASSERT_EQ(o.code, 0) << o.text;
  const std::string csv = Slurp(Path("r.csv"));
  EXPECT_EQ(csv.rfind("dataset,objs,attrs,e0,acc,cov_3,sd_3\n", 0), 0u) << csv;
  EXPECT_NE(Slurp(Path("r.json")).find("\"cells\""), std::string::npos);
}

}  // namespace
}  // namespace attrinfer
