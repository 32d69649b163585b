#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "chainwave/report.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int exit_code;
  std::string stderr_text;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("chainwave_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  CliRun run(const std::string& args) const {
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = "cd " + dir_.string() + " && " + std::string(CHAINWAVE_CLI_PATH) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                            " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    std::ifstream in(err);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
  }

  std::string read(const fs::path& p) const {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SpectrumWritesCsvAndLog) {
  const auto cfg = write("c.yaml", "geometry: {lengths: [1, 1]}\nspectrum: {z_min: 0.5, z_max: 6}\n");
  const CliRun r = run("spectrum --config " + cfg.string() + " --out " + (dir_ / "out").string());
  ASSERT_EQ(r.exit_code, 0) << r.stderr_text;
  const std::string csv = read(dir_ / "out" / "spectrum.csv");
  EXPECT_EQ(csv.rfind("index,z,lambda_im,residual", 0), 0u);
  EXPECT_GT(std::count(csv.begin(), csv.end(), '\n'), 3);
  const std::string log = read(dir_ / "out" / "run.log");
  EXPECT_NE(log.find("lengths"), std::string::npos);
}

TEST_F(CliTest, VerifyDefaultGeometryPasses) {
  const CliRun r = run("verify");
  EXPECT_EQ(r.exit_code, 0) << r.stderr_text;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "run.log"));
  EXPECT_EQ(run("verify --out elsewhere").exit_code, 2);
}

TEST_F(CliTest, InvalidConfigExitsWithUsageCode) {
  const auto cfg = write("bad.yaml", "geometry: {lengths: [1, 1, 1]}\n");
  const CliRun r = run("spectrum --config " + cfg.string() + " --out " + (dir_ / "out").string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(r.stderr_text.rfind("chainwave: error[ValidationError]", 0), 0u) << r.stderr_text;
}

TEST_F(CliTest, DecayFitOnConservativeTraceIsUnbounded) {
  std::string trace = "t,E\n";
  for (double t = 2.0; t < 2000.0; t *= 1.2) trace += chainwave::format_double(t) + ",0.5\n";
  const auto tr = write("trace.csv", trace);
  const auto cfg = write("d.yaml", "geometry: {lengths: [1, 1]}\ndecay: {window: [10, 1000], trace: " +
                                       tr.string() + "}\n");
  const CliRun r = run("decay-fit --config " + cfg.string() + " --out " + (dir_ / "out").string());
  ASSERT_EQ(r.exit_code, 0) << r.stderr_text;
  EXPECT_NE(read(dir_ / "out" / "decay_fit.txt").find("unbounded"), std::string::npos);
}

TEST_F(CliTest, MissingConfigIsUsageError) {
  EXPECT_EQ(run("simulate").exit_code, 2);
}
