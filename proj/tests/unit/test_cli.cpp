#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "accf/checker.hpp"
#include "accf/trace.hpp"
#include "cli.hpp"
#include "mutations.hpp"

namespace accf::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string bundled(const std::string& name) {
  return (fs::path(ACCF_SOURCE_DIR) / "configs" / name).string();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("accf-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    auto path = dir_ / name;
    std::ofstream(path, std::ios::binary) << text;
    return path;
  }

  fs::path dir_;
};

TEST_F(CliTest, ValidateBundledConfigs) {
  for (auto name : {"two-by-two.cfg", "four-by-one.cfg"}) {
    auto r = invoke({"validate", "--config", bundled(name)});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(r.out.starts_with("ok: 4 servers")) << r.out;
  }
  auto r = invoke({"validate", "--config", bundled("two-by-two.cfg"), "--grouping", "okapi"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST_F(CliTest, ValidateReportsEmptyCheckingSet) {
  auto text = slurp(bundled("two-by-two.cfg"));
  const auto pos = text.find("cg2: [A2, B2]");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 13, "cg2: [A2]");
  auto r = invoke({"validate", "--config", write("bad.cfg", text).string()});
  EXPECT_EQ(r.code, kExitViolations);
  EXPECT_NE((r.out + r.err).find("violation:"), std::string::npos);
}

TEST_F(CliTest, ValidateMalformedFile) {
  auto r = invoke({"validate", "--config", write("broken.cfg", "version: 1\nservers: [\n").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("line"), std::string::npos) << r.err;
  r = invoke({"validate", "--config", (dir_ / "missing.cfg").string()});
  EXPECT_EQ(r.code, kExitIo);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(invoke({"run", "--config", bundled("two-by-two.cfg")}).code, kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
  auto r = invoke({"run", "--config", bundled("two-by-two.cfg"), "--workload", "app9", "--out",
                   (dir_ / "o").string()});
  EXPECT_EQ(r.code, kExitUsage);
}

std::vector<std::string> run_args(const fs::path& out, const std::string& workload = "app1") {
  return {"run",           "--config", bundled("four-by-one.cfg"), "--workload", workload, "--duration-ms",
          "2000",          "--delay",  "100",                      "--seed",     "3",      "--out",
          out.string()};
}

TEST_F(CliTest, RunWritesArtifacts) {
  auto r = invoke(run_args(dir_ / "a"));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (auto name : {"config.yaml", "trace.tsv", "results.csv", "report.txt", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "a" / name)) << name;
    EXPECT_FALSE(fs::exists(dir_ / "a" / (std::string(name) + ".tmp"))) << name;
  }
  const auto trace = slurp(dir_ / "a" / "trace.tsv");
  EXPECT_NE(r.out.find("trace sha256 " + sha256_hex(trace)), std::string::npos);
  EXPECT_NE(slurp(dir_ / "a" / "manifest.json").find(sha256_hex(trace)), std::string::npos);
  EXPECT_TRUE(checker::check_trace(parse_trace(trace)).ok());

  const auto csv = slurp(dir_ / "a" / "results.csv");
  EXPECT_TRUE(csv.starts_with("app,grouping,delay_ms,seed,"));
  EXPECT_NE(csv.find(",100,3,"), std::string::npos);

  auto again = invoke(run_args(dir_ / "b"));
  ASSERT_EQ(again.code, kExitOk);
  EXPECT_EQ(slurp(dir_ / "b" / "trace.tsv"), trace);
  EXPECT_EQ(slurp(dir_ / "b" / "results.csv"), csv);
}

TEST_F(CliTest, RunHonoursSeedEnvironment) {
  ::setenv("ACCF_SEED", "11", 1);
  auto r = invoke(run_args(dir_ / "env", "app2"));
  ::unsetenv("ACCF_SEED");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(slurp(dir_ / "env" / "results.csv").find(",100,11,"), std::string::npos);
}

TEST_F(CliTest, RunIntoUnwritableDirectory) {
  auto blocker = write("blocker", "x");
  auto r = invoke(run_args(blocker / "sub"));
  EXPECT_EQ(r.code, kExitIo);
  EXPECT_NE(r.err.find("I/O error"), std::string::npos);
}

TEST_F(CliTest, SweepOutputs) {
  auto out = dir_ / "sweep";
  auto r = invoke({"sweep", "--config", bundled("two-by-two.cfg"), "--workload", "app2", "--duration-ms", "1000",
                   "--delays", "0,200", "--seeds", "1,2", "--grouping", "two-by-two,four-by-one", "--keep-traces",
                   "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto csv = slurp(out / "results.csv");
  EXPECT_TRUE(csv.starts_with("app,grouping,delay_ms,seed,throughput,normalized,mean_park_ms,mean_staleness_ms\n"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 + 8);
  EXPECT_TRUE(fs::exists(out / "plot-two-by-two.dat"));
  EXPECT_TRUE(fs::exists(out / "plot-four-by-one.dat"));
  EXPECT_TRUE(fs::exists(out / "traces" / "four-by-one-d200-s2.tsv"));
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
}

TEST_F(CliTest, SweepRejectsEmptyLists) {
  auto r = invoke({"sweep", "--config", bundled("two-by-two.cfg"), "--workload", "app1", "--delays", "",
                   "--out", (dir_ / "s").string()});
  EXPECT_EQ(r.code, kExitUsage);
  r = invoke({"sweep", "--config", bundled("two-by-two.cfg"), "--workload", "app1", "--delays", "5,-1",
              "--out", (dir_ / "s").string()});
  EXPECT_EQ(r.code, kExitUsage);
  r = invoke({"sweep", "--config", bundled("two-by-two.cfg"), "--workload", "app1", "--grouping", "nope",
              "--out", (dir_ / "s").string()});
  EXPECT_EQ(r.code, kExitUsage);
}

TEST_F(CliTest, CheckTrace) {
  ASSERT_EQ(invoke(run_args(dir_ / "run")).code, kExitOk);
  const auto trace_path = dir_ / "run" / "trace.tsv";
  auto ok = invoke({"check-trace", trace_path.string()});
  EXPECT_EQ(ok.code, kExitOk) << ok.err;
  EXPECT_NE(ok.out.find("no violations"), std::string::npos);

  auto mutations = accf::testing::forge_all(parse_trace(slurp(trace_path)), 3);
  ASSERT_FALSE(mutations.empty());
  auto bad = write("mutated.tsv", render_trace(mutations.front().trace));
  auto flagged = invoke({"check-trace", bad.string()});
  EXPECT_EQ(flagged.code, kExitViolations);
  EXPECT_NE(flagged.err.find("line "), std::string::npos) << flagged.err;

  const auto text = slurp(trace_path);
  auto truncated = write("truncated.tsv", text.substr(0, text.size() / 2));
  auto r = invoke({"check-trace", truncated.string()});
  EXPECT_EQ(r.code, kExitMalformedTrace);
  EXPECT_NE(r.err.find("malformed trace"), std::string::npos);
  EXPECT_EQ(invoke({"check-trace", (dir_ / "nothing.tsv").string()}).code, kExitIo);
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace accf::cli
