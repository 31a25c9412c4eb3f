#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cli.hpp"
#include "mscodec/pgm.hpp"
#include "mscodec/synth.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = msc::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("msc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_F(CliTest, SynthIsDeterministicAndMatchesLibrary) {
  ASSERT_EQ(run({"synth", "ramps", path("a.pgm"), "--width", "20", "--height", "12", "--seed", "9"}).code, 0);
  ASSERT_EQ(run({"synth", "ramps", path("b.pgm"), "--width", "20", "--height", "12", "--seed", "9"}).code, 0);
  EXPECT_EQ(slurp(path("a.pgm")), slurp(path("b.pgm")));
  const auto lib = mscodec::write_pgm(mscodec::synthesize(mscodec::SynthKind::Ramps, 20, 12, 9));
  EXPECT_EQ(slurp(path("a.pgm")), std::string(lib.begin(), lib.end()));
}

TEST_F(CliTest, EncodeDecodeEval) {
  ASSERT_EQ(run({"synth", "steps", path("s.pgm"), "--width", "8", "--height", "8"}).code, 0);
  const CliRun enc = run({"encode", path("s.pgm"), path("s.msc"), "--op", "p0", "--lambda", "100"});
  ASSERT_EQ(enc.code, 0) << enc.err;
  EXPECT_EQ(enc.out.rfind("bpp=", 0), 0u);
  EXPECT_NE(enc.out.find(" time_ms="), std::string::npos);
  ASSERT_EQ(run({"decode", path("s.msc"), path("d.pgm")}).code, 0);
  const CliRun ev = run({"eval", path("s.pgm"), path("d.pgm"), path("s.msc")});
  ASSERT_EQ(ev.code, 0);
  const double bpp = 8.0 * static_cast<double>(fs::file_size(path("s.msc"))) / 64.0;
  std::ostringstream expect;
  expect << "bpp=" << std::fixed << std::setprecision(6) << bpp << " psnr=lossless\n";
  EXPECT_EQ(ev.out, expect.str());
}

TEST_F(CliTest, EvalPrintsFinitePsnr) {
  mscodec::write_pgm_file(path("a.pgm"), mscodec::Image(2, 1, std::vector<double>{0, 0}));
  mscodec::write_pgm_file(path("b.pgm"), mscodec::Image(2, 1, std::vector<double>{255, 255}));
  mscodec::write_file_bytes(path("c.msc"), std::vector<std::uint8_t>(4, 0));
  const CliRun ev = run({"eval", path("a.pgm"), path("b.pgm"), path("c.msc")});
  ASSERT_EQ(ev.code, 0);
  EXPECT_EQ(ev.out, "bpp=16.000000 psnr=0.0000\n");
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  mscodec::write_pgm_file(path("a.pgm"), mscodec::Image(4, 4, 7.0));
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"encode", path("a.pgm")}).code, 2);
  EXPECT_EQ(run({"encode", path("a.pgm"), path("o.msc"), "--op", "shepard", "--lambda", "5"}).code, 2);
  EXPECT_EQ(run({"encode", path("a.pgm"), path("o.msc"), "--op", "p1", "--density", "0.1"}).code, 2);
  EXPECT_EQ(run({"encode", path("a.pgm"), path("o.msc"), "--op", "p7"}).code, 2);
  EXPECT_EQ(run({"synth", "clouds", path("x.pgm")}).code, 2);
  EXPECT_FALSE(fs::exists(path("o.msc")));
}

TEST_F(CliTest, RuntimeErrorsExitOne) {
  EXPECT_EQ(run({"decode", path("missing.msc"), path("d.pgm")}).code, 1);
  mscodec::write_file_bytes(path("junk.msc"), std::vector<std::uint8_t>(40, 7));
  const CliRun r = run({"decode", path("junk.msc"), path("d.pgm")});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
  EXPECT_FALSE(fs::exists(path("d.pgm")));
  mscodec::write_pgm_file(path("a.pgm"), mscodec::Image(4, 4, 7.0));
  mscodec::write_pgm_file(path("b.pgm"), mscodec::Image(5, 4, 7.0));
  EXPECT_EQ(run({"eval", path("a.pgm"), path("b.pgm"), path("junk.msc")}).code, 1);
}

TEST_F(CliTest, HelpExitsZero) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sweep"), std::string::npos);
}

TEST_F(CliTest, SweepWritesOneRowPerPoint) {
  ASSERT_EQ(run({"synth", "steps", path("s.pgm"), "--width", "12", "--height", "12", "--seed", "2"}).code, 0);
  const CliRun r = run({"sweep", path("s.pgm"), "--csv", path("r.csv"), "--svg", path("r.svg"), "--ops",
                     "p0,shepard", "--lambdas", "50,500", "--densities", "0.1,0.2", "--q", "32"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "points=6 failed=0\n");
  std::istringstream csv(slurp(path("r.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "operator,lambda,density,q,bpp,psnr,encode_ms,decode_ms,status");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_EQ(line.rfind(rows <= 2 ? "p0," : "shepard,", 0), 0u) << line;
  }
  EXPECT_EQ(rows, 6);
  EXPECT_NE(slurp(path("r.svg")).find("<svg"), std::string::npos);
}
