// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <unistd.h>

#include "squeezetrack/cli.hpp"
#include "squeezetrack/error.hpp"
#include "squeezetrack/io.hpp"

namespace squeezetrack::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "squeezetrack");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  ::testing::internal::CaptureStdout();
  ::testing::internal::CaptureStderr();
  const int code = run_cli(static_cast<int>(args.size()), argv.data());
  Outcome o{code, ::testing::internal::GetCapturedStdout()};
  ::testing::internal::GetCapturedStderr();
  return o;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("st_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string at(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(Cli, GenerateWritesRequestedRowsDeterministically) {
  const std::vector<std::string> args = {"generate", "--p", "2", "--gamma-relax", "1e-3", "--dt",
                                         "1e-3", "--samples", "4096", "--seed", "7",
                                         "--no-timing", "--out", at("a.csv")};
  const Outcome first = run(args);
  ASSERT_EQ(first.code, 0);
  const std::string a = read_file(at("a.csv"));
  EXPECT_EQ(count_lines(a), 4097u);
  EXPECT_EQ(a.substr(0, 6), "t,phi\n");
  const Outcome second = run(args);
  EXPECT_EQ(second.out, first.out);
  EXPECT_EQ(read_file(at("a.csv")), a);

  auto other = args;
  other[10] = "8";
  run(other);
  EXPECT_NE(read_file(at("a.csv")), a);
}

TEST_F(Cli, GeneratePeriodogram) {
  ASSERT_EQ(run({"generate", "--p", "2", "--samples", "1000", "--out", at("p.csv"),
                 "--periodogram", at("pg.csv"), "--periodogram-seeds", "4"})
                .code,
            0);
  const std::string pg = read_file(at("pg.csv"));
  EXPECT_EQ(pg.substr(0, pg.find('\n')), "omega,power,expected");
  EXPECT_EQ(count_lines(pg), 1u + 256u);
}

TEST_F(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run({"generate", "--samples", "100", "--out", at("x.csv")}).code, 2);
  EXPECT_EQ(run({"generate", "--p", "two", "--out", at("x.csv")}).code, 2);
  EXPECT_EQ(run({"generate", "--p", "2", "--bogus", "1"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"optimize", "--p", "2"}).code, 2);
  EXPECT_EQ(run({"optimize", "--p", "2", "--flux", "100", "--flux-grid", "100,1000"}).code, 2);
}

TEST_F(Cli, ConfigFilesAreStrict) {
  std::ofstream(at("bad.ini")) << "[spectrum]\np = 2\nwhatever = 3\n";
  EXPECT_EQ(run({"generate", "--config", at("bad.ini"), "--out", at("x.csv")}).code, 2);
  std::ofstream(at("loose.ini")) << "p = 2\n";
  EXPECT_EQ(run({"generate", "--config", at("loose.ini"), "--out", at("x.csv")}).code, 2);
  EXPECT_EQ(run({"generate", "--config", at("missing.ini")}).code, 1);
}

TEST_F(Cli, IniConfigWithFlagOverrides) {
  std::ofstream(at("run.ini")) << "# phase trajectory\n[spectrum]\np = 3\n; kappa left at 1\n"
                                  "[generate]\nsamples = 500\n[run]\nseed = 5\ntiming = false\n";
  const Outcome o = run({"generate", "--config", at("run.ini"), "--samples", "300", "--out",
                         at("c.csv")});
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(count_lines(read_file(at("c.csv"))), 301u);
  const Json summary = Json::parse(o.out);
  EXPECT_EQ(summary["config"]["spectrum"]["p"], 3.0);
  EXPECT_EQ(summary["config"]["run"]["seed"], 5u);
  EXPECT_EQ(summary["wall_time_s"], 0.0);
}

TEST_F(Cli, ValidationErrorsExitWithThree) {
  EXPECT_EQ(run({"scaling", "--p", "1"}).code, 3);
  EXPECT_EQ(run({"generate", "--p", "0.5", "--out", at("x.csv")}).code, 3);
  EXPECT_EQ(run({"simulate", "--p", "2", "--flux", "10", "--gamma", "1e4", "--r", "3",
                 "--out-dir", at("sim")})
                .code,
            3);
  EXPECT_FALSE(fs::exists(at("sim/summary.json")));
}

TEST_F(Cli, ScalingReportsPredictions) {
  const Outcome o = run({"scaling", "--p", "2", "--flux", "1e6", "--json"});
  ASSERT_EQ(o.code, 0);
  const Json j = Json::parse(o.out);
  EXPECT_NEAR(j["prediction"]["er"].get<double>(), 10.0, 1e-12);
  EXPECT_NEAR(j["prediction"]["chi_over_kappa"].get<double>(), 1e4, 1e-8);
  EXPECT_NEAR(j["prediction"]["gamma_over_kappa"].get<double>(), 1e5, 1e-7);
  EXPECT_NEAR(j["c_z"].get<double>(), 0.036531326165305272, 1e-15);
  EXPECT_EQ(j["constants_table"].size(), 6u);

  const Outcome text = run({"scaling", "--p", "2"});
  ASSERT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("p,c_Z,c_A"), std::string::npos);
}

TEST_F(Cli, SimulateIsReproducibleFromItsSummary) {
  const std::vector<std::string> base = {"simulate", "--p", "2", "--flux", "100", "--runs", "3",
                                         "--warmup", "2", "--total", "6", "--seed", "11",
                                         "--no-timing"};
  auto first = base;
  first.insert(first.end(), {"--out-dir", at("one")});
  const Outcome a = run(first);
  ASSERT_EQ(a.code, 0);
  const std::string summary = read_file(at("one/summary.json"));
  EXPECT_EQ(a.out, summary);
  const Json j = Json::parse(summary);
  EXPECT_EQ(j["mse_form"], "holevo");
  EXPECT_GT(j["effective_samples"].get<double>(), 0.0);
  EXPECT_EQ(count_lines(read_file(at("one/ensemble.csv"))), 4u);

  const Outcome b = run({"simulate", "--config", at("one/summary.json"), "--no-timing",
                         "--out-dir", at("two")});
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(read_file(at("two/summary.json")), summary);
  EXPECT_EQ(read_file(at("two/ensemble.csv")), read_file(at("one/ensemble.csv")));
}

TEST_F(Cli, SingleRunTrace) {
  ASSERT_EQ(run({"simulate", "--p", "2", "--flux", "100", "--runs", "1", "--warmup", "1",
                 "--total", "3", "--trace", "--out-dir", at("t")})
                .code,
            0);
  const std::string trace = read_file(at("t/trace.csv"));
  EXPECT_EQ(trace.substr(0, trace.find('\n')), "t,phi,phi_est,theta");
  EXPECT_EQ(count_lines(trace), 31u);
}

TEST_F(Cli, OptimizeResumesWithoutChangingTheResult) {
  const std::vector<std::string> base = {
      "optimize", "--p",  "2",    "--flux",         "100", "--warmup",       "2",
      "--total",  "6",    "--search-runs", "2",     "--confirm-runs", "2",  "--max-cycles",
      "3",        "--seed", "3",  "--no-timing"};
  auto full = base;
  full.insert(full.end(), {"--out-dir", at("full")});
  ASSERT_EQ(run(full).code, 0);
  const std::string trace = read_file(at("full/search_trace.csv"));
  const Json best = Json::parse(read_file(at("full/best.json")));
  EXPECT_TRUE(best.contains("best"));

  // Keep the header, the initial row and cycle 1 only.
  std::string partial;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t end = trace.find('\n', pos);
    if (end == std::string::npos) break;
    const std::string line = trace.substr(pos, end - pos + 1);
    if (pos == 0 || line[0] == '0' || line[0] == '1') partial += line;
    pos = end + 1;
  }
  fs::create_directories(at("resumed"));
  std::ofstream(at("resumed/search_trace.csv")) << partial;
  auto resumed = base;
  resumed.insert(resumed.end(),
                 {"--out-dir", at("resumed"), "--resume", at("resumed/search_trace.csv")});
  ASSERT_EQ(run(resumed).code, 0);
  EXPECT_EQ(read_file(at("resumed/search_trace.csv")), trace);
  EXPECT_EQ(read_file(at("resumed/best.json")), read_file(at("full/best.json")));
}

TEST_F(Cli, SweepWritesRowsAndFits) {
  ASSERT_EQ(run({"optimize", "--p", "2", "--flux-grid", "100,300,1000", "--warmup", "2",
                 "--total", "6", "--search-runs", "2", "--confirm-runs", "0", "--max-cycles", "1",
                 "--out-dir", at("sw")})
                .code,
            0);
  const std::string csv = read_file(at("sw/sweep.csv"));
  EXPECT_EQ(count_lines(csv), 1u + 3u + 5u);
  EXPECT_NE(csv.find("# fit mse:"), std::string::npos);
  const Json j = Json::parse(read_file(at("sw/sweep.json")));
  EXPECT_EQ(j["rows"].size(), 3u);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(UsageError("x")), 2);
  EXPECT_EQ(exit_code_for(ValidationError("x")), 3);
  EXPECT_EQ(exit_code_for(FeasibilityError("x")), 3);
  EXPECT_EQ(exit_code_for(NumericError("x")), 4);
  EXPECT_EQ(exit_code_for(IoError("x")), 1);
  EXPECT_EQ(exit_code_for(std::runtime_error("x")), 1);
}

TEST(Config, TypedGetters) {
  ConfigValues c = ConfigValues::parse_ini("[simulation]\nruns = 1e3\nflux = 2.5\n"
                                           "trace = yes\n[search]\nflux_grid = 1, 10 ,100\n");
  EXPECT_EQ(get_count(c, "simulation.runs", std::nullopt), 1000u);
  EXPECT_EQ(get_double(c, "simulation.flux", std::nullopt), 2.5);
  EXPECT_TRUE(get_bool(c, "simulation.trace", false));
  EXPECT_EQ(get_double_list(c, "search.flux_grid"), (std::vector<double>{1.0, 10.0, 100.0}));
  EXPECT_EQ(get_double(c, "simulation.chi", 4.0), 4.0);
  EXPECT_THROW(get_double(c, "simulation.chi", std::nullopt), UsageError);
  c.set("simulation.runs", "2.5");
  EXPECT_THROW(get_count(c, "simulation.runs", std::nullopt), UsageError);
  c.set("simulation.trace", "maybe");
  EXPECT_THROW(get_bool(c, "simulation.trace", false), UsageError);
  c.set("run.seed", "-1");
  EXPECT_THROW(get_seed(c, "run.seed", 0), UsageError);
  EXPECT_THROW(c.set("simulation.nope", "1"), UsageError);
}

}  // namespace
}  // namespace squeezetrack::cli
