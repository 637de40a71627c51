// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <unistd.h>

#include "squeezetrack/error.hpp"
#include "squeezetrack/io.hpp"

namespace squeezetrack {
namespace {

namespace fs = std::filesystem;

TEST(FormatDouble, RoundTripsExactly) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<std::uint64_t> bits;
  int tested = 0;
  while (tested < 20000) {
    const std::uint64_t b = bits(gen);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    ++tested;
    ASSERT_EQ(std::strtod(format_double(v).c_str(), nullptr), v) << format_double(v);
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("st_io_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(TempDir, WriteCreatesParentsAndReplacesAtomically) {
  const std::string path = (dir_ / "a" / "b" / "out.txt").string();
  write_file(path, "first");
  EXPECT_EQ(read_file(path), "first");
  write_file(path, "second\n");
  EXPECT_EQ(read_file(path), "second\n");
  EXPECT_FALSE(fs::exists(path + ".tmp"));
  EXPECT_THROW(read_file((dir_ / "missing").string()), IoError);
}

TEST(Csv, PhaseHeaderAndRows) {
  PhaseTrajectory t;
  t.dt = 0.5;
  t.values = {1.0, -2.5};
  EXPECT_EQ(phase_csv(t), "t,phi\n0,1\n0.5,-2.5\n");
}

TEST(Csv, SearchTraceRoundTrip) {
  std::vector<SearchTraceRow> rows = {
      {0, {1.5, 0.25, 30.0, 0.7}, 0.0123, 0.0004, true},
      {1, {1.875, 0.25, 30.0, 0.7}, 0.0131, 0.0005, false},
      {1, {1.2, 0.25, 30.0, 0.7}, std::numeric_limits<double>::infinity(), 0.0, false},
  };
  const std::string text = search_trace_csv(rows);
  EXPECT_EQ(text.substr(0, text.find('\n')), "cycle,chi,r,gamma,delta,mse,stderr,accepted");
  const auto back = parse_search_trace_csv(text);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].cycle, rows[i].cycle);
    EXPECT_EQ(back[i].point, rows[i].point);
    EXPECT_EQ(back[i].mse, rows[i].mse);
    EXPECT_EQ(back[i].stderr, rows[i].stderr);
    EXPECT_EQ(back[i].accepted, rows[i].accepted);
  }
  EXPECT_EQ(search_trace_csv(back), text);
}

TEST(Csv, SearchTraceRejectsDamage) {
  EXPECT_THROW(parse_search_trace_csv("cycle,chi\n"), IoError);
  EXPECT_THROW(parse_search_trace_csv("cycle,chi,r,gamma,delta,mse,stderr,accepted\n0,1,2\n"),
               IoError);
  EXPECT_THROW(
      parse_search_trace_csv("cycle,chi,r,gamma,delta,mse,stderr,accepted\n0,1,0,1,1,x,0,1\n"),
      IoError);
  EXPECT_THROW(
      parse_search_trace_csv("cycle,chi,r,gamma,delta,mse,stderr,accepted\n0,1,0,1,1,1,0,2\n"),
      IoError);
}

TEST(Csv, EnsembleRows) {
  EnsembleResult r;
  r.runs.resize(2);
  r.runs[0].seed = 9;
  r.runs[0].stats.add(0.0);
  r.runs[1].seed = 10;
  r.runs[1].stats.add(0.5);
  r.runs[1].stats.add(-0.5);
  const std::string csv = ensemble_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "run,seed,mse,holevo_mse,samples");
  EXPECT_NE(csv.find("\n0,9,0,0,1\n"), std::string::npos);
  EXPECT_NE(csv.find("\n1,10,0.25,"), std::string::npos);
}

TEST(Csv, SweepMarksGapsAndAppendsFits) {
  SweepResult sweep;
  SweepRow good;
  good.flux_over_kappa = 1000.0;
  good.ok = true;
  good.search.best = {100.0, std::log(std::pow(1000.0, 1.0 / 6.0)), 316.0, 0.5};
  good.final = {0.02, 0.001};
  SweepRow gap;
  gap.flux_over_kappa = 1e4;
  gap.error = "boom";
  sweep.rows = {good, gap};
  sweep.fits["mse"] = {-0.66, 2.0, 0.01, 3};
  const std::string csv = sweep_csv(sweep, 2.0, SweepMode::kSqueezed);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "flux_over_kappa,ok,chi,r,gamma,delta,mse,stderr,er_ratio,chi_ratio,gamma_ratio,"
            "delta_ratio,mse_ratio");
  EXPECT_NE(csv.find("\n10000,0,,,,,,,,,,,\n"), std::string::npos);
  EXPECT_NE(csv.find("# fit mse: exponent=-0.66000000000000003"), std::string::npos);
  // chi ratio 100 / 1000^{2/3} = 1.
  const std::size_t row_start = csv.find('\n') + 1;
  std::string row = csv.substr(row_start, csv.find('\n', row_start) - row_start);
  std::vector<std::string> fields;
  for (std::size_t pos = 0;;) {
    const std::size_t comma = row.find(',', pos);
    fields.push_back(row.substr(pos, comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  ASSERT_EQ(fields.size(), 13u);
  EXPECT_NEAR(std::stod(fields[9]), 1.0, 1e-12);

  const Json j = to_json(sweep, 2.0, SweepMode::kSqueezed);
  EXPECT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(j["rows"][1]["error"], "boom");
  EXPECT_NEAR(j["rows"][0]["ratios"]["er"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j["rows"][0]["ratios"]["chi"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(j["mode"], "squeezed");
}

TEST(Json, NonFiniteNumbersBecomeStrings) {
  PowerLawFit f{1.0, 2.0, std::numeric_limits<double>::quiet_NaN(), 2};
  const Json j = to_json(f);
  EXPECT_EQ(j["stderr_exponent"], "nan");
  EXPECT_EQ(j["exponent"], 1.0);
  EXPECT_NO_THROW(Json::parse(j.dump()));
}

}  // namespace
}  // namespace squeezetrack
