#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tbq/experiments.hpp"

using namespace tbq;

namespace {

SweepTable sample_table() {
  SweepTable t(2);
  t[0].sigma_n = 0.1;
  t[0].results["linear"] = {0.2134567890123, {-0.6, 0.6}, 120, {}};
  t[0].results["idrf"] = {0.0725, {}, 0, {}};
  t[1].sigma_n = 0.30000000000000004;
  t[1].results["linear"] = {1.0 / 3.0, {-0.7, 0.7}, 99, {"note"}};
  t[1].results["quadratic"] = {0.2, {-1.0, 0.0, 1.0}, 5, {}};
  return t;
}

std::size_t count_lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST(Format, Parse) {
  EXPECT_EQ(parse_format("csv"), OutputFormat::kCsv);
  EXPECT_EQ(parse_format("json"), OutputFormat::kJson);
  EXPECT_EQ(parse_format("svg"), OutputFormat::kSvg);
  EXPECT_THROW(parse_format("xlsx"), std::invalid_argument);
  EXPECT_EQ(column_for_scenario("delay"), "linear_delay");
  EXPECT_EQ(column_for_scenario("envelope"), "envelope");
  EXPECT_THROW(column_for_scenario("cubic"), std::invalid_argument);
}

TEST(EmitCsv, HeaderAndEmptyFields) {
  SweepTable one(1);
  one[0].sigma_n = 1.0;
  one[0].results["linear"] = {0.5, {}, 0, {}};
  const auto csv = emit_csv(one);
  EXPECT_EQ(count_lines(csv), 2u);
  EXPECT_EQ(csv, "sigma_n,linear,linear_delay,quadratic,envelope,idrf\n1,0.5,,,,\n");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(EmitCsv, NineSignificantDigits) {
  const auto csv = emit_csv(sample_table());
  EXPECT_NE(csv.find("0.1,0.213456789,,,,0.0725\n"), std::string::npos) << csv;
  EXPECT_NE(csv.find("0.3,0.333333333,,0.2,,\n"), std::string::npos) << csv;
}

TEST(EmitJson, RoundTripsBitExactly) {
  const auto t = sample_table();
  const auto back = parse_table_json(emit_json(t));
  ASSERT_EQ(back.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(back[i].sigma_n, t[i].sigma_n);
    ASSERT_EQ(back[i].results.size(), t[i].results.size());
    for (const auto& [k, v] : t[i].results) {
      const auto& w = back[i].results.at(k);
      EXPECT_EQ(w.mse, v.mse);
      EXPECT_EQ(w.params, v.params);
      EXPECT_EQ(w.evaluations, v.evaluations);
    }
  }
  EXPECT_EQ(emit_json(back), emit_json(t));
}

TEST(EmitJson, MissingColumnsAreNull) {
  const auto js = emit_json(sample_table());
  EXPECT_NE(js.find("\"linear_delay\": null"), std::string::npos);
}

TEST(EmitSvg, Structure) {
  const auto svg = emit_svg(sample_table());
  EXPECT_NE(svg.find("viewBox=\"0 0 800 500\""), std::string::npos);
  EXPECT_NE(svg.find(">sigma_n<"), std::string::npos);
  EXPECT_NE(svg.find(">MSE<"), std::string::npos);
  EXPECT_NE(svg.find(">linear<"), std::string::npos);
  EXPECT_NE(svg.find(">quadratic<"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_EQ(svg.find(">envelope<"), std::string::npos);
}

TEST(Emit, RejectsEmptyTable) {
  EXPECT_THROW(emit(SweepTable{}, OutputFormat::kCsv), std::invalid_argument);
}

TEST(WriteTable, WritesFileAndReportsBadPath) {
  const std::string path = ::testing::TempDir() + "tbq_table.csv";
  write_table(sample_table(), OutputFormat::kCsv, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), emit_csv(sample_table()));
  std::remove(path.c_str());
  EXPECT_THROW(write_table(sample_table(), OutputFormat::kCsv, "/nonexistent-dir/x.csv"),
               std::runtime_error);
}

TEST(SweepConfig, Validation) {
  SweepConfig cfg;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.sigma_n_values = {0.5, 0.2};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.sigma_n_values = {0.2, 0.5};
  EXPECT_NO_THROW(cfg.validate());
  cfg.scenarios = {"linear", "cubic"};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.scenarios = {"linear"};
  cfg.grid_step = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(SweepConfig, ApplyJson) {
  SweepConfig cfg;
  apply_config_json(R"({"sigma_n":[0.5,1.0],"scenarios":["idrf"],"format":"json","step":0.02})",
                    cfg);
  EXPECT_EQ(cfg.sigma_n_values, (std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(cfg.scenarios, (std::vector<std::string>{"idrf"}));
  EXPECT_EQ(cfg.format, OutputFormat::kJson);
  EXPECT_DOUBLE_EQ(cfg.grid_step, 0.02);
  EXPECT_THROW(apply_config_json("{not json", cfg), std::invalid_argument);
  EXPECT_THROW(apply_config_json(R"({"format":"pdf"})", cfg), std::invalid_argument);
  EXPECT_THROW(apply_config_json(R"({"step":"big"})", cfg), std::invalid_argument);
}

TEST(RunSweep, IdrfColumnIsClosedForm) {
  SweepConfig cfg;
  cfg.sigma_n_values = {1.0};
  cfg.scenarios = {"idrf"};
  const auto t = run_sweep(cfg);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_NEAR(*t[0].value("idrf"), 0.53125, 1e-15);
  EXPECT_FALSE(t[0].value("linear").has_value());
}

TEST(RunSweep, LinearNearNoiselessLimit) {
  SweepConfig cfg;
  cfg.sigma_n_values = {0.0001};
  cfg.scenarios = {"linear"};
  const auto t = run_sweep(cfg);
  EXPECT_NEAR(*t[0].value("linear"), 0.1902, 5e-4);
}

TEST(RunSweep, RowOrderingsAndDeterminism) {
  SweepConfig cfg;
  cfg.sigma_n_values = {0.4, 1.2};
  cfg.scenarios = {"linear", "quadratic", "envelope", "idrf"};
  const auto a = run_sweep(cfg);
  const auto b = run_sweep(cfg);
  EXPECT_EQ(emit_csv(a), emit_csv(b));
  EXPECT_EQ(emit_json(a), emit_json(b));
  for (const auto& row : a) {
    EXPECT_LE(*row.value("idrf"), *row.value("quadratic"));
    EXPECT_LE(*row.value("quadratic"), *row.value("linear"));
    EXPECT_EQ(*row.value("envelope"), *row.value("quadratic"));
  }
}
