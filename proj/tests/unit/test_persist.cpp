#include <gtest/gtest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "smlab/harness.hpp"
#include "smlab/persist.hpp"

using namespace smlab;

namespace {

ExperimentResult sample_result() {
  ExperimentConfig c;
  c.experiment = ExperimentKind::TailProbability;
  c.group = make_group(GroupFamily::Unitary, 5);
  c.m = 2;
  c.p = 1.5;
  c.replicas = 30;
  c.t_grid = {0.05, 0.2};
  c.master_seed = 0xfeedbeefcafe1234ULL;
  c.transport_method = TransportMethod::MonotoneShift;
  return run_experiment(c);
}

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / ("smlab_persist_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Persist, JsonRoundTrip) {
  ExperimentResult r = sample_result();
  r.wall_time_seconds = 1.25;
  const ExperimentResult back = result_from_json(result_to_json(r));
  EXPECT_TRUE(back.same_outcome(r));
  EXPECT_EQ(back.wall_time_seconds, r.wall_time_seconds);
  EXPECT_EQ(back.config.master_seed, 0xfeedbeefcafe1234ULL);
  EXPECT_EQ(back.provenance, r.provenance);
}

TEST(Persist, NonFiniteValuesSurvive) {
  ExperimentResult r = sample_result();
  r.records[0].values[0] = std::numeric_limits<double>::quiet_NaN();
  r.records[0].values[1] = std::numeric_limits<double>::infinity();
  r.records[0].values[2] = -std::numeric_limits<double>::infinity();
  const ExperimentResult back = result_from_json(result_to_json(r));
  EXPECT_TRUE(std::isnan(back.records[0].values[0]));
  EXPECT_EQ(back.records[0].values[1], std::numeric_limits<double>::infinity());
  EXPECT_EQ(back.records[0].values[2], -std::numeric_limits<double>::infinity());
}

TEST(Persist, FileRoundTrip) {
  const ExperimentResult r = sample_result();
  const auto path = temp_dir() / "result.json";
  save_result(r, path);
  EXPECT_TRUE(load_result(path).same_outcome(r));
  std::filesystem::remove(path);
  EXPECT_THROW(load_result(path), PersistError);
}

TEST(Persist, MissingFieldNamed) {
  const ExperimentResult r = sample_result();
  auto j = nlohmann::json::parse(result_to_json(r));
  j["records"][3].erase("values");
  try {
    result_from_json(j.dump());
    FAIL();
  } catch (const PersistError& e) {
    EXPECT_EQ(e.where(), "records[3].values");
  }
  auto k = nlohmann::json::parse(result_to_json(r));
  k["config"].erase("replicas");
  try {
    result_from_json(k.dump());
    FAIL();
  } catch (const PersistError& e) {
    EXPECT_NE(e.where().find("replicas"), std::string::npos);
  }
}

TEST(Persist, SyntaxErrorReportsLine) {
  const std::string text = "{\n  \"config\": {\n    \"experiment\": ,\n  }\n}\n";
  try {
    result_from_json(text);
    FAIL();
  } catch (const PersistError& e) {
    EXPECT_NE(e.where().find("line 3"), std::string::npos) << e.where();
  }
}

TEST(Persist, WrongTypeRejected) {
  auto j = nlohmann::json::parse(result_to_json(sample_result()));
  j["config"]["m"] = "two";
  EXPECT_THROW(result_from_json(j.dump()), PersistError);
}

TEST(SummaryCsv, HeaderAndRows) {
  const ExperimentResult r = sample_result();
  std::istringstream in(summary_csv(r));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "experiment,group,N,m,p,theta,replicas,seed,value,bound,pass");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10) << line;
    EXPECT_EQ(line.rfind("tail_probability,u,5,2,", 0), 0u) << line;
  }
  EXPECT_EQ(rows, static_cast<int>(r.comparisons.size() + r.tests.size() + r.summary.size()));
}

TEST(SummaryCsv, WritesFile) {
  const ExperimentResult r = sample_result();
  const auto path = temp_dir() / "summary.csv";
  write_summary_csv(r, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), summary_csv(r));
  std::filesystem::remove(path);
}

TEST(ConfigJson, RoundTripAndDefaults) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::VarianceScan;
  c.group = make_group(GroupFamily::Unitary, 12);
  c.m = 3;
  c.theta_grid = {1.0, std::numbers::pi};
  c.master_seed = 9;
  c.alpha = 0.01;
  EXPECT_EQ(config_from_json(config_to_json(c)), c);

  const ExperimentConfig minimal = config_from_json(R"({"experiment": "mean_distance", "group": "so", "n": 7})");
  EXPECT_EQ(minimal.group, make_group(GroupFamily::SpecialOrthogonal, 7));
  EXPECT_EQ(minimal.replicas, ExperimentConfig{}.replicas);
  try {
    config_from_json(R"({"experiment": "mean_distance", "group": "so"})");
    FAIL();
  } catch (const PersistError& e) {
    EXPECT_EQ(e.where(), "n");
  }
  try {
    config_from_json(R"({"experiment": "mean_distance", "group": "so", "n": 7, "master_seed": 3})");
    FAIL();
  } catch (const PersistError& e) {
    EXPECT_EQ(e.where(), "master_seed");
  }
}
