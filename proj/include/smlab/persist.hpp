#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "smlab/harness.hpp"

namespace smlab {

/// Malformed or incomplete result/config file. `where` names the offending
/// field path (e.g. "records[3].values") or "line L, column C" for syntax
/// errors.
class PersistError : public std::runtime_error {
 public:
  PersistError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

inline constexpr std::string_view kSummaryCsvHeader = "experiment,group,N,m,p,theta,replicas,seed,value,bound,pass";

std::string result_to_json(const ExperimentResult& r);
ExperimentResult result_from_json(std::string_view text);

void save_result(const ExperimentResult& r, const std::filesystem::path& path);
ExperimentResult load_result(const std::filesystem::path& path);

/// Experiment configuration file. Only "experiment", "group" and "n" are
/// required; other fields fall back to ExperimentConfig defaults.
ExperimentConfig config_from_json(std::string_view text);
std::string config_to_json(const ExperimentConfig& c);

/// One row per bound comparison and per test, then one per summary
/// statistic (with empty bound and pass columns).
std::string summary_csv(const ExperimentResult& r);
void write_summary_csv(const ExperimentResult& r, const std::filesystem::path& path);

}  // namespace smlab
