#include "smlab/persist.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

namespace smlab {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json encode_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const json& field(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) throw PersistError(path.empty() ? "<root>" : path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw PersistError(join(path, key), "missing field '" + join(path, key) + "'");
  return *it;
}

double as_double(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw PersistError(path, "expected a number");
}

template <class T>
T as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw PersistError(path, "expected an integer");
  return j.get<T>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw PersistError(path, "expected a boolean");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw PersistError(path, "expected a string");
  return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw PersistError(path, "expected an array");
  return j;
}

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::vector<double> double_array(const json& j, const std::string& path) {
  std::vector<double> out;
  std::size_t i = 0;
  for (const auto& x : as_array(j, path)) out.push_back(as_double(x, index_path(path, i++)));
  return out;
}

json encode_doubles(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(encode_double(x));
  return out;
}

template <class F>
auto decode(const json& parent, const std::string& path, const char* key, F&& conv) {
  return conv(field(parent, path, key), join(path, key));
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw PersistError("line " + std::to_string(line) + ", column " + std::to_string(column), e.what());
  }
}

GroupSpec decode_group(const json& j, const std::string& path) {
  const std::string family = decode(j, path, "group", as_string);
  GroupFamily f;
  try {
    f = parse_group_family(family);
  } catch (const std::exception& e) {
    throw PersistError(join(path, "group"), e.what());
  }
  return GroupSpec{f, decode(j, path, "n", as_integer<int>)};
}

json encode_config(const ExperimentConfig& c) {
  json j;
  j["experiment"] = experiment_name(c.experiment);
  j["group"] = group_family_name(c.group.family);
  j["n"] = c.group.rank;
  j["m"] = c.m;
  j["p"] = encode_double(c.p);
  j["replicas"] = c.replicas;
  j["theta_grid"] = encode_doubles(c.theta_grid);
  j["t_grid"] = encode_doubles(c.t_grid);
  j["indices"] = c.indices;
  j["seed"] = c.master_seed;
  j["transport_method"] = transport_method_name(c.transport_method);
  j["discretization"] = c.discretization;
  j["alpha"] = encode_double(c.alpha);
  return j;
}

// Strict: every field must be present.
ExperimentConfig decode_config(const json& j, const std::string& path) {
  ExperimentConfig c;
  try {
    c.experiment = parse_experiment(decode(j, path, "experiment", as_string));
  } catch (const PersistError&) {
    throw;
  } catch (const std::exception& e) {
    throw PersistError(join(path, "experiment"), e.what());
  }
  c.group = decode_group(j, path);
  c.m = decode(j, path, "m", as_integer<int>);
  c.p = decode(j, path, "p", as_double);
  c.replicas = decode(j, path, "replicas", as_integer<int>);
  c.theta_grid = decode(j, path, "theta_grid", double_array);
  c.t_grid = decode(j, path, "t_grid", double_array);
  {
    const std::string ipath = join(path, "indices");
    std::size_t i = 0;
    for (const auto& x : as_array(field(j, path, "indices"), ipath)) {
      c.indices.push_back(as_integer<int>(x, index_path(ipath, i++)));
    }
  }
  c.master_seed = decode(j, path, "seed", as_integer<std::uint64_t>);
  try {
    c.transport_method = parse_transport_method(decode(j, path, "transport_method", as_string));
  } catch (const PersistError&) {
    throw;
  } catch (const std::exception& e) {
    throw PersistError(join(path, "transport_method"), e.what());
  }
  c.discretization = decode(j, path, "discretization", as_integer<int>);
  c.alpha = decode(j, path, "alpha", as_double);
  return c;
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string result_to_json(const ExperimentResult& r) {
  json j;
  j["format_version"] = kFormatVersion;
  j["config"] = encode_config(r.config);
  j["record_fields"] = r.record_fields;
  json records = json::array();
  for (const auto& rec : r.records) records.push_back({{"index", rec.index}, {"values", encode_doubles(rec.values)}});
  j["records"] = std::move(records);
  json summary = json::array();
  for (const auto& s : r.summary) {
    summary.push_back({{"name", s.name}, {"mean", encode_double(s.mean)}, {"variance", encode_double(s.variance)},
                       {"count", s.count}});
  }
  j["summary"] = std::move(summary);
  json comparisons = json::array();
  for (const auto& c : r.comparisons) {
    comparisons.push_back({{"label", c.label},
                           {"abscissa", encode_double(c.abscissa)},
                           {"empirical", encode_double(c.empirical)},
                           {"bound", encode_double(c.bound)},
                           {"vacuous", c.vacuous},
                           {"pass", c.pass}});
  }
  j["comparisons"] = std::move(comparisons);
  json tests = json::array();
  for (const auto& t : r.tests) {
    tests.push_back({{"label", t.label},
                     {"abscissa", encode_double(t.abscissa)},
                     {"statistic", encode_double(t.statistic)},
                     {"p_value", encode_double(t.p_value)},
                     {"alpha", encode_double(t.alpha)},
                     {"method", t.method},
                     {"pass", t.pass}});
  }
  j["tests"] = std::move(tests);
  j["wall_time_seconds"] = encode_double(r.wall_time_seconds);
  j["provenance"] = {{"seed", r.provenance.master_seed}, {"code_version", r.provenance.code_version}};
  j["pass"] = r.pass();
  return j.dump(2);
}

ExperimentResult result_from_json(std::string_view text) {
  const json j = parse_text(text);
  ExperimentResult r;
  r.config = decode_config(field(j, "", "config"), "config");
  {
    std::size_t i = 0;
    for (const auto& x : as_array(field(j, "", "record_fields"), "record_fields")) {
      r.record_fields.push_back(as_string(x, index_path("record_fields", i++)));
    }
  }
  const json& records = as_array(field(j, "", "records"), "records");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string path = index_path("records", i);
    ReplicaRecord rec;
    rec.index = decode(records[i], path, "index", as_integer<std::uint64_t>);
    rec.values = decode(records[i], path, "values", double_array);
    r.records.push_back(std::move(rec));
  }
  const json& summary = as_array(field(j, "", "summary"), "summary");
  for (std::size_t i = 0; i < summary.size(); ++i) {
    const std::string path = index_path("summary", i);
    r.summary.push_back({decode(summary[i], path, "name", as_string), decode(summary[i], path, "mean", as_double),
                         decode(summary[i], path, "variance", as_double),
                         decode(summary[i], path, "count", as_integer<std::uint64_t>)});
  }
  const json& comparisons = as_array(field(j, "", "comparisons"), "comparisons");
  for (std::size_t i = 0; i < comparisons.size(); ++i) {
    const std::string path = index_path("comparisons", i);
    const json& c = comparisons[i];
    r.comparisons.push_back({decode(c, path, "label", as_string), decode(c, path, "abscissa", as_double),
                             decode(c, path, "empirical", as_double), decode(c, path, "bound", as_double),
                             decode(c, path, "vacuous", as_bool), decode(c, path, "pass", as_bool)});
  }
  const json& tests = as_array(field(j, "", "tests"), "tests");
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const std::string path = index_path("tests", i);
    const json& t = tests[i];
    r.tests.push_back({decode(t, path, "label", as_string), decode(t, path, "abscissa", as_double),
                       decode(t, path, "statistic", as_double), decode(t, path, "p_value", as_double),
                       decode(t, path, "alpha", as_double), decode(t, path, "method", as_string),
                       decode(t, path, "pass", as_bool)});
  }
  r.wall_time_seconds = decode(j, "", "wall_time_seconds", as_double);
  const json& prov = field(j, "", "provenance");
  r.provenance.master_seed = decode(prov, "provenance", "seed", as_integer<std::uint64_t>);
  r.provenance.code_version = decode(prov, "provenance", "code_version", as_string);
  return r;
}

void save_result(const ExperimentResult& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << result_to_json(r) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

ExperimentResult load_result(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PersistError(path.string(), "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return result_from_json(buf.str());
}

ExperimentConfig config_from_json(std::string_view text) {
  const json j = parse_text(text);
  if (!j.is_object()) throw PersistError("(root)", "expected an object");
  static const std::set<std::string> known = {"experiment", "group", "n", "m", "p", "replicas", "theta_grid", "t_grid",
                                              "indices", "seed", "transport_method", "discretization", "alpha"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw PersistError(item.key(), "unknown field");
  }
  ExperimentConfig c;
  try {
    c.experiment = parse_experiment(decode(j, "", "experiment", as_string));
  } catch (const PersistError&) {
    throw;
  } catch (const std::exception& e) {
    throw PersistError("experiment", e.what());
  }
  c.group = decode_group(j, "");
  if (j.contains("m")) c.m = decode(j, "", "m", as_integer<int>);
  if (j.contains("p")) c.p = decode(j, "", "p", as_double);
  if (j.contains("replicas")) c.replicas = decode(j, "", "replicas", as_integer<int>);
  if (j.contains("theta_grid")) c.theta_grid = decode(j, "", "theta_grid", double_array);
  if (j.contains("t_grid")) c.t_grid = decode(j, "", "t_grid", double_array);
  if (j.contains("indices")) {
    std::size_t i = 0;
    for (const auto& x : as_array(j["indices"], "indices")) c.indices.push_back(as_integer<int>(x, index_path("indices", i++)));
  }
  if (j.contains("seed")) c.master_seed = decode(j, "", "seed", as_integer<std::uint64_t>);
  if (j.contains("transport_method")) {
    try {
      c.transport_method = parse_transport_method(decode(j, "", "transport_method", as_string));
    } catch (const PersistError&) {
      throw;
    } catch (const std::exception& e) {
      throw PersistError("transport_method", e.what());
    }
  }
  if (j.contains("discretization")) c.discretization = decode(j, "", "discretization", as_integer<int>);
  if (j.contains("alpha")) c.alpha = decode(j, "", "alpha", as_double);
  return c;
}

std::string config_to_json(const ExperimentConfig& c) { return encode_config(c).dump(2); }

std::string summary_csv(const ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  const std::string prefix = std::string(experiment_name(c.experiment)) + "," +
                             std::string(group_family_name(c.group.family)) + "," + std::to_string(c.group.rank) +
                             "," + std::to_string(c.m) + "," + csv_number(c.p) + ",";
  const std::string mid = "," + std::to_string(c.replicas) + "," + std::to_string(c.master_seed) + ",";
  std::string out(kSummaryCsvHeader);
  out += '\n';
  for (const auto& x : r.comparisons) {
    out += prefix + csv_number(x.abscissa) + mid + csv_number(x.empirical) + "," + csv_number(x.bound) + "," +
           (x.pass ? "true" : "false") + "\n";
  }
  for (const auto& t : r.tests) {
    out += prefix + csv_number(t.abscissa) + mid + csv_number(t.p_value) + "," + csv_number(t.alpha) + "," +
           (t.pass ? "true" : "false") + "\n";
  }
  for (const auto& s : r.summary) out += prefix + mid + csv_number(s.mean) + ",,\n";
  return out;
}

void write_summary_csv(const ExperimentResult& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << summary_csv(r);
}

}  // namespace smlab
