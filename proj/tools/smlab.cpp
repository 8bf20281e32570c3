#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "smlab/bounds.hpp"
#include "smlab/dpp.hpp"
#include "smlab/harness.hpp"
#include "smlab/persist.hpp"
#include "smlab/spectral.hpp"
#include "smlab/transport.hpp"
#include "smlab/verify.hpp"

using namespace smlab;
using nlohmann::json;

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int cmd_sample(const std::string& group, int n, int count, std::uint64_t seed, const std::string& out_path) {
  const GroupSpec spec = make_group(parse_group_family(group), n);
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open " + out_path);
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  out << "replica,index,angle\n";
  for (int r = 0; r < count; ++r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    const AngleSet a = eigenangles(sample_haar(spec, rng));
    for (std::size_t i = 0; i < a.size(); ++i) out << r << ',' << i << ',' << num(a.angles[i]) << '\n';
  }
  return 0;
}

int cmd_wp(const std::string& group, int n, int m, double p, const std::string& method, int k, int count,
           std::uint64_t seed) {
  const GroupSpec spec = make_group(parse_group_family(group), n);
  const TransportMethod tm = parse_transport_method(method);
  std::cout << "replica,value,lower,upper,method\n";
  for (int r = 0; r < count; ++r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    const TransportResult t = spectral_measure_distance(sample_haar(spec, rng), m, p, tm, k);
    std::cout << r << ',' << num(t.value) << ',' << num(t.lower) << ',' << num(t.upper) << ','
              << transport_method_name(tm) << '\n';
  }
  return 0;
}

int cmd_dpp(const std::string& group, int n, double theta, int m) {
  const GroupSpec spec = make_group(parse_group_family(group), n);
  json j;
  j["group"] = describe(spec);
  j["theta"] = theta;
  if (spec.family == GroupFamily::Unitary && m > 1) {
    const BernoulliProfile prof = bernoulli_profile_power(n, m, theta);
    const PowerMoments mom = power_count_moments(n, m, theta);
    j["m"] = m;
    j["lambdas"] = prof.lambdas;
    j["mean"] = mom.mean;
    j["variance"] = mom.variance;
    j["variance_bound"] = mom.variance_bound;
  } else {
    // O(N) reports the det = +1 coset.
    const KernelSpec k = kernel_for_group(spec);
    const BernoulliProfile prof = restriction_eigenvalues(k, theta);
    const double var = variance_count(k, theta);
    j["kernel_rank"] = k.n;
    j["domain_length"] = k.domain_length();
    j["lambdas"] = prof.lambdas;
    j["mean"] = mean_count(k, theta);
    j["variance"] = var;
    j["variance_from_profile"] = prof.variance();
    if (spec.family == GroupFamily::Unitary) j["variance_bound"] = std::log(static_cast<double>(n)) + 1.0;
    if (var > 0.0) j["bernstein_tail_t1"] = bernstein_tail(1.0, var);
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_bounds(int n, int m, double p, double t, double u) {
  json j;
  j["N"] = n;
  j["m"] = m;
  j["p"] = p;
  j["t"] = t;
  j["u"] = u;
  j["mean_wp_bound_proof_explicit"] = mean_wp_bound(n, m, p);
  j["mean_wp_bound_c1"] = mean_wp_bound(n, m, p, ConstantMode::absolute(1.0));
  j["tail_bound"] = tail_bound(n, m, p, t);
  j["eigenangle_tail"] = eigenangle_tail(n, m, u);
  j["eigenangle_deviation_scale"] = 4.0 * 3.141592653589793 * u / n;
  j["power_variance_bound"] = power_variance_bound(n, m);
  j["lipschitz_constant"] = lipschitz_constant(n, p);
  j["lsi_constant"] = lsi_constant(n);
  j["concentration_bound"] = concentration_bound(n, lipschitz_constant(n, p), t);
  if (t > 0.0) j["bernstein_tail"] = bernstein_tail(t, power_variance_bound(n, m));
  if (n >= 2) j["as_rate"] = as_rate(n, m, p);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_verify(const std::string& suite, bool fast) {
  bool ok = true;
  for (int id : suite_criteria(suite)) {
    const CriterionResult r = run_criterion(id, fast);
    std::cout << format_criterion(r) << std::endl;
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir) {
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open " + config_path);
  std::stringstream buf;
  buf << in.rdbuf();
  const ExperimentConfig config = config_from_json(buf.str());
  const ExperimentResult r = run_experiment(config);
  std::filesystem::create_directories(out_dir);
  save_result(r, std::filesystem::path(out_dir) / "result.json");
  write_summary_csv(r, std::filesystem::path(out_dir) / "summary.csv");
  std::cout << experiment_name(config.experiment) << ' ' << describe(config.group) << ": "
            << (r.pass() ? "PASS" : "FAIL") << " (" << r.wall_time_seconds << " s), written to " << out_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smlab: eigenvalue statistics of powers of Haar random matrices"};
  app.require_subcommand(1);

  std::string group = "u";
  int n = 8;
  int m = 1;
  double p = 1.0;
  int count = 1;
  std::uint64_t seed = 0;
  std::string out;

  auto* sample = app.add_subcommand("sample", "eigenangles of Haar samples as CSV");
  sample->add_option("--group", group, "u|su|o|so|so-|sp")->required();
  sample->add_option("--n", n, "rank")->required();
  sample->add_option("--count", count, "number of samples")->required();
  sample->add_option("--seed", seed, "master seed")->required();
  sample->add_option("--out", out, "output file (default stdout)");

  std::string method = "exact";
  int k = 0;
  auto* wp = app.add_subcommand("wp", "W_p distance of the spectral measure of U^m to uniform");
  wp->add_option("--group", group)->required();
  wp->add_option("--n", n)->required();
  wp->add_option("--m", m);
  wp->add_option("--p", p);
  wp->add_option("--method", method, "exact|shift");
  wp->add_option("--k", k, "discretisation count (0: default)");
  wp->add_option("--count", count, "number of samples");
  wp->add_option("--seed", seed)->required();

  double theta = 3.141592653589793;
  auto* dpp = app.add_subcommand("dpp", "restriction profile, mean and variance of counts");
  dpp->add_option("--group", group)->required();
  dpp->add_option("--n", n)->required();
  dpp->add_option("--theta", theta)->required();
  dpp->add_option("--m", m, "power (unitary only)");

  double t = 0.0;
  double u = 1.0;
  auto* bounds = app.add_subcommand("bounds", "evaluate every bound as JSON");
  bounds->add_option("--n", n)->required();
  bounds->add_option("--m", m)->required();
  bounds->add_option("--p", p)->required();
  bounds->add_option("--t", t)->required();
  bounds->add_option("--u", u);

  std::string suite = "all";
  bool fast = false;
  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", suite)->check(CLI::IsMember(suite_names()));
  verify->add_flag("--fast", fast, "smaller replica counts");

  std::string config_path;
  std::string out_dir;
  auto* experiment = app.add_subcommand("experiment", "run an experiment from a JSON config");
  experiment->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  experiment->add_option("--out", out_dir)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) return cmd_sample(group, n, count, seed, out);
    if (*wp) return cmd_wp(group, n, m, p, method, k, count, seed);
    if (*dpp) return cmd_dpp(group, n, theta, m);
    if (*bounds) return cmd_bounds(n, m, p, t, u);
    if (*verify) return cmd_verify(suite, fast);
    if (*experiment) return cmd_experiment(config_path, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
