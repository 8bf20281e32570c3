#include "smlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace smlab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_rank(int n, int m, const char* who) {
  if (n < 1 || m < 1 || m > n) {
    throw std::invalid_argument(std::string(who) + ": requires 1 <= m <= N");
  }
}

void check_p(double p, const char* who) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument(std::string(who) + ": requires p >= 1");
}

template <class T>
T need(const std::optional<T>& v, const char* field, const char* who) {
  if (!v) throw std::invalid_argument(std::string(who) + ": missing field '" + field + "'");
  return *v;
}

int need_int_n(const BoundQuery& q, const char* who) {
  const double n = need(q.n, "N", who);
  if (n != std::floor(n)) throw std::invalid_argument(std::string(who) + ": N must be an integer");
  return static_cast<int>(n);
}

double log_term(int n, int m) {
  return static_cast<double>(m) * (std::log(static_cast<double>(n) / m) + 1.0);
}

double rate_denominator(double n, double p) { return std::pow(n, std::min(1.0, 0.5 + 1.0 / p)); }

}  // namespace

double bernstein_tail(double t, double sigma_sq) {
  if (!(t > 0.0)) throw std::invalid_argument("bernstein_tail: requires t > 0");
  if (!(sigma_sq >= 0.0)) throw std::invalid_argument("bernstein_tail: requires sigma^2 >= 0");
  const double gaussian =
      sigma_sq == 0.0 ? std::numeric_limits<double>::infinity() : t * t / (4.0 * sigma_sq);
  return 2.0 * std::exp(-std::min(gaussian, 0.5 * t));
}

double eigenangle_tail(int n, int m, double u) {
  check_rank(n, m, "eigenangle_tail");
  if (!(u > 0.0)) throw std::invalid_argument("eigenangle_tail: requires u > 0");
  return 4.0 * std::exp(-std::min(u * u / log_term(n, m), u));
}

double power_variance_bound(int n, int m) {
  check_rank(n, m, "power_variance_bound");
  return log_term(n, m);
}

double mean_wp_bound(int n, int m, double p, ConstantMode mode) {
  check_rank(n, m, "mean_wp_bound");
  check_p(p, "mean_wp_bound");
  const double root = std::sqrt(log_term(n, m));
  if (mode.kind == ConstantMode::Kind::AbsoluteC) return mode.c * p * root / n;
  const double gamma_factor = std::exp((std::log(8.0) + std::lgamma(p + 1.0)) / p);
  return gamma_factor * (4.0 * kPi / n) * root + kPi / n;
}

double tail_bound(int n, int m, double p, double t) {
  check_rank(n, m, "tail_bound");
  check_p(p, "tail_bound");
  if (!(t >= 0.0)) throw std::invalid_argument("tail_bound: requires t >= 0");
  const double nn = static_cast<double>(n);
  const double scale = p <= 2.0 ? nn * nn : std::pow(nn, 1.0 + 2.0 / p);
  return std::exp(-scale * t * t / (24.0 * m));
}

double as_rate(double n, int m, double p, std::optional<double> c) {
  if (!(n >= 2.0)) throw std::invalid_argument("as_rate: requires N >= 2");
  if (m < 1) throw std::invalid_argument("as_rate: requires m >= 1");
  check_p(p, "as_rate");
  const double shape = std::sqrt(m * std::log(n)) / rate_denominator(n, p);
  if (c) return *c * p * shape;
  const int rank = static_cast<int>(std::floor(n));
  if (m > rank) throw std::invalid_argument("as_rate: default constant requires m <= N");
  return mean_wp_bound(rank, m, p) + 5.0 * shape;
}

double lipschitz_constant(int n, double p) {
  if (n < 1) throw std::invalid_argument("lipschitz_constant: requires N >= 1");
  check_p(p, "lipschitz_constant");
  return std::pow(static_cast<double>(n), -1.0 / std::max(p, 2.0));
}

double lsi_constant(double n) {
  if (!(n >= 1.0)) throw std::invalid_argument("lsi_constant: requires N >= 1");
  return 6.0 / n;
}

double concentration_bound(double n_min, double lipschitz, double t) {
  if (!(n_min >= 1.0)) throw std::invalid_argument("concentration_bound: requires N >= 1");
  if (!(lipschitz > 0.0)) throw std::invalid_argument("concentration_bound: requires L > 0");
  if (!(t >= 0.0)) throw std::invalid_argument("concentration_bound: requires t >= 0");
  return std::exp(-n_min * t * t / (12.0 * lipschitz * lipschitz));
}

double bernstein_tail(const BoundQuery& q) {
  return bernstein_tail(need(q.t, "t", "bernstein_tail"), need(q.sigma_sq, "sigma_sq", "bernstein_tail"));
}

double eigenangle_tail(const BoundQuery& q) {
  return eigenangle_tail(need_int_n(q, "eigenangle_tail"), need(q.m, "m", "eigenangle_tail"),
                         need(q.u, "u", "eigenangle_tail"));
}

double mean_wp_bound(const BoundQuery& q, ConstantMode mode) {
  return mean_wp_bound(need_int_n(q, "mean_wp_bound"), need(q.m, "m", "mean_wp_bound"),
                       need(q.p, "p", "mean_wp_bound"), mode);
}

double tail_bound(const BoundQuery& q) {
  return tail_bound(need_int_n(q, "tail_bound"), need(q.m, "m", "tail_bound"), need(q.p, "p", "tail_bound"),
                    need(q.t, "t", "tail_bound"));
}

double concentration_bound(const BoundQuery& q) {
  return concentration_bound(need(q.n, "N", "concentration_bound"),
                             need(q.lipschitz, "L", "concentration_bound"),
                             need(q.t, "t", "concentration_bound"));
}

}  // namespace smlab
