#pragma once

#include <optional>

namespace smlab {

/// Inputs shared by the bound evaluators. Each evaluator reads only the
/// fields it needs and rejects a query where one of them is unset.
struct BoundQuery {
  std::optional<double> n;
  std::optional<int> m;
  std::optional<double> p;
  std::optional<double> t;
  std::optional<double> u;
  std::optional<int> j;
  std::optional<double> sigma_sq;
  std::optional<double> lipschitz;
};

/// 2 exp(-min{t^2 / (4 sigma^2), t / 2}); sigma^2 = 0 leaves only t / 2.
double bernstein_tail(double t, double sigma_sq);

/// 4 exp(-min{u^2 / (m (log(N/m) + 1)), u}). The matching deviation of an
/// eigenangle from 2 pi j / N is (4 pi / N) u.
double eigenangle_tail(int n, int m, double u);

/// m (log(N/m) + 1).
double power_variance_bound(int n, int m);

struct ConstantMode {
  enum class Kind { ProofExplicit, AbsoluteC };
  Kind kind = Kind::ProofExplicit;
  double c = 1.0;

  static ConstantMode proof_explicit() { return {}; }
  static ConstantMode absolute(double c) { return {Kind::AbsoluteC, c}; }
};

/// Upper bound on E W_p(mu_{N,m}, nu). ProofExplicit:
///   (8 Gamma(p+1))^{1/p} (4 pi / N) sqrt(m [log(N/m) + 1]) + pi / N.
/// AbsoluteC(c):  c p sqrt(m [log(N/m) + 1]) / N.
double mean_wp_bound(int n, int m, double p, ConstantMode mode = ConstantMode::proof_explicit());

/// exp(-N^2 t^2 / (24 m)) for p <= 2 and exp(-N^{1+2/p} t^2 / (24 m)) for p > 2.
double tail_bound(int n, int m, double p, double t);

/// C p sqrt(m log N) / N^{min(1, 1/2 + 1/p)}. Without an explicit C the
/// rate is mean_wp_bound(ProofExplicit) + 5 sqrt(m log N) / N^{min(1, 1/2 + 1/p)}.
/// N is real so that the expression can be evaluated off the integers.
double as_rate(double n, int m, double p, std::optional<double> c = std::nullopt);

/// N^{-1/max(p, 2)}.
double lipschitz_constant(int n, double p);

/// 6 / N.
double lsi_constant(double n);

/// exp(-N_min t^2 / (12 L^2)).
double concentration_bound(double n_min, double lipschitz, double t);

/// Query-driven entry points; throw std::invalid_argument naming the first
/// missing field.
double bernstein_tail(const BoundQuery& q);
double eigenangle_tail(const BoundQuery& q);
double mean_wp_bound(const BoundQuery& q, ConstantMode mode = ConstantMode::proof_explicit());
double tail_bound(const BoundQuery& q);
double concentration_bound(const BoundQuery& q);

}  // namespace smlab
