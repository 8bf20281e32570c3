#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace smlab {

/// Raised when adaptive quadrature cannot meet its tolerance within the
/// panel cap. The message carries the interval, estimate and error bound.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-12;
  int max_panels = 1 << 16;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (21-point) integration of f over [a, b].
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& opts = {});

}  // namespace smlab
