#include "smlab/quadrature.hpp"

#include <exception>
#include <memory>
#include <sstream>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

namespace smlab {

namespace {

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};
using Workspace = std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter>;

// Nested integrals (the 2-D variance) need one workspace per nesting level.
struct WorkspacePool {
  std::vector<Workspace> levels;
  std::vector<std::size_t> sizes;
  int depth = 0;
};

thread_local WorkspacePool pool;

struct Callback {
  const std::function<double(double)>* f;
  std::exception_ptr error;
};

// Exceptions must not unwind through the C integrator; park them and rethrow
// once qag returns.
double trampoline(double x, void* params) {
  auto* cb = static_cast<Callback*>(params);
  if (cb->error) return 0.0;
  try {
    return (*cb->f)(x);
  } catch (...) {
    cb->error = std::current_exception();
    return 0.0;
  }
}

struct DisableGslAbort {
  DisableGslAbort() { gsl_set_error_handler_off(); }
};
const DisableGslAbort disable_gsl_abort;

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& opts) {
  if (a == b) return {};
  const int level = pool.depth;
  const auto limit = static_cast<std::size_t>(opts.max_panels);
  if (static_cast<int>(pool.levels.size()) <= level) {
    pool.levels.emplace_back();
    pool.sizes.push_back(0);
  }
  if (pool.sizes[level] < limit) {
    pool.levels[level].reset(gsl_integration_workspace_alloc(limit));
    pool.sizes[level] = limit;
  }

  gsl_function fn;
  fn.function = &trampoline;
  Callback cb{&f, nullptr};
  fn.params = &cb;

  QuadratureResult out;
  ++pool.depth;
  const int status = gsl_integration_qag(&fn, a, b, opts.abs_tol, opts.rel_tol, limit,
                                         GSL_INTEG_GAUSS21, pool.levels[level].get(), &out.value,
                                         &out.error);
  --pool.depth;
  if (cb.error) std::rethrow_exception(cb.error);
  if (status != GSL_SUCCESS) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "adaptive quadrature failed on [" << a << ", " << b << "]: " << gsl_strerror(status)
        << " (estimate " << out.value << ", error bound " << out.error << ", abs_tol "
        << opts.abs_tol << ", panel cap " << opts.max_panels << ")";
    throw QuadratureError(msg.str());
  }
  return out;
}

}  // namespace smlab
