#include "kinklab/optimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <memory>

namespace kinklab {

namespace {

using Objective = std::function<double(std::span<const double>)>;

double trampoline(const gsl_vector* v, void* params) {
  const auto& f = *static_cast<const Objective*>(params);
  return f(std::span<const double>(v->data, v->size));
}

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

}  // namespace

SimplexResult minimize_simplex(const Objective& f, std::vector<double> start,
                               const SimplexOptions& options) {
  gsl_set_error_handler_off();
  SimplexResult result;
  const std::size_t n = start.size();
  if (n == 0) {
    result.value = f({});
    result.converged = true;
    return result;
  }
  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(n));
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x.get(), i, start[i]);
    gsl_vector_set(step.get(), i, options.initial_step);
  }
  gsl_multimin_function fn{&trampoline, n, const_cast<Objective*>(&f)};
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> m(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), step.get());

  int status = GSL_CONTINUE;
  int iter = 0;
  while (status == GSL_CONTINUE && iter < options.max_iterations) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()),
                                    options.size_tolerance);
  }
  result.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.x[i] = gsl_vector_get(m->x, i);
  result.value = m->fval;
  result.iterations = iter;
  result.converged = status == GSL_SUCCESS;
  return result;
}

}  // namespace kinklab
