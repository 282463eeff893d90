#pragma once

// Thin RAII wrapper over GSL's Nelder-Mead minimizer (nmsimplex2).

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "sqzkit/errors.hpp"

namespace sqzkit::detail {

using Objective = std::function<double(std::span<const double>)>;

struct SimplexResult {
  std::vector<double> point;
  double value;
  int iterations;
  bool converged;
};

namespace simplex_impl {

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
using VectorPtr = std::unique_ptr<gsl_vector, VectorDeleter>;
using MinimizerPtr = std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter>;

inline VectorPtr make_vector(std::span<const double> values) {
  VectorPtr v(gsl_vector_alloc(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) gsl_vector_set(v.get(), i, values[i]);
  return v;
}

inline double trampoline(const gsl_vector* x, void* params) {
  const auto& f = *static_cast<const Objective*>(params);
  return f(std::span<const double>(x->data, x->size));
}

}  // namespace simplex_impl

// Minimizes f from `start` with initial simplex steps `step` until the
// simplex characteristic size drops below size_tol.
inline SimplexResult minimize_simplex(const Objective& f, std::span<const double> start,
                                      std::span<const double> step, double size_tol,
                                      int max_iterations = 20000) {
  using namespace simplex_impl;
  // GSL aborts on error by default; failures surface through return codes.
  gsl_set_error_handler_off();
  const std::size_t n = start.size();
  if (n == 0 || step.size() != n) throw DomainError("minimize_simplex: bad dimensions");

  gsl_multimin_function func{};
  func.n = n;
  func.f = &trampoline;
  func.params = const_cast<Objective*>(&f);

  auto x = make_vector(start);
  auto s = make_vector(step);
  MinimizerPtr m(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  gsl_multimin_fminimizer_set(m.get(), &func, x.get(), s.get());

  int iter = 0;
  bool converged = false;
  while (iter < max_iterations) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    const double size = gsl_multimin_fminimizer_size(m.get());
    if (gsl_multimin_test_size(size, size_tol) == GSL_SUCCESS) {
      converged = true;
      break;
    }
  }

  SimplexResult result;
  result.point.assign(m->x->data, m->x->data + n);
  result.value = m->fval;
  result.iterations = iter;
  result.converged = converged;
  return result;
}

}  // namespace sqzkit::detail
