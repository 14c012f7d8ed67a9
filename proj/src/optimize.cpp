// Copyright 2026 The catsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "catsim/optimize.hpp"

#include "catsim/hilbert.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <boost/math/tools/minima.hpp>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace catsim::opt {

namespace {

struct GslObjective {
  const Objective* f;
  int evaluations = 0;
};

double gsl_trampoline(const gsl_vector* v, void* params) {
  auto* obj = static_cast<GslObjective*>(params);
  Vec x(v->size);
  for (size_t i = 0; i < v->size; ++i) x(static_cast<Eigen::Index>(i)) = gsl_vector_get(v, i);
  ++obj->evaluations;
  const double y = (*obj->f)(x);
  return std::isfinite(y) ? y : std::numeric_limits<double>::max();
}

struct GslVecDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct GslMinDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

struct GslErrorGuard {
  gsl_error_handler_t* previous;
  GslErrorGuard() : previous(gsl_set_error_handler_off()) {}
  ~GslErrorGuard() { gsl_set_error_handler(previous); }
};

}  // namespace

MinimizeResult nelder_mead(const Objective& f, const Vec& x0, const Vec& step, double size_tol,
                           int max_iter) {
  const size_t n = static_cast<size_t>(x0.size());
  if (n == 0 || step.size() != x0.size()) {
    throw std::invalid_argument("nelder_mead: start and step sizes must match and be non-empty");
  }
  GslErrorGuard guard;
  GslObjective obj{&f};
  gsl_multimin_function fn{&gsl_trampoline, n, &obj};
  std::unique_ptr<gsl_vector, GslVecDeleter> x(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, GslVecDeleter> ss(gsl_vector_alloc(n));
  for (size_t i = 0; i < n; ++i) {
    gsl_vector_set(x.get(), i, x0(static_cast<Eigen::Index>(i)));
    gsl_vector_set(ss.get(), i, step(static_cast<Eigen::Index>(i)));
  }
  std::unique_ptr<gsl_multimin_fminimizer, GslMinDeleter> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), ss.get());

  MinimizeResult out;
  for (int it = 0; it < max_iter; ++it) {
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    const double size = gsl_multimin_fminimizer_size(s.get());
    if (gsl_multimin_test_size(size, size_tol) == GSL_SUCCESS) {
      out.converged = true;
      break;
    }
  }
  out.x.resize(static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < n; ++i) out.x(static_cast<Eigen::Index>(i)) = gsl_vector_get(s->x, i);
  out.value = s->fval;
  out.evaluations = obj.evaluations;
  return out;
}

MinimizeResult multi_start(const Objective& f, const std::vector<Vec>& starts, const Vec& step,
                           double size_tol, int max_iter) {
  if (starts.empty()) throw std::invalid_argument("multi_start: no starting points");
  MinimizeResult best;
  bool have = false;
  int total = 0;
  for (const Vec& s : starts) {
    MinimizeResult r = nelder_mead(f, s, step, size_tol, max_iter);
    total += r.evaluations;
    if (!have || r.value < best.value || (r.value == best.value && lex_less(r.x, best.x))) {
      best = std::move(r);
      have = true;
    }
  }
  best.evaluations = total;
  return best;
}

ScalarResult brent_minimize(const std::function<double(double)>& f, double lo, double hi, int bits) {
  const auto r = boost::math::tools::brent_find_minima(f, lo, hi, bits);
  return {r.first, r.second};
}

namespace {

struct LmFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const Residual* residual;
  int n_in;
  int n_out;
  int* fev;

  int inputs() const { return n_in; }
  int values() const { return n_out; }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
    r.resize(n_out);
    (*residual)(p, r);
    ++*fev;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      if (!std::isfinite(r(i))) r(i) = 1e150;
    }
    return 0;
  }
};

}  // namespace

LsqResult levenberg_marquardt(const Residual& residual, const Vec& p0, int m, double tol, int max_fev) {
  if (m < p0.size()) throw NumericalError("levenberg_marquardt: fewer residuals than parameters");
  int fev = 0;
  LmFunctor functor{&residual, static_cast<int>(p0.size()), m, &fev};
  Eigen::NumericalDiff<LmFunctor> numdiff(functor);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<LmFunctor>> lm(numdiff);
  lm.parameters.ftol = tol;
  lm.parameters.xtol = tol;
  lm.parameters.maxfev = max_fev;
  Vec p = p0;
  const auto status = lm.minimize(p);
  LsqResult out;
  out.params = p;
  Vec r(m);
  residual(p, r);
  out.residual_norm = r.norm();
  out.evaluations = fev;
  using S = Eigen::LevenbergMarquardtSpace::Status;
  out.converged = status == S::RelativeReductionTooSmall || status == S::RelativeErrorTooSmall ||
                  status == S::RelativeErrorAndReductionTooSmall || status == S::CosinusTooSmall ||
                  status == S::FtolTooSmall || status == S::XtolTooSmall;
  return out;
}

Vec nnls(const Eigen::MatrixXd& A, const Vec& b, int max_iter) {
  const Eigen::Index n = A.cols();
  if (A.rows() != b.size()) throw DimensionError("nnls: A and b sizes differ");
  if (max_iter <= 0) max_iter = static_cast<int>(3 * n + 30);
  Vec x = Vec::Zero(n);
  std::vector<bool> passive(static_cast<size_t>(n), false);
  const double tol = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()) * static_cast<double>(n);

  auto solve_passive = [&](Vec& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<size_t>(j)]) idx.push_back(j);
    z = Vec::Zero(n);
    if (idx.empty()) return;
    Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    const Vec zs = sub.colPivHouseholderQr().solve(b);
    for (size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zs(static_cast<Eigen::Index>(k));
  };

  for (int outer = 0; outer < max_iter; ++outer) {
    const Vec w = A.transpose() * (b - A * x);
    Eigen::Index jmax = -1;
    double wmax = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<size_t>(j)] && w(j) > wmax) {
        wmax = w(j);
        jmax = j;
      }
    }
    if (jmax < 0) break;
    passive[static_cast<size_t>(jmax)] = true;
    for (int inner = 0; inner < max_iter; ++inner) {
      Vec z;
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<size_t>(j)] && z(j) <= 0.0) feasible = false;
      if (feasible) {
        x = z;
        break;
      }
      double step = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<size_t>(j)] && z(j) <= 0.0) {
          const double denom = x(j) - z(j);
          if (denom > 0.0) step = std::min(step, x(j) / denom);
        }
      }
      x += step * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<size_t>(j)] && std::abs(x(j)) <= tol) {
          passive[static_cast<size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return x.cwiseMax(0.0);
}

double bisect_crossing(const std::function<double(double)>& f, double inside, double outside,
                       double level, double xtol) {
  double a = inside;
  double b = outside;
  for (int it = 0; it < 200 && std::abs(b - a) > xtol; ++it) {
    const double mid = 0.5 * (a + b);
    if (f(mid) >= level) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace catsim::opt
