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

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace catsim::opt {

using Vec = Eigen::VectorXd;
using Objective = std::function<double(const Vec&)>;

struct MinimizeResult {
  Vec x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Nelder-Mead (GSL nmsimplex2) from one start; stops when the simplex size
// falls below size_tol or after max_iter iterations.
MinimizeResult nelder_mead(const Objective& f, const Vec& x0, const Vec& step, double size_tol = 1e-8,
                           int max_iter = 4000);

// Runs nelder_mead from every start and returns the best result. Ties are
// broken by lexicographic order of the parameters.
MinimizeResult multi_start(const Objective& f, const std::vector<Vec>& starts, const Vec& step,
                           double size_tol = 1e-8, int max_iter = 4000);

struct ScalarResult {
  double x = 0.0;
  double value = 0.0;
};

// Brent minimization on [lo, hi].
ScalarResult brent_minimize(const std::function<double(double)>& f, double lo, double hi,
                            int bits = 40);

// Residual function filling r (size m) from parameters p.
using Residual = std::function<void(const Vec& p, Vec& r)>;

struct LsqResult {
  Vec params;
  double residual_norm = 0.0;  // sqrt(sum r^2)
  int evaluations = 0;
  bool converged = false;
};

// Levenberg-Marquardt with forward-difference Jacobian (Eigen unsupported).
LsqResult levenberg_marquardt(const Residual& residual, const Vec& p0, int m, double tol = 1e-12,
                              int max_fev = 4000);

// min ||A x - b|| subject to x >= 0 (Lawson-Hanson active set).
Vec nnls(const Eigen::MatrixXd& A, const Vec& b, int max_iter = 0);

// Bisection for the crossing of a continuous function with a level between
// an inside point (f >= level) and an outside point (f < level).
double bisect_crossing(const std::function<double(double)>& f, double inside, double outside,
                       double level, double xtol = 1e-7);

}  // namespace catsim::opt
