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

#include "catsim/hilbert.hpp"

#include <cmath>
#include <functional>

namespace catsim {

struct AnalyticalFit {
  double alpha_fit = 0.0;
  double theta = 0.0;  // wrapped to (-pi, pi]
  double fidelity = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct CssFit {
  cplx alpha1 = 0.0;
  cplx alpha2 = 0.0;
  double vartheta = 0.0;  // wrapped to (-pi, pi]
  double fidelity = 0.0;
  double D = 0.0;         // |alpha1 - alpha2| / 2
  int evaluations = 0;
  bool converged = false;
};

struct SensitivityInterval {
  double best = 0.0;
  double low = 0.0;
  double high = 0.0;
  double drop = 0.01;
  bool low_found = true;
  bool high_found = true;
};

// Fixed experiment settings of the analytical target.
struct AnalyticalTargetSpec {
  cplx c_g = 1.0;
  cplx c_e = 0.0;
  double t_C = 2.9;
  double g0 = 1.5713484026367723;
};

// Columns spanning the rank-2 target R(theta) rho'(t_C) R(theta)^dag on a
// basis of size dim: rho = V V^dag.
CMat analytical_target_factor(double alpha, double theta, const AnalyticalTargetSpec& spec, int dim);
CVec css_vector(cplx alpha1, cplx alpha2, double vartheta, int dim);

AnalyticalFit fit_analytical(const JointState& rho, const AnalyticalTargetSpec& spec);
AnalyticalFit fit_analytical(const JointState& rho, cplx c_g, cplx c_e, double t_C, double g0);
CssFit fit_css(const JointState& rho);

// Profile sweeps: the constrained parameter is held fixed while the others
// are re-optimized, then both crossings at (best fidelity - drop) are
// bisected.
SensitivityInterval sensitivity_interval(const JointState& rho, const AnalyticalFit& fit,
                                         const AnalyticalTargetSpec& spec, double drop = 0.01);
SensitivityInterval sensitivity_interval(const JointState& rho, const CssFit& fit, double drop = 0.01);

// Generic profile-crossing search. profile(best) should equal best_value.
// Steps outward by `step` up to `max_distance` on each side.
SensitivityInterval profile_interval(const std::function<double(double)>& profile, double best,
                                     double best_value, double drop, double step, double max_distance,
                                     double lower_bound = -INFINITY);

double wrap_angle(double a);

}  // namespace catsim
