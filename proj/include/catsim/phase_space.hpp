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

#include <string>
#include <vector>

namespace catsim {

enum class GridLayout { slice, raster, scattered };

// Sampled Wigner function normalized to unit area. Rasters are stored
// row-major by Im(beta) then Re(beta): index = iy * nx + ix.
struct WignerGrid {
  GridLayout layout = GridLayout::scattered;
  std::vector<cplx> points;
  std::vector<double> values;
  std::vector<bool> flagged;  // point outside the truncation-trustworthy disk
  int nx = 0;
  int ny = 0;
  double dx = 0.0;  // raster spacing in Re, or arc-length spacing of a slice
  double dy = 0.0;

  static WignerGrid raster(double re_min, double re_max, int nx, double im_min, double im_max, int ny);
  static WignerGrid slice(cplx start, cplx stop, int count);
  static WignerGrid scattered(std::vector<cplx> pts);
  // 81 x 81 on [-3.5, 3.5]^2 and 101 points along the real axis.
  static WignerGrid default_raster();
  static WignerGrid default_slice();

  size_t size() const { return points.size(); }
  int flagged_count() const;
};

// W(beta) = (2/pi) Tr[rho D(beta) Pi D(beta)^dag] for a phonon density matrix.
double wigner_value(const CMat& rho, cplx beta);
WignerGrid wigner(const JointState& phonon_state, WignerGrid grid);
WignerGrid wigner(const CMat& rho, WignerGrid grid);

// Trapezoidal integral of W over the grid (line integral for slices).
double integrate(const WignerGrid& grid);
// Integral of |W| - W; values below 1e-12 are reported as 0.
double negativity(const WignerGrid& grid);

// Wigner function of the even cat N(|a> + e^{i vartheta}|-a>) after amplitude
// damping for time t at rate kappa, eps = exp(-kappa t / 2).
double decayed_css_wigner_value(cplx alpha, double eps, cplx beta, double vartheta = 0.0);
WignerGrid decayed_css_wigner(cplx alpha, double kappa, double t, WignerGrid grid, double vartheta = 0.0);

struct NegativityDecayFit {
  double tau_cat = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double residual = 0.0;  // rms
};

NegativityDecayFit fit_negativity_decay(const std::vector<double>& taus, const std::vector<double>& deltas);

double tau_cat_large_alpha(cplx alpha, double t1_phonon);

struct NegativitySweep {
  std::vector<double> taus;
  std::vector<double> deltas;
  NegativityDecayFit fit;
};

// Negativity of the analytically decayed cat over wait times, then fitted.
NegativitySweep analytic_negativity_sweep(cplx alpha, double t1_phonon, double vartheta,
                                          const std::vector<double>& taus, const WignerGrid& grid);

}  // namespace catsim
