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

#include "catsim/catfit.hpp"
#include "catsim/dynamics.hpp"
#include "catsim/phase_space.hpp"
#include "catsim/tomography.hpp"

#include <vector>

namespace catsim {

// One drive setting of the cat-preparation protocol: the coherent amplitude
// reached by the drive and the JC interaction time.
struct DriveSetting {
  double drive_amplitude = 0.35;
  double alpha = 1.75;
  double t_C = 2.9;
};

// The three settings used for the decay and fit comparisons.
std::vector<DriveSetting> default_drive_settings();

struct PipelineConfig {
  double g0 = std::sqrt(2.0) / 0.9;
  double kappa_phonon = 1.0 / 84.0;
  double gamma_qubit = 1.0 / 15.0;
  double gamma_phi = 1.0 / 30.0;
  int n_max = 24;

  ReadoutModel readout{1.0, 0.0, 1000, 7, 0.15};
  double grid_half_width = 2.5;
  int grid_points = 15;
  int reconstruction_n_max = 13;
  MleOptions mle{1000, 1e-10, 1.0, 0.5, true};

  std::vector<double> wait_times = linspace(0.0, 40.0, 21);
  double slice_half_width = 3.5;
  int slice_points = 101;
  double sensitivity_drop = 0.01;

  void validate() const;
  SystemParams system(const DriveSetting& s) const;
};

// Qubit |g> and phonon |alpha>, evolved under the noisy master equation for
// t_C, with the qubit traced out.
JointState prepare_cat(const PipelineConfig& cfg, const DriveSetting& setting);

struct FreeDecay {
  std::vector<double> taus;
  std::vector<double> deltas;
  NegativityDecayFit fit;
};

// Phonon-only amplitude damping of a prepared state with the negativity of
// the Im(beta) = 0 slice recorded at each wait time and fitted.
FreeDecay free_decay_negativity(const PipelineConfig& cfg, const JointState& phonon_state);

struct PipelineResult {
  DriveSetting setting;
  JointState prepared;
  WignerSampleSet samples;
  ParityNormalization normalization;
  MleResult reconstruction;
  double reconstruction_fidelity = 0.0;  // to the prepared state
  AnalyticalFit analytical;
  SensitivityInterval analytical_interval;
  CssFit css;
  SensitivityInterval css_interval;
};

// Tomography, reconstruction and both target fits for one setting.
PipelineResult run_tomography_pipeline(const PipelineConfig& cfg, const DriveSetting& setting,
                                       bool with_intervals = true);

}  // namespace catsim
