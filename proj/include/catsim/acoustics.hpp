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

#include <complex>
#include <string>

namespace catsim {

namespace units {
inline constexpr double um = 1e-6;        // m
inline constexpr double ug = 1e-9;        // kg
inline constexpr double ng = 1e-12;       // kg
inline constexpr double hbar = 1.054571817e-34;  // J s
}  // namespace units

// Inferred stiffness that reproduces the quoted delocalization numbers for
// the default geometry with sapphire density; not a tabulated constant.
inline constexpr double kDefaultC33 = 4.0464e11;  // Pa
inline constexpr double kSapphireDensity = 3980.0;  // kg/m^3

// Geometry in micrometres, material constants in SI.
struct AcousticMode {
  double w0_um = 27.0;
  double L_um = 435.0;
  double lambda_um = 1.7;
  int m = 0;  // longitudinal index; 0 derives round(2L/lambda)
  int p = 0;
  int l = 0;
  double c33 = kDefaultC33;
  double density = kSapphireDensity;

  // Validates, derives m and snaps lambda to 2L/m.
  AcousticMode normalized() const;
  double rayleigh_length_um() const;  // pi w0^2 / lambda
  double sound_speed() const;         // m/s
  double omega_p() const;             // rad/s
};

enum class MassConvention { max, rms };

struct MassModel {
  MassConvention convention = MassConvention::rms;
  double S0 = 0.0;         // strain per phonon
  double M0_ug = 0.0;
  double M_eff_ug = 0.0;
  double x_zpf_m = 0.0;
  double omega_p = 0.0;    // rad/s
  double transverse_factor = 0.0;  // sqrt(2/pi) or the disk RMS of |LG|
};

std::complex<double> lg_profile(const AcousticMode& mode, double r_um, double phi);
// sqrt( (1/(pi R^2)) int_disk |LG|^2 ) by quadrature.
double lg_rms_over_disk(const AcousticMode& mode, double radius_um);
// int |LG|^2 r dr dphi over the plane (should equal w0^2), in um^2.
double lg_norm_integral(const AcousticMode& mode);

MassModel mass_model(const AcousticMode& mode, MassConvention convention);

struct Delocalization {
  double x_eff_m;
  double separation_m;
};

Delocalization delocalization(const MassModel& model, double alpha);

// rho * pi (2 w0)^2 * lambda / 2: order-of-magnitude half-wavelength mass.
double half_wavelength_mass_ng(const AcousticMode& mode);

std::string to_string(MassConvention c);

}  // namespace catsim
