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

#include "catsim/acoustics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/laguerre.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace catsim {

namespace {

constexpr double kPi = std::numbers::pi;

double lg_abs2(const AcousticMode& mode, double r_um) {
  return std::norm(lg_profile(mode, r_um, 0.0));
}

}  // namespace

AcousticMode AcousticMode::normalized() const {
  if (!(w0_um > 0.0) || !(L_um > 0.0) || !(lambda_um > 0.0)) {
    throw std::invalid_argument("AcousticMode: w0, L and lambda must be positive");
  }
  if (!(c33 > 0.0) || !(density > 0.0)) throw std::invalid_argument("AcousticMode: c33 and density must be positive");
  if (p < 0) throw std::invalid_argument("AcousticMode: radial index p must be >= 0");
  if (m < 0) throw std::invalid_argument("AcousticMode: longitudinal index m must be >= 1");
  AcousticMode out = *this;
  if (out.m == 0) out.m = static_cast<int>(std::lround(2.0 * L_um / lambda_um));
  if (out.m < 1) throw std::invalid_argument("AcousticMode: derived longitudinal index is zero");
  out.lambda_um = 2.0 * L_um / out.m;
  return out;
}

double AcousticMode::rayleigh_length_um() const { return kPi * w0_um * w0_um / lambda_um; }
double AcousticMode::sound_speed() const { return std::sqrt(c33 / density); }
double AcousticMode::omega_p() const { return 2.0 * kPi * sound_speed() / (lambda_um * units::um); }

std::complex<double> lg_profile(const AcousticMode& mode, double r_um, double phi) {
  if (r_um < 0.0) throw std::invalid_argument("lg_profile: r must be >= 0");
  const unsigned p = static_cast<unsigned>(mode.p);
  const unsigned al = static_cast<unsigned>(std::abs(mode.l));
  const double pref = std::sqrt(2.0 * boost::math::factorial<double>(p) /
                                (kPi * boost::math::factorial<double>(p + al)));
  const double x = r_um / mode.w0_um;
  const double radial = pref * std::pow(x * std::sqrt(2.0), static_cast<double>(al)) * std::exp(-x * x) *
                        boost::math::laguerre(p, al, 2.0 * x * x);
  return std::polar(radial, -mode.l * phi);
}

double lg_rms_over_disk(const AcousticMode& mode, double radius_um) {
  if (!(radius_um > 0.0)) throw std::invalid_argument("lg_rms_over_disk: radius must be positive");
  using boost::math::quadrature::gauss_kronrod;
  const double integral =
      2.0 * kPi * gauss_kronrod<double, 61>::integrate([&](double r) { return r * lg_abs2(mode, r); }, 0.0,
                                                         radius_um, 15, 1e-13);
  return std::sqrt(integral / (kPi * radius_um * radius_um));
}

double lg_norm_integral(const AcousticMode& mode) {
  using boost::math::quadrature::gauss_kronrod;
  const double rmax = mode.w0_um * (8.0 + 2.0 * std::sqrt(static_cast<double>(mode.p + std::abs(mode.l))));
  return 2.0 * kPi * gauss_kronrod<double, 61>::integrate([&](double r) { return r * lg_abs2(mode, r); }, 0.0,
                                                            rmax, 15, 1e-13);
}

MassModel mass_model(const AcousticMode& raw, MassConvention convention) {
  const AcousticMode mode = raw.normalized();
  const double w0 = mode.w0_um * units::um;
  const double L = mode.L_um * units::um;
  MassModel mm;
  mm.convention = convention;
  mm.omega_p = mode.omega_p();
  mm.S0 = std::sqrt(4.0 * units::hbar * mm.omega_p / (L * w0 * w0 * mode.c33));
  const double M0 = mode.density * kPi * w0 * w0 * L;
  mm.M0_ug = M0 / units::ug;

  if (convention == MassConvention::max) {
    if (mode.l != 0) throw std::invalid_argument("mass_model: the max convention needs l = 0");
    mm.transverse_factor = std::abs(lg_profile(mode, 0.0, 0.0));
  } else {
    mm.transverse_factor = lg_rms_over_disk(mode, 2.0 * mode.w0_um);
  }
  // Displacement amplitude per phonon: (L / m pi) * t * S0, with the cosine
  // RMS 1/sqrt(2) folded into t for the rms convention.
  const double t = convention == MassConvention::max ? mm.transverse_factor : mm.transverse_factor / std::sqrt(2.0);
  const double x = L / (mode.m * kPi) * t * mm.S0;
  const double scale = mm.S0 * mm.S0 * L * L / (2.0 * kPi * kPi * kPi * mode.m * mode.m * x * x);
  const double M_eff = scale * M0;
  mm.M_eff_ug = M_eff / units::ug;
  mm.x_zpf_m = std::sqrt(units::hbar / (2.0 * M_eff * mm.omega_p));
  return mm;
}

Delocalization delocalization(const MassModel& model, double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("delocalization: alpha must be >= 0");
  const double x = std::sqrt(2.0 * (1.0 + 2.0 * alpha * alpha)) * model.x_zpf_m;
  return {x, 2.0 * x};
}

double half_wavelength_mass_ng(const AcousticMode& raw) {
  const AcousticMode mode = raw.normalized();
  const double r = 2.0 * mode.w0_um * units::um;
  return mode.density * kPi * r * r * 0.5 * mode.lambda_um * units::um / units::ng;
}

std::string to_string(MassConvention c) { return c == MassConvention::max ? "max" : "rms"; }

}  // namespace catsim
