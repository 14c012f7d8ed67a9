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

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace catsim;

TEST_CASE("Laguerre-Gaussian profile") {
  const AcousticMode mode;
  CHECK(std::abs(lg_profile(mode, 0.0, 0.0)) == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-12));
  CHECK(std::abs(lg_profile(mode, 2.0 * mode.w0_um, 0.3)) < std::abs(lg_profile(mode, 0.0, 0.0)));
  for (int p : {0, 1, 2}) {
    for (int l : {0, 1, -2}) {
      AcousticMode m = mode;
      m.p = p;
      m.l = l;
      CHECK(lg_norm_integral(m) == doctest::Approx(mode.w0_um * mode.w0_um).epsilon(1e-3));
    }
  }
  for (int p : {0, 1}) {
    AcousticMode m = mode;
    m.p = p;
    CHECK(lg_rms_over_disk(m, 2.0 * m.w0_um) == doctest::Approx(0.28).epsilon(0.01));
  }
  AcousticMode m1 = mode;
  m1.l = 1;
  CHECK(std::abs(lg_profile(m1, 0.0, 0.0)) == 0.0);
  CHECK(std::abs(std::arg(lg_profile(m1, 10.0, 0.5) / lg_profile(m1, 10.0, 0.0))) ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("mode normalization") {
  const AcousticMode n = AcousticMode{}.normalized();
  CHECK(n.m == 512);
  CHECK(n.m * std::numbers::pi / n.L_um == doctest::Approx(2.0 * std::numbers::pi / n.lambda_um).epsilon(1e-14));
  CHECK(n.rayleigh_length_um() / n.L_um > 3.0);
  CHECK(n.omega_p() == doctest::Approx(2.0 * std::numbers::pi * n.sound_speed() / (n.lambda_um * units::um)));
  AcousticMode bad;
  bad.w0_um = -1.0;
  CHECK_THROWS_AS(bad.normalized(), std::invalid_argument);
  bad = AcousticMode{};
  bad.p = -1;
  CHECK_THROWS_AS(bad.normalized(), std::invalid_argument);
}

TEST_CASE("effective masses and delocalization") {
  const AcousticMode mode;
  const MassModel rms = mass_model(mode, MassConvention::rms);
  const MassModel mx = mass_model(mode, MassConvention::max);
  CHECK(rms.M0_ug == doctest::Approx(4.0).epsilon(0.03));
  CHECK(rms.M_eff_ug == doctest::Approx(16.2).epsilon(0.05));
  CHECK(mx.M_eff_ug == doctest::Approx(1.0).epsilon(0.05));
  CHECK(mx.M_eff_ug == doctest::Approx(mx.M0_ug / 4.0).epsilon(0.02));

  const double ratio = (2.0 / std::numbers::pi) / (rms.transverse_factor * rms.transverse_factor / 2.0);
  CHECK(rms.M_eff_ug / mx.M_eff_ug == doctest::Approx(ratio).epsilon(1e-12));
  AcousticMode other = mode;
  other.w0_um = 40.0;
  other.L_um = 300.0;
  CHECK(mass_model(other, MassConvention::rms).M_eff_ug / mass_model(other, MassConvention::max).M_eff_ug ==
        doctest::Approx(ratio).epsilon(1e-9));

  const Delocalization dr = delocalization(rms, 1.61);
  const Delocalization dm = delocalization(mx, 1.61);
  CHECK(dr.separation_m == doctest::Approx(2.1e-18).epsilon(0.05));
  CHECK(dm.separation_m == doctest::Approx(8.4e-18).epsilon(0.05));
  CHECK(dr.separation_m / rms.x_zpf_m == doctest::Approx(7.0).epsilon(0.02));
  CHECK(dr.x_eff_m / rms.x_zpf_m == doctest::Approx(std::sqrt(2.0 * (1.0 + 2.0 * 1.61 * 1.61))).epsilon(1e-14));
  CHECK(delocalization(rms, 0.0).x_eff_m == doctest::Approx(std::sqrt(2.0) * rms.x_zpf_m).epsilon(1e-14));

  for (const MassModel* m : {&rms, &mx}) {
    const double M = m->M_eff_ug * units::ug;
    const double x0 = delocalization(*m, 0.0).x_eff_m;
    const double U = 0.5 * M * m->omega_p * m->omega_p * x0 * x0;
    CHECK(U / (0.5 * units::hbar * m->omega_p) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m->x_zpf_m == doctest::Approx(std::sqrt(units::hbar / (2.0 * M * m->omega_p))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(delocalization(rms, -1.0), std::invalid_argument);

  AcousticMode lg1 = mode;
  lg1.l = 1;
  CHECK_THROWS_AS(mass_model(lg1, MassConvention::max), std::invalid_argument);
}

TEST_CASE("units") {
  const double x = 435.0;
  CHECK(x * units::um / units::um == x);
  CHECK(units::ng / units::ug == doctest::Approx(1e-3));
  CHECK(half_wavelength_mass_ng(AcousticMode{}) > 10.0);
  CHECK(half_wavelength_mass_ng(AcousticMode{}) < 100.0);
  CHECK(to_string(MassConvention::rms) == "rms");
  CHECK(to_string(MassConvention::max) == "max");
}
