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

#include "catsim/acoustics.hpp"
#include "catsim/catfit.hpp"
#include "catsim/dynamics.hpp"
#include "catsim/phase_space.hpp"
#include "catsim/tomography.hpp"

#include <json.hpp>

#include <set>
#include <stdexcept>
#include <string>

namespace catsim::io {

using json = nlohmann::ordered_json;

// Config problem tied to a JSON field path such as "system.alpha".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// "%.17g"; non-finite values print as nan, inf, -inf.
std::string format_double(double v);

// Serializes with every floating-point number printed by format_double.
// Non-finite numbers become null. Two-space indentation, LF line endings,
// trailing newline.
std::string dump(const json& j);

// Writes bytes unchanged (no newline translation).
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

std::string trajectory_csv(const Trajectory& traj);
std::string wigner_csv(const WignerGrid& grid);
std::string samples_csv(const WignerSampleSet& samples);

json complex_to_json(cplx z);
json density_to_json(const CMat& rho);
json to_json(const CharacteristicTimes& t);
json to_json(const ParityNormalization& n);
json to_json(const DriveCalibration& c);
json to_json(const AnalyticalFit& f);
json to_json(const CssFit& f);
json to_json(const SensitivityInterval& s);
json to_json(const NegativityDecayFit& f);
json to_json(const MassModel& m);

// Strict view of a JSON object. Every key read is recorded; finish() rejects
// keys that were never read.
class ConfigReader {
 public:
  ConfigReader(const json& object, std::string path);

  bool has(const std::string& key) const;
  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  int integer(const std::string& key);
  int integer(const std::string& key, int fallback);
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string string(const std::string& key, const std::string& fallback);
  // A number or a [re, im] pair.
  cplx complex(const std::string& key, cplx fallback);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);
  ConfigReader child(const std::string& key);
  std::vector<ConfigReader> children(const std::string& key);

  void finish() const;
  std::string field(const std::string& key) const;

 private:
  const json& value(const std::string& key);
  const json* object_;
  std::string path_;
  std::set<std::string> seen_;
};

// Parses text; syntax errors become ConfigError with the byte position.
json parse_config(const std::string& text, const std::string& source);

}  // namespace catsim::io
