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

#include "catsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace catsim::io {

ConfigError::ConfigError(const std::string& path, const std::string& message)
    : std::runtime_error(path.empty() ? message : path + ": " + message), path_(path) {}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void dump_string(std::ostringstream& os, const std::string& s) {
  os << json(s).dump();
}

void dump_value(std::ostringstream& os, const json& j, int indent) {
  const std::string pad(static_cast<size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad_in;
        dump_string(os, it.key());
        os << ": ";
        dump_value(os, it.value(), indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (flat) {
        os << "[";
        for (size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          dump_value(os, j[i], indent + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad_in;
        dump_value(os, j[i], indent + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      os << (std::isfinite(v) ? format_double(v) : std::string("null"));
      return;
    }
    default:
      os << j.dump();
  }
}

template <class Row>
std::string csv(const std::string& header, size_t rows, Row row) {
  std::ostringstream os;
  os << header << '\n';
  for (size_t i = 0; i < rows; ++i) {
    row(os, i);
    os << '\n';
  }
  return os.str();
}

}  // namespace

std::string dump(const json& j) {
  std::ostringstream os;
  dump_value(os, j, 0);
  os << '\n';
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("failed writing " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("", "cannot open config file " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string trajectory_csv(const Trajectory& traj) {
  static const char* cols[] = {"P_e", "purity", "sx", "sy", "sz", "n_mean"};
  return csv("t,P_e,purity,sx,sy,sz,n_mean", traj.times.size(), [&](std::ostringstream& os, size_t i) {
    os << format_double(traj.times[i]);
    for (const char* c : cols) os << ',' << format_double(traj.observable(c)[i]);
  });
}

std::string wigner_csv(const WignerGrid& grid) {
  return csv("re_beta,im_beta,w", grid.size(), [&](std::ostringstream& os, size_t i) {
    os << format_double(grid.points[i].real()) << ',' << format_double(grid.points[i].imag()) << ','
       << format_double(grid.values[i]);
  });
}

std::string samples_csv(const WignerSampleSet& s) {
  return csv("re_beta,im_beta,parity,shots", s.betas.size(), [&](std::ostringstream& os, size_t i) {
    os << format_double(s.betas[i].real()) << ',' << format_double(s.betas[i].imag()) << ','
       << format_double(s.measured_parities[i]) << ',' << s.shots_per_point;
  });
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json density_to_json(const CMat& rho) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < rho.cols(); ++k) row.push_back(complex_to_json(rho(i, k)));
    rows.push_back(std::move(row));
  }
  return json{{"dim", rho.rows()}, {"layout", "row-major [re, im]"}, {"data", std::move(rows)}};
}

json to_json(const CharacteristicTimes& t) {
  return json{{"t_collapse", t.t_collapse}, {"t_R", t.t_R}, {"t_C", t.t_C}};
}

json to_json(const ParityNormalization& n) {
  return json{{"amplitude", n.amplitude}, {"offset", n.offset}, {"applied", n.applied}};
}

json to_json(const DriveCalibration& c) {
  return json{{"B", c.B}, {"C", c.C}, {"residual", c.residual}, {"nonmonotone_warning", c.nonmonotone_warning}};
}

json to_json(const AnalyticalFit& f) {
  return json{{"alpha_fit", f.alpha_fit},   {"theta", f.theta},         {"fidelity", f.fidelity},
              {"evaluations", f.evaluations}, {"converged", f.converged}};
}

json to_json(const CssFit& f) {
  return json{{"alpha1", complex_to_json(f.alpha1)}, {"alpha2", complex_to_json(f.alpha2)},
              {"vartheta", f.vartheta},              {"D", f.D},
              {"fidelity", f.fidelity},              {"evaluations", f.evaluations},
              {"converged", f.converged}};
}

json to_json(const SensitivityInterval& s) {
  return json{{"best", s.best},           {"low", s.low},           {"high", s.high},
              {"drop", s.drop},           {"low_found", s.low_found}, {"high_found", s.high_found}};
}

json to_json(const NegativityDecayFit& f) {
  return json{{"tau_cat", f.tau_cat}, {"amplitude", f.amplitude}, {"offset", f.offset}, {"residual", f.residual}};
}

json to_json(const MassModel& m) {
  return json{{"convention", to_string(m.convention)},
              {"S0", m.S0},
              {"M0_ug", m.M0_ug},
              {"M_eff_ug", m.M_eff_ug},
              {"x_zpf_m", m.x_zpf_m},
              {"omega_p", m.omega_p},
              {"transverse_factor", m.transverse_factor}};
}

ConfigReader::ConfigReader(const json& object, std::string path) : object_(&object), path_(std::move(path)) {
  if (!object.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
}

std::string ConfigReader::field(const std::string& key) const {
  if (key.empty()) return path_.empty() ? "<root>" : path_;
  return path_.empty() ? key : path_ + "." + key;
}

bool ConfigReader::has(const std::string& key) const { return object_->contains(key); }

const json& ConfigReader::value(const std::string& key) {
  seen_.insert(key);
  if (!object_->contains(key)) throw ConfigError(field(key), "required field is missing");
  return (*object_)[key];
}

double ConfigReader::number(const std::string& key) {
  const json& v = value(key);
  if (!v.is_number()) throw ConfigError(field(key), "expected a number");
  return v.get<double>();
}

double ConfigReader::number(const std::string& key, double fallback) {
  seen_.insert(key);
  return has(key) ? number(key) : fallback;
}

int ConfigReader::integer(const std::string& key) {
  const json& v = value(key);
  if (!v.is_number_integer()) throw ConfigError(field(key), "expected an integer");
  const auto i = v.get<long long>();
  if (i < INT32_MIN || i > INT32_MAX) throw ConfigError(field(key), "integer out of range");
  return static_cast<int>(i);
}

int ConfigReader::integer(const std::string& key, int fallback) {
  seen_.insert(key);
  return has(key) ? integer(key) : fallback;
}

std::uint64_t ConfigReader::unsigned_integer(const std::string& key, std::uint64_t fallback) {
  seen_.insert(key);
  if (!has(key)) return fallback;
  const json& v = value(key);
  if (!v.is_number_unsigned()) throw ConfigError(field(key), "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

bool ConfigReader::boolean(const std::string& key, bool fallback) {
  seen_.insert(key);
  if (!has(key)) return fallback;
  const json& v = value(key);
  if (!v.is_boolean()) throw ConfigError(field(key), "expected true or false");
  return v.get<bool>();
}

std::string ConfigReader::string(const std::string& key, const std::string& fallback) {
  seen_.insert(key);
  if (!has(key)) return fallback;
  const json& v = value(key);
  if (!v.is_string()) throw ConfigError(field(key), "expected a string");
  return v.get<std::string>();
}

cplx ConfigReader::complex(const std::string& key, cplx fallback) {
  seen_.insert(key);
  if (!has(key)) return fallback;
  const json& v = value(key);
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(field(key), "expected a number or a [re, im] pair");
}

std::vector<double> ConfigReader::numbers(const std::string& key, const std::vector<double>& fallback) {
  seen_.insert(key);
  if (!has(key)) return fallback;
  const json& v = value(key);
  if (!v.is_array()) throw ConfigError(field(key), "expected an array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(field(key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

ConfigReader ConfigReader::child(const std::string& key) {
  static const json empty = json::object();
  seen_.insert(key);
  if (!has(key)) return ConfigReader(empty, field(key));
  const json& v = value(key);
  if (!v.is_object()) throw ConfigError(field(key), "expected an object");
  return ConfigReader(v, field(key));
}

std::vector<ConfigReader> ConfigReader::children(const std::string& key) {
  seen_.insert(key);
  std::vector<ConfigReader> out;
  if (!has(key)) return out;
  const json& v = value(key);
  if (!v.is_array()) throw ConfigError(field(key), "expected an array of objects");
  for (size_t i = 0; i < v.size(); ++i) {
    const std::string p = field(key) + "[" + std::to_string(i) + "]";
    if (!v[i].is_object()) throw ConfigError(p, "expected an object");
    out.emplace_back(v[i], p);
  }
  return out;
}

void ConfigReader::finish() const {
  for (auto it = object_->begin(); it != object_->end(); ++it) {
    if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown field");
  }
}

json parse_config(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", source + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

}  // namespace catsim::io
