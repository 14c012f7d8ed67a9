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

#include <random>

namespace catsim::testing {

// Random density matrix of the given rank from a seeded Ginibre draw.
inline CMat random_density(int dim, int rank, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CMat g(dim, rank);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < rank; ++k) g(i, k) = cplx(nd(rng), nd(rng));
  CMat r = g * g.adjoint();
  r /= r.trace().real();
  return 0.5 * (r + r.adjoint());
}

inline CVec random_vector(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CVec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(nd(rng), nd(rng));
  return v / v.norm();
}

}  // namespace catsim::testing
