// Copyright 2026 The dsindy Authors
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

#include <cstdint>
#include <random>

#include "dsindy/numerics.hpp"

namespace dsindy {

/// Standard normal draws from a 64-bit Mersenne twister via the Box-Muller
/// transform, so a seed reproduces the same stream on every platform (the
/// standard distributions are implementation-defined).
class GaussianNoise {
 public:
  explicit GaussianNoise(std::uint64_t seed) : gen_(seed) {}

  double next();

 private:
  double uniform();  ///< (0, 1]

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Adds N(0, sigma^2) noise to every entry, row-major order.
Mat add_gaussian_noise(const Mat& values, double sigma, std::uint64_t seed);

}  // namespace dsindy
