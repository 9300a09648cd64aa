/*
 * Copyright 2026 The advrisk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ADVRISK_SYNTH_HPP
#define ADVRISK_SYNTH_HPP

#include <cstdint>

#include "advrisk/core.hpp"
#include "advrisk/model_io.hpp"

namespace advrisk {

/// Class c is centred on a circle of radius `separation` in the first two
/// coordinates (binary: +-separation e_1) with isotropic Gaussian spread;
/// samples are clipped radially into the feature ball. Binary labels are
/// {-1, +1}, otherwise {1..classes}. Classes alternate by index.
Dataset gaussian_blobs(int n, int dim, int classes, double separation, double spread,
                       double radius, std::uint64_t seed);

/// Uniform points in the feature ball with uniform labels, kept only when
/// y * x_1 >= margin / 2 (rejection sampling).
Dataset margin_separable(int n, int dim, double margin, double radius, std::uint64_t seed);

struct SubspaceSample {
  Dataset data;
  Matrix basis;  // generating m x k orthonormal basis
};

/// Gaussian coordinates in a random k-dimensional subspace of R^m plus
/// isotropic noise, clipped radially into the ball. Unlabeled.
SubspaceSample subspace_plus_noise(int n, int m, int k, double noise, double radius,
                                   std::uint64_t seed);

/// Builds a dataset from a JSON descriptor {"family": ..., parameters...}.
/// A "seed" field in the descriptor overrides `seed`.
Dataset synthesize_dataset(const Json& desc, std::uint64_t seed);

}  // namespace advrisk

#endif  // ADVRISK_SYNTH_HPP
