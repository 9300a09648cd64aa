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

#ifndef ADVRISK_LINALG_HPP
#define ADVRISK_LINALG_HPP

#include <cmath>

#include "advrisk/core.hpp"

namespace advrisk {

struct SpectralEstimate {
  double value = 0.0;
  Vector left;   // unit u with A v = value u
  Vector right;  // unit v
  int iterations = 0;
};

/// Largest singular value by power iteration on A^T A.
///
/// Stops after `max_iterations` or once the relative change of the estimate
/// drops below `rel_tol`. The start vector is a fixed irrational pattern so
/// results are reproducible.
SpectralEstimate power_iteration(const Matrix& a, int max_iterations = 50,
                                 double rel_tol = 1e-10);

double spectral_norm(const Matrix& a);

/// Exact spectral norm via a dense SVD.
double spectral_norm_exact(const Matrix& a);

/// Euclidean projection onto { u : |u - center|_q <= radius } for q in [1, inf].
Vector project_lq_ball(const VectorRef& v, const VectorRef& center, double radius, double q);

/// Point in { |u - center|_q <= eps } ∩ { |u|_2 <= r }, found by alternating
/// projections (at most `rounds`, stopping once both constraints hold to
/// `gap`). The result is pulled toward `center` so that the q-ball constraint
/// holds exactly; `center` must itself lie in the Euclidean ball.
Vector project_ball_intersection(const VectorRef& v, const VectorRef& center, double eps,
                                 double q, double r, int rounds = 50, double gap = 1e-10);

/// Radial projection onto the centred Euclidean ball of radius r. The result
/// satisfies |result| <= r in floating point.
inline Vector clip_to_ball(const VectorRef& v, double r) {
  const double n = v.norm();
  if (n <= r || n == 0.0) return v;
  double scale = r / n;
  Vector out = v * scale;
  while (out.norm() > r) {
    scale = std::nextafter(scale, 0.0);
    out = v * scale;
  }
  return out;
}

}  // namespace advrisk

#endif  // ADVRISK_LINALG_HPP
